#include "accelcoh/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "accelcoh/errors.hpp"

namespace accelcoh {

const char* to_string(OccupationConvention c) {
  return c == OccupationConvention::physical ? "physical" : "paper";
}

OccupationConvention convention_from_string(const std::string& s) {
  if (s == "physical") return OccupationConvention::physical;
  if (s == "paper") return OccupationConvention::paper;
  throw ConfigError("unknown occupation convention '" + s + "' (expected physical or paper)");
}

CovarianceMatrix4::CovarianceMatrix4(const Matrix4& entries, const Vector4& first_moments)
    : entries_(entries), first_moments_(first_moments) {
  if (!entries_.allFinite() || !first_moments_.allFinite()) {
    throw DomainError("CovarianceMatrix4: non-finite entries");
  }
  if (entries_ != entries_.transpose()) {
    throw DomainError("CovarianceMatrix4: matrix is not symmetric");
  }
  const SymplecticSpectrum nu = symplectic_eigenvalues(entries_);
  if (nu.nu_minus < 1.0 - kPhysicalityTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "CovarianceMatrix4: unphysical state, nu_minus = " << nu.nu_minus;
    throw DomainError(msg.str());
  }
}

CovarianceMatrix4 CovarianceMatrix4::vacuum() { return CovarianceMatrix4(Matrix4::Identity()); }

SymplecticSpectrum symplectic_eigenvalues(const Matrix4& sigma) {
  const double det_a = sigma.block<2, 2>(0, 0).determinant();
  const double det_b = sigma.block<2, 2>(2, 2).determinant();
  const double det_c = sigma.block<2, 2>(0, 2).determinant();
  const double delta = det_a + det_b + 2.0 * det_c;

  // Delta^2 - 4 det(sigma) equals tr(M^2) with M the traceless part of
  // K = -(Omega sigma)^2. The trace form keeps its accuracy when the two
  // symplectic eigenvalues nearly coincide (pure states), where the
  // determinant form cancels catastrophically.
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  const Matrix4 os = omega * sigma;
  Matrix4 k = -(os * os);
  k.diagonal().array() -= 0.25 * k.trace();
  double disc = (k * k).trace();
  if (disc < 0.0) {
    if (disc < -1e-9 * std::max(1.0, delta * delta)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "symplectic_eigenvalues: Delta^2 - 4 det sigma = " << disc << " < 0";
      throw NumericError(msg.str());
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double minus_sq = 0.5 * (delta - root);
  const double plus_sq = 0.5 * (delta + root);
  if (!(minus_sq > 0.0)) throw NumericError("symplectic_eigenvalues: non-positive nu_minus^2");
  return {std::sqrt(minus_sq), std::sqrt(plus_sq)};
}

CovarianceMatrix4 two_mode_squeezed_vacuum(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("two_mode_squeezed_vacuum: r must be finite and >= 0");
  }
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Matrix4 m;
  // clang-format off
  m << c,  0,  s,  0,
       0,  c,  0, -s,
       s,  0,  c,  0,
       0, -s,  0,  c;
  // clang-format on
  return CovarianceMatrix4(m);
}

double entropy_function(double nu) {
  if (!(nu > 1.0)) return 0.0;
  const double p = 0.5 * (nu + 1.0);
  const double m = 0.5 * (nu - 1.0);
  return p * std::log2(p) - m * std::log2(m);
}

double bose_entropy(double n) {
  if (!(n > 0.0)) return 0.0;
  return (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
}

double von_neumann_entropy(const CovarianceMatrix4& sigma) {
  const SymplecticSpectrum nu = symplectic_eigenvalues(sigma);
  return entropy_function(nu.nu_minus) + entropy_function(nu.nu_plus);
}

std::pair<double, double> mean_occupations(const CovarianceMatrix4& sigma,
                                           OccupationConvention convention) {
  const double s1 = sigma(0, 0) + sigma(1, 1);
  const double s2 = sigma(2, 2) + sigma(3, 3);
  if (convention == OccupationConvention::paper) return {s1 / 4.0, s2 / 4.0};

  auto clamp = [](double n) {
    if (n < -1e-12) {
      std::cerr << "accelcoh: warning: sub-vacuum diagonal, occupation " << n
                << " clamped to 0\n";
      return 0.0;
    }
    return std::max(n, 0.0);
  };
  return {clamp((s1 - 2.0) / 4.0), clamp((s2 - 2.0) / 4.0)};
}

double coherence(const CovarianceMatrix4& sigma, OccupationConvention convention) {
  if (!sigma.first_moments().isZero(0.0)) {
    throw DomainError("coherence: only zero-mean states are supported");
  }
  const auto [n1, n2] = mean_occupations(sigma, convention);
  return -von_neumann_entropy(sigma) + bose_entropy(n1) + bose_entropy(n2);
}

}  // namespace accelcoh
