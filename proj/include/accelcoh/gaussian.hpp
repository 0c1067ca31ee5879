#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>

namespace accelcoh {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

inline constexpr double kPhysicalityTol = 1e-9;

enum class OccupationConvention {
  physical,  // (sigma_11 + sigma_22 - 2) / 4, zero for the vacuum
  paper,     // (sigma_11 + sigma_22) / 4
};

const char* to_string(OccupationConvention c);
OccupationConvention convention_from_string(const std::string& s);

/// Two-mode Gaussian state in quadrature order (q1, p1, q2, p2), vacuum = 1.
/// Construction enforces exact symmetry and symplectic eigenvalues >= 1 - 1e-9.
class CovarianceMatrix4 {
 public:
  explicit CovarianceMatrix4(const Matrix4& entries, const Vector4& first_moments = Vector4::Zero());

  static CovarianceMatrix4 vacuum();

  const Matrix4& entries() const { return entries_; }
  const Vector4& first_moments() const { return first_moments_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix4 entries_;
  Vector4 first_moments_;
};

struct SymplecticSpectrum {
  double nu_minus;
  double nu_plus;
};

/// Closed form for a two-mode state:
///   Delta = det A + det B + 2 det C,  2 nu^2 = Delta -/+ sqrt(Delta^2 - 4 det sigma).
/// Works on a raw matrix so it can also screen candidate states.
SymplecticSpectrum symplectic_eigenvalues(const Matrix4& sigma);
inline SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix4& s) {
  return symplectic_eigenvalues(s.entries());
}

/// Two-mode squeezed vacuum: cosh 2r on the diagonal, +/- sinh 2r coupling.
CovarianceMatrix4 two_mode_squeezed_vacuum(double r);

/// f(nu) = (nu+1)/2 log2((nu+1)/2) - (nu-1)/2 log2((nu-1)/2); nu clamped to >= 1.
double entropy_function(double nu);

/// Bosonic g(n) = (n+1) log2(n+1) - n log2 n with 0 log 0 = 0.
double bose_entropy(double n);

double von_neumann_entropy(const CovarianceMatrix4& sigma);

std::pair<double, double> mean_occupations(const CovarianceMatrix4& sigma,
                                           OccupationConvention convention);

/// Relative entropy of coherence of a zero-mean two-mode Gaussian state:
/// C = -S(sigma) + sum_i g(n_i).
double coherence(const CovarianceMatrix4& sigma,
                 OccupationConvention convention = OccupationConvention::physical);

}  // namespace accelcoh
