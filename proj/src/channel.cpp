#include "accelcoh/channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "accelcoh/errors.hpp"

namespace accelcoh {

namespace {

void require_alpha(double a, const char* name) {
  if (!(a > 0.0) || !(a <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "build_simplified: " << name << " = " << a << " outside (0, 1]";
    throw DomainError(msg.str());
  }
}

Eigen::Matrix2d overlap_block(const OverlapCoefficients& c) {
  const Complex minus = c.alpha - c.beta;
  const Complex plus = c.alpha + c.beta;
  Eigen::Matrix2d b;
  b << minus.real(), -plus.imag(), minus.imag(), plus.real();
  return b;
}

}  // namespace

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

GaussianChannel build_simplified(double alpha_I, double alpha_II) {
  require_alpha(alpha_I, "alpha_I");
  require_alpha(alpha_II, "alpha_II");
  GaussianChannel ch;
  ch.m_matrix = Vector4(alpha_I, alpha_I, alpha_II, alpha_II).asDiagonal();
  const double n1 = 1.0 - alpha_I * alpha_I;
  const double n2 = 1.0 - alpha_II * alpha_II;
  ch.n_matrix = Vector4(n1, n1, n2, n2).asDiagonal();
  ch.mode = ChannelMode::simplified;
  return ch;
}

Matrix4 build_full_m(const OverlapCoefficients& coeffs_I, const OverlapCoefficients& coeffs_II) {
  Matrix4 m = Matrix4::Zero();
  m.block<2, 2>(0, 0) = overlap_block(coeffs_I);
  m.block<2, 2>(2, 2) = overlap_block(coeffs_II);
  return m;
}

GaussianChannel build_full_m_diagnostic(const OverlapCoefficients& coeffs_I,
                                        const OverlapCoefficients& coeffs_II) {
  GaussianChannel ch = build_simplified(std::abs(coeffs_I.alpha), std::abs(coeffs_II.alpha));
  ch.m_matrix = build_full_m(coeffs_I, coeffs_II);
  ch.mode = ChannelMode::full_m_diagnostic;
  return ch;
}

bool is_completely_positive(const GaussianChannel& channel, double tol) {
  const Matrix4 omega = symplectic_form();
  const Matrix4 skew = omega - channel.m_matrix * omega * channel.m_matrix.transpose();
  const Eigen::Matrix4cd h =
      channel.n_matrix.cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * skew;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

CovarianceMatrix4 apply(const GaussianChannel& channel, const CovarianceMatrix4& state) {
  if (channel.mode != ChannelMode::simplified) {
    throw UnsupportedOperation(
        "apply: full-M diagnostic channels have no consistent noise matrix");
  }
  const Matrix4& m = channel.m_matrix;
  Matrix4 out = m * state.entries() * m.transpose() + channel.n_matrix;
  // Rounding can leave the product asymmetric in the last bit.
  out = (0.5 * (out + out.transpose())).eval();
  return CovarianceMatrix4(out, m * state.first_moments());
}

CovarianceMatrix4 output_tmsv_closed_form(double alpha_I, double alpha_II, double r) {
  if (!(r >= 0.0)) throw DomainError("output_tmsv_closed_form: r must be >= 0");
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  const double a2 = alpha_I * alpha_I;
  const double b2 = alpha_II * alpha_II;
  // a^2 c + (1 - a^2) is exact at both a = 1 and c = 1.
  const double x = a2 * c + (1.0 - a2);
  const double y = alpha_I * alpha_II * s;
  const double z = b2 * c + (1.0 - b2);
  Matrix4 m;
  // clang-format off
  m << x,  0,  y,  0,
       0,  x,  0, -y,
       y,  0,  z,  0,
       0, -y,  0,  z;
  // clang-format on
  return CovarianceMatrix4(m);
}

}  // namespace accelcoh
