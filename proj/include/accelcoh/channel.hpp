#pragma once

#include "accelcoh/gaussian.hpp"
#include "accelcoh/overlaps.hpp"

namespace accelcoh {

enum class ChannelMode {
  simplified,          // beta dropped: M = a_I 1 (+) a_II 1, N = (1 - a^2) 1 (+) ...
  full_m_diagnostic,   // M with beta kept; no matching N exists, cannot be applied
};

/// sigma -> M sigma M^T + N, x -> M x.
struct GaussianChannel {
  Matrix4 m_matrix;
  Matrix4 n_matrix;
  ChannelMode mode = ChannelMode::simplified;
};

GaussianChannel build_simplified(double alpha_I, double alpha_II);

/// Block matrix of Re/Im(alpha -/+ beta) for each mode, beta kept.
Matrix4 build_full_m(const OverlapCoefficients& coeffs_I, const OverlapCoefficients& coeffs_II);

/// Wraps build_full_m with the simplified N for inspection only; apply()
/// refuses channels in this mode.
GaussianChannel build_full_m_diagnostic(const OverlapCoefficients& coeffs_I,
                                        const OverlapCoefficients& coeffs_II);

/// True if N + i(Omega - M Omega M^T) has no eigenvalue below -tol.
bool is_completely_positive(const GaussianChannel& channel, double tol = 1e-9);

CovarianceMatrix4 apply(const GaussianChannel& channel, const CovarianceMatrix4& state);

/// Output of the simplified channel on TMSV(r):
///   X = a_I^2 cosh 2r - a_I^2 + 1,  Y = a_I a_II sinh 2r,  Z = a_II^2 cosh 2r - a_II^2 + 1.
CovarianceMatrix4 output_tmsv_closed_form(double alpha_I, double alpha_II, double r);

/// The standard symplectic form (+)[[0, 1], [-1, 0]].
Matrix4 symplectic_form();

}  // namespace accelcoh
