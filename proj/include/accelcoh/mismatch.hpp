#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "accelcoh/modes.hpp"

namespace accelcoh {

inline constexpr double kMismatchGridStart = 0.02;
inline constexpr double kMismatchGridStep = 0.01;

struct MismatchResult {
  double value = 0.0;  // mean squared difference of the normalized profiles
  std::size_t grid_points = 0;
  ModeSpec spec;
};

/// floor((1/accel + 3 width - 0.02) / 0.01) + 1.
std::size_t mismatch_grid_size(const ModeSpec& spec);

/// Mean over x_i = 0.02, 0.03, ..., 1/accel + 3 width of
/// (phi(x_i) - psi(x_i))^2, both profiles at unit Klein-Gordon norm and in
/// region I orientation (region II is mirrored with matching sign).
MismatchResult mode_mismatch(const ModeSpec& spec);

/// Same, reusing normalization constants already computed for this spec.
MismatchResult mode_mismatch(const ModeSpec& spec, const ModeNormalization& norms);

/// (M_I + M_II) / 2.
double pair_mismatch(const ModeSpec& spec_I, const ModeSpec& spec_II);

enum class SweepParam { accel, width, omega0, mass };

const char* to_string(SweepParam p);
SweepParam sweep_param_from_string(const std::string& s);

struct SweepAxis {
  SweepParam param;
  std::vector<double> values;
};

struct MismatchRow {
  std::size_t index = 0;
  double param1 = 0.0;
  std::optional<double> param2;
  std::optional<double> mismatch;  // empty when the point was skipped
  std::string skipped;             // guard violation for skipped points
};

/// Mismatch over one axis or the product of two (second axis varying fastest),
/// other parameters taken from `fixed`. Points that break a ModeSpec guard are
/// returned as skipped rows. Output is ordered by grid index for any worker
/// count.
std::vector<MismatchRow> mismatch_sweep(const ModeSpec& fixed, const SweepAxis& first,
                                        const std::optional<SweepAxis>& second = std::nullopt,
                                        int workers = 1);

/// n evenly spaced values from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

void set_param(ModeSpec& spec, SweepParam p, double value);

}  // namespace accelcoh
