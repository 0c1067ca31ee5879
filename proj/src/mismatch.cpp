#include "accelcoh/mismatch.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "accelcoh/errors.hpp"
#include "accelcoh/parallel.hpp"

namespace accelcoh {

std::size_t mismatch_grid_size(const ModeSpec& spec) {
  const double span = spec.center() + 3.0 * spec.width - kMismatchGridStart;
  // The small offset keeps exact multiples of the step (e.g. 15.98 / 0.01) from
  // flooring one short through representation error.
  return static_cast<std::size_t>(std::floor(span / kMismatchGridStep + 1e-9)) + 1;
}

MismatchResult mode_mismatch(const ModeSpec& spec, const ModeNormalization& norms) {
  validate(spec);
  const OutputProfile psi(spec);
  const std::size_t k = mismatch_grid_size(spec);
  const double x0 = spec.center();
  const double wavenumber = spec.wavenumber();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = kMismatchGridStart + static_cast<double>(i) * kMismatchGridStep;
    const double env = envelope(spec, x);
    if (env == 0.0) continue;
    const double phi = norms.input * env * std::sin(wavenumber * (x - x0));
    const double diff = phi - norms.output * psi(x);
    sum += diff * diff;
  }
  return {sum / static_cast<double>(k), k, spec};
}

MismatchResult mode_mismatch(const ModeSpec& spec) {
  validate(spec);
  return mode_mismatch(spec, normalize_modes(spec));
}

double pair_mismatch(const ModeSpec& spec_I, const ModeSpec& spec_II) {
  return 0.5 * (mode_mismatch(spec_I).value + mode_mismatch(spec_II).value);
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::accel: return "accel";
    case SweepParam::width: return "width";
    case SweepParam::omega0: return "omega0";
    case SweepParam::mass: return "mass";
  }
  return "?";
}

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "accel") return SweepParam::accel;
  if (s == "width") return SweepParam::width;
  if (s == "omega0") return SweepParam::omega0;
  if (s == "mass") return SweepParam::mass;
  throw ConfigError("unknown sweep parameter '" + s + "'");
}

void set_param(ModeSpec& spec, SweepParam p, double value) {
  switch (p) {
    case SweepParam::accel: spec.accel = value; break;
    case SweepParam::width: spec.width = value; break;
    case SweepParam::omega0: spec.omega0 = value; break;
    case SweepParam::mass: spec.mass = value; break;
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    // Trim interpolation noise so grid values print as typed (0.06, not 0.060000000000000005).
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", (lo * (last - t) + hi * t) / last);
    out[i] = std::strtod(buf, nullptr);
  }
  return out;
}

std::vector<MismatchRow> mismatch_sweep(const ModeSpec& fixed, const SweepAxis& first,
                                        const std::optional<SweepAxis>& second, int workers) {
  const std::size_t inner = second ? second->values.size() : 1;
  const std::size_t total = first.values.size() * inner;
  std::vector<MismatchRow> rows(total);
  parallel_for_index(total, workers, [&](std::size_t idx) {
    MismatchRow& row = rows[idx];
    row.index = idx;
    ModeSpec spec = fixed;
    row.param1 = first.values[idx / inner];
    set_param(spec, first.param, row.param1);
    if (second) {
      row.param2 = second->values[idx % inner];
      set_param(spec, second->param, *row.param2);
    }
    if (auto why = guard_violation(spec)) {
      row.skipped = *why;
      return;
    }
    row.mismatch = mode_mismatch(spec).value;
  });
  return rows;
}

}  // namespace accelcoh
