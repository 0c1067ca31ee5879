#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accelcoh/modes.hpp"

namespace accelcoh {

/// Bogolyubov pair alpha = (psi, phi), beta = -(psi, phi*) for one mode.
/// Both are real under the real-profile phase convention but are kept complex
/// so the full channel matrix can consume them unchanged.
struct OverlapCoefficients {
  Complex alpha;
  Complex beta;
  ModeSpec spec;
  double quadrature_tol = 1e-8;
  ModeNormalization norms;  // C, C' and the quadrature diagnostics
};

struct OverlapOptions {
  double rel_tol = 1e-8;
  int max_bisections = 12;
};

/// Klein-Gordon overlaps on the t = eta = 0 surface:
///   alpha = omega0 * integral psi(x) phi(x) (1 + x0 / x) dx
///   beta  = omega0 * integral psi(x) phi(x) (1 - x0 / x) dx
/// with both modes normalized, evaluated together with the two norms by
/// adaptive 16-point Gauss-Legendre quadrature.
OverlapCoefficients compute_overlaps(const ModeSpec& spec, const OverlapOptions& opt = {});

struct OverlapCurvePoint {
  double accel = 0.0;
  std::optional<OverlapCoefficients> coeffs;
  std::string error;  // set when coeffs is empty
};

/// compute_overlaps for each acceleration (other fields from `base`), in input
/// order. Invalid accelerations yield an error entry; the rest still run.
std::vector<OverlapCurvePoint> overlap_curve(const ModeSpec& base, std::span<const double> accels,
                                             const OverlapOptions& opt = {});

/// Disk-backed memo of compute_overlaps. One text file per key; writes go to a
/// temporary file and are renamed into place, so concurrent writers never leave
/// a torn entry.
class OverlapCache {
 public:
  explicit OverlapCache(std::filesystem::path dir);

  struct Lookup {
    OverlapCoefficients coeffs;
    bool hit = false;
    std::size_t evaluations = 0;  // quadrature evaluations spent by this call
  };

  Lookup get(const ModeSpec& spec, const OverlapOptions& opt = {}) const;

  static std::string canonical_key(const ModeSpec& spec, const OverlapOptions& opt);
  std::filesystem::path entry_path(const ModeSpec& spec, const OverlapOptions& opt) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

OverlapCoefficients cached_overlaps(const ModeSpec& spec, const std::filesystem::path& cache_dir,
                                    const OverlapOptions& opt = {});

/// Default cache directory: $ACCELCOH_CACHE_DIR, else ".accelcoh-cache".
std::filesystem::path default_cache_dir();

}  // namespace accelcoh
