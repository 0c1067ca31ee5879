#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accelcoh/gaussian.hpp"
#include "accelcoh/modes.hpp"
#include "accelcoh/overlaps.hpp"

namespace accelcoh {

/// SplitMix64 (Steele, Lea & Flood 2014): state advances by the golden-ratio
/// increment 0x9E3779B97F4A7C15 and is finalized with the multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

/// Independent stream for record `index` of a run seeded with `seed`.
SplitMix64 record_stream(std::uint64_t seed, std::uint64_t index);

struct Range {
  double lo;
  double hi;
};

struct ScanConfig {
  std::uint64_t seed = 42;
  std::size_t count = 2000;
  Range r_range{1.0, 3.0};
  Range accel_range{0.01, 0.2};
  Range width_range{1.0, 3.0};
  Range omega0_range{4.0, 6.0};
  double mass = 0.1;
  OccupationConvention convention = OccupationConvention::physical;
  int workers = 1;
  std::optional<std::filesystem::path> cache_dir;  // unset: no overlap cache

  /// Throws ConfigError for empty/unordered ranges, count == 0, workers < 1.
  void validate() const;
};

struct ScanRecord {
  std::size_t index = 0;
  double r = 0.0;
  double accel_I = 0.0;
  double accel_II = 0.0;
  double width = 0.0;
  double omega0 = 0.0;
  double alpha_I = 0.0;
  double alpha_II = 0.0;
  double mismatch = 0.0;
  double coherence = 0.0;
};

/// Draws per record r, accel_I, accel_II, width, omega0 (in that order)
/// uniformly from the ranges, redrawing until both observers' specs pass the
/// ModeSpec guards. More than 100 draws for one record (a rejection rate
/// above 99%) is a ConfigError.
struct SampledParameters {
  double r;
  ModeSpec spec_I;
  ModeSpec spec_II;
};
SampledParameters sample_parameters(const ScanConfig& config, std::size_t index);

/// Exactly config.count records ordered by index. Each record depends only on
/// (seed, index, config), so the output is bit-identical for any worker count.
std::vector<ScanRecord> random_scan(const ScanConfig& config);

/// Coherence of TMSV(r) through the simplified channel built from both modes.
ScanRecord evaluate_record(const ScanConfig& config, std::size_t index);

struct SurfaceRow {
  double accel_I = 0.0;
  double accel_II = 0.0;
  std::optional<double> coherence;
  std::string skipped;
};

/// C(sigma_out) over the product grid accels_I x accels_II (accel_II fastest).
/// width, omega0 and mass come from `base`.
std::vector<SurfaceRow> coherence_surface(std::span<const double> accels_I,
                                          std::span<const double> accels_II, double r,
                                          const ModeSpec& base,
                                          OccupationConvention convention,
                                          const std::optional<std::filesystem::path>& cache_dir,
                                          int workers = 1);

struct ContourPoint {
  double r;
  double mismatch;
};

struct Contour {
  double level = 0.0;  // global median of C
  std::vector<std::vector<ContourPoint>> polylines;
  std::vector<double> r_centers;
  std::vector<double> m_centers;
  std::vector<std::pair<std::size_t, std::size_t>> sparse_bins;  // (r_bin, m_bin)
  std::string diagnostic;
};

/// Iso-line of the global median of C through the (r, M) plane. Records are
/// binned on equal-width r bins and equal-count (quantile) M bins; each bin
/// holds the median C of its records, bins with fewer than `min_occupancy`
/// records are flagged and left as gaps, and marching squares runs on the bin
/// centres.
Contour median_contour(std::span<const ScanRecord> records, std::size_t r_bins,
                       std::size_t m_bins, std::size_t min_occupancy = 10);

double median(std::vector<double> values);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Overlaps through the cache when a directory is given, else computed.
OverlapCoefficients obtain_overlaps(const ModeSpec& spec,
                                    const std::optional<std::filesystem::path>& cache_dir);

}  // namespace accelcoh
