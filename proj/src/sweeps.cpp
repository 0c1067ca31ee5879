#include "accelcoh/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "accelcoh/channel.hpp"
#include "accelcoh/errors.hpp"
#include "accelcoh/mismatch.hpp"
#include "accelcoh/parallel.hpp"

namespace accelcoh {

namespace {

constexpr int kMaxDrawsPerRecord = 100;

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo <= r.hi)) {
    std::ostringstream msg;
    msg << "scan config: " << name << " range [" << r.lo << ", " << r.hi
        << "] must be finite and ordered";
    throw ConfigError(msg.str());
  }
}

}  // namespace

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SplitMix64 record_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(SplitMix64::mix(seed) ^ SplitMix64::mix(index + 0x9E3779B97F4A7C15ULL));
}

void ScanConfig::validate() const {
  if (count == 0) throw ConfigError("scan config: count must be > 0");
  if (workers < 1) throw ConfigError("scan config: workers must be >= 1");
  check_range(r_range, "r");
  check_range(accel_range, "accel");
  check_range(width_range, "width");
  check_range(omega0_range, "omega0");
  if (r_range.lo < 0.0) throw ConfigError("scan config: r must be >= 0");
  if (!(accel_range.lo > 0.0)) throw ConfigError("scan config: accel must be > 0");
  if (!(mass >= 0.0)) throw ConfigError("scan config: mass must be >= 0");
}

SampledParameters sample_parameters(const ScanConfig& config, std::size_t index) {
  SplitMix64 rng = record_stream(config.seed, index);
  for (int draw = 0; draw < kMaxDrawsPerRecord; ++draw) {
    SampledParameters p;
    p.r = rng.uniform(config.r_range.lo, config.r_range.hi);
    const double accel_I = rng.uniform(config.accel_range.lo, config.accel_range.hi);
    const double accel_II = rng.uniform(config.accel_range.lo, config.accel_range.hi);
    const double width = rng.uniform(config.width_range.lo, config.width_range.hi);
    const double omega0 = rng.uniform(config.omega0_range.lo, config.omega0_range.hi);
    p.spec_I = ModeSpec{Region::I, accel_I, width, omega0, config.mass};
    p.spec_II = ModeSpec{Region::II, accel_II, width, omega0, config.mass};
    if (!guard_violation(p.spec_I) && !guard_violation(p.spec_II)) return p;
  }
  std::ostringstream msg;
  msg << "scan config: sampling starved at record " << index << " (" << kMaxDrawsPerRecord
      << " consecutive draws violated the mode guards)";
  throw ConfigError(msg.str());
}

OverlapCoefficients obtain_overlaps(const ModeSpec& spec,
                                    const std::optional<std::filesystem::path>& cache_dir) {
  if (cache_dir) return cached_overlaps(spec, *cache_dir);
  return compute_overlaps(spec);
}

ScanRecord evaluate_record(const ScanConfig& config, std::size_t index) {
  const SampledParameters p = sample_parameters(config, index);
  const OverlapCoefficients ov_I = obtain_overlaps(p.spec_I, config.cache_dir);
  const OverlapCoefficients ov_II = obtain_overlaps(p.spec_II, config.cache_dir);

  ScanRecord rec;
  rec.index = index;
  rec.r = p.r;
  rec.accel_I = p.spec_I.accel;
  rec.accel_II = p.spec_II.accel;
  rec.width = p.spec_I.width;
  rec.omega0 = p.spec_I.omega0;
  rec.alpha_I = ov_I.alpha.real();
  rec.alpha_II = ov_II.alpha.real();
  rec.mismatch = 0.5 * (mode_mismatch(p.spec_I, ov_I.norms).value +
                        mode_mismatch(p.spec_II, ov_II.norms).value);
  const auto out = apply(build_simplified(rec.alpha_I, rec.alpha_II),
                         two_mode_squeezed_vacuum(rec.r));
  rec.coherence = coherence(out, config.convention);
  return rec;
}

std::vector<ScanRecord> random_scan(const ScanConfig& config) {
  config.validate();
  std::vector<ScanRecord> records(config.count);
  parallel_for_index(config.count, config.workers,
                     [&](std::size_t i) { records[i] = evaluate_record(config, i); });
  return records;
}

std::vector<SurfaceRow> coherence_surface(std::span<const double> accels_I,
                                          std::span<const double> accels_II, double r,
                                          const ModeSpec& base,
                                          OccupationConvention convention,
                                          const std::optional<std::filesystem::path>& cache_dir,
                                          int workers) {
  // Overlaps depend on one acceleration only; compute each axis value once.
  struct AxisValue {
    std::optional<double> alpha;
    std::string skipped;
  };
  auto resolve_axis = [&](std::span<const double> accels, Region region) {
    std::vector<AxisValue> out(accels.size());
    parallel_for_index(accels.size(), workers, [&](std::size_t i) {
      ModeSpec spec = base;
      spec.region = region;
      spec.accel = accels[i];
      if (auto why = guard_violation(spec)) {
        out[i].skipped = *why;
        return;
      }
      out[i].alpha = obtain_overlaps(spec, cache_dir).alpha.real();
    });
    return out;
  };
  const auto axis_I = resolve_axis(accels_I, Region::I);
  const auto axis_II = resolve_axis(accels_II, Region::II);
  const CovarianceMatrix4 input = two_mode_squeezed_vacuum(r);

  std::vector<SurfaceRow> rows;
  rows.reserve(accels_I.size() * accels_II.size());
  for (std::size_t i = 0; i < accels_I.size(); ++i) {
    for (std::size_t j = 0; j < accels_II.size(); ++j) {
      SurfaceRow row;
      row.accel_I = accels_I[i];
      row.accel_II = accels_II[j];
      if (!axis_I[i].alpha) {
        row.skipped = "accel_I: " + axis_I[i].skipped;
      } else if (!axis_II[j].alpha) {
        row.skipped = "accel_II: " + axis_II[j].skipped;
      } else {
        const auto out = apply(build_simplified(*axis_I[i].alpha, *axis_II[j].alpha), input);
        row.coherence = coherence(out, convention);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Marching-squares edge identifiers: horizontal edges join (i, j)-(i+1, j),
// vertical edges join (i, j)-(i, j+1).
struct EdgeId {
  bool vertical;
  std::size_t i;
  std::size_t j;
  auto operator<=>(const EdgeId&) const = default;
};

}  // namespace

Contour median_contour(std::span<const ScanRecord> records, std::size_t r_bins,
                       std::size_t m_bins, std::size_t min_occupancy) {
  Contour out;
  if (r_bins < 2 || m_bins < 2) throw ConfigError("median_contour: need at least 2x2 bins");
  if (records.empty()) {
    out.diagnostic = "no records";
    return out;
  }
  std::vector<double> cs;
  std::vector<double> ms;
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = -r_min;
  for (const auto& rec : records) {
    cs.push_back(rec.coherence);
    ms.push_back(rec.mismatch);
    r_min = std::min(r_min, rec.r);
    r_max = std::max(r_max, rec.r);
  }
  out.level = median(cs);
  const auto [c_lo, c_hi] = std::minmax_element(cs.begin(), cs.end());
  if (*c_lo == *c_hi) {
    out.diagnostic = "degenerate level set: all coherence values are identical";
    return out;
  }
  if (!(r_max > r_min)) {
    out.diagnostic = "degenerate r range";
    return out;
  }

  std::vector<double> sorted_m(ms);
  std::sort(sorted_m.begin(), sorted_m.end());
  std::vector<double> m_edges(m_bins + 1);
  m_edges.front() = sorted_m.front();
  m_edges.back() = sorted_m.back();
  for (std::size_t b = 1; b < m_bins; ++b) {
    m_edges[b] = sorted_m[b * sorted_m.size() / m_bins];
  }
  const double r_step = (r_max - r_min) / static_cast<double>(r_bins);
  for (std::size_t b = 0; b < r_bins; ++b) {
    out.r_centers.push_back(r_min + (static_cast<double>(b) + 0.5) * r_step);
  }
  for (std::size_t b = 0; b < m_bins; ++b) {
    out.m_centers.push_back(0.5 * (m_edges[b] + m_edges[b + 1]));
  }

  std::vector<std::vector<double>> cell_values(r_bins * m_bins);
  for (const auto& rec : records) {
    const auto ri = std::min(r_bins - 1,
                             static_cast<std::size_t>(std::floor((rec.r - r_min) / r_step)));
    const auto it = std::upper_bound(m_edges.begin() + 1, m_edges.end() - 1, rec.mismatch);
    const auto mi = static_cast<std::size_t>(it - (m_edges.begin() + 1));
    cell_values[ri * m_bins + mi].push_back(rec.coherence);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> grid(r_bins * m_bins, nan);
  for (std::size_t ri = 0; ri < r_bins; ++ri) {
    for (std::size_t mi = 0; mi < m_bins; ++mi) {
      const auto& v = cell_values[ri * m_bins + mi];
      if (v.size() < min_occupancy) {
        out.sparse_bins.emplace_back(ri, mi);
      } else {
        grid[ri * m_bins + mi] = median(v);
      }
    }
  }
  auto value = [&](std::size_t i, std::size_t j) { return grid[i * m_bins + j]; };
  auto point_on = [&](const EdgeId& e) {
    const std::size_t i2 = e.vertical ? e.i : e.i + 1;
    const std::size_t j2 = e.vertical ? e.j + 1 : e.j;
    const double a = value(e.i, e.j);
    const double b = value(i2, j2);
    const double t = (out.level - a) / (b - a);
    return ContourPoint{out.r_centers[e.i] + t * (out.r_centers[i2] - out.r_centers[e.i]),
                        out.m_centers[e.j] + t * (out.m_centers[j2] - out.m_centers[e.j])};
  };

  std::vector<std::pair<EdgeId, EdgeId>> segments;
  for (std::size_t i = 0; i + 1 < r_bins; ++i) {
    for (std::size_t j = 0; j + 1 < m_bins; ++j) {
      const double corner[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1),
                                value(i, j + 1)};
      if (std::any_of(std::begin(corner), std::end(corner),
                      [](double v) { return std::isnan(v); })) {
        continue;
      }
      bool above[4];
      for (int k = 0; k < 4; ++k) above[k] = corner[k] > out.level;
      // Edge k joins corner k and corner k+1 (mod 4).
      const EdgeId edge[4] = {{false, i, j}, {true, i + 1, j}, {false, i, j + 1}, {true, i, j}};
      std::vector<int> crossed;
      for (int k = 0; k < 4; ++k) {
        if (above[k] != above[(k + 1) % 4]) crossed.push_back(k);
      }
      if (crossed.size() == 2) {
        segments.emplace_back(edge[crossed[0]], edge[crossed[1]]);
      } else if (crossed.size() == 4) {
        // Saddle: cut off the two corners that disagree with the cell centre.
        const double centre = 0.25 * (corner[0] + corner[1] + corner[2] + corner[3]);
        const bool centre_above = centre > out.level;
        for (int k = 0; k < 4; ++k) {
          if (above[k] != centre_above) segments.emplace_back(edge[(k + 3) % 4], edge[k]);
        }
      }
    }
  }

  // Chain segments sharing an edge into polylines; open chains first.
  std::map<EdgeId, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  auto walk = [&](EdgeId start) {
    std::vector<ContourPoint> line{point_on(start)};
    EdgeId at = start;
    for (;;) {
      std::optional<std::size_t> next;
      for (std::size_t s : incident[at]) {
        if (!used[s]) {
          next = s;
          break;
        }
      }
      if (!next) break;
      used[*next] = true;
      at = segments[*next].first == at ? segments[*next].second : segments[*next].first;
      line.push_back(point_on(at));
    }
    return line;
  };
  for (const auto& [edge, segs] : incident) {
    if (segs.size() == 1 && !used[segs.front()]) out.polylines.push_back(walk(edge));
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.polylines.push_back(walk(segments[s].first));
  }
  if (out.polylines.empty()) out.diagnostic = "level not crossed within occupied bins";
  if (!out.sparse_bins.empty()) {
    std::ostringstream msg;
    if (!out.diagnostic.empty()) msg << out.diagnostic << "; ";
    msg << out.sparse_bins.size() << " bins below occupancy " << min_occupancy;
    out.diagnostic = msg.str();
  }
  return out;
}

}  // namespace accelcoh
