#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "accelcoh/quadrature.hpp"
#include "accelcoh/special_functions.hpp"

namespace accelcoh {

enum class Region { I, II };
enum class ModeKind { input, output };

const char* to_string(Region r);
Region region_from_string(const std::string& s);

// Parameter guards. omega0 * width must damp the negative frequencies and
// the packet must sit well away from the horizon compared to its width.
inline constexpr double kMinOmegaWidth = 5.0;
inline constexpr double kHorizonClearance = 2.5;  // (1 / accel) / width

inline constexpr double kGridFloor = 0.02;
inline constexpr double kMaxGridSpacing = 0.01;
inline constexpr double kEnvelopeThreshold = 1e-12;
inline constexpr int kMinPointsPerPeriod = 20;

/// One localized wave packet. The packet is centred at x0 = 1 / accel, which
/// is also the proper-acceleration radius of the observer carrying it.
struct ModeSpec {
  Region region = Region::I;
  double accel = 0.1;   // proper acceleration
  double width = 2.0;   // L
  double omega0 = 5.0;  // central frequency
  double mass = 0.1;    // field mass

  double center() const { return 1.0 / accel; }
  double wavenumber() const { return std::sqrt(omega0 * omega0 - mass * mass); }
  double bessel_order() const { return omega0 / accel; }
  double period() const;
};

/// Fig. 1 parameters: accel 0.1, width 2, omega0 5, mass 0.1.
ModeSpec fiducial_spec(Region region = Region::I);

/// Positivity and omega0 > mass; throws InvalidSpec.
void validate_basic(const ModeSpec& spec);
/// Human-readable reason the spec breaks a guard or basic check, if any.
std::optional<std::string> guard_violation(const ModeSpec& spec);
/// validate_basic plus the omega0 * width and horizon-clearance guards.
void validate(const ModeSpec& spec);

double envelope(const ModeSpec& spec, double x);

/// Unnormalized input profile on x > 0 (region I orientation).
double input_profile(const ModeSpec& spec, double x);

/// Unnormalized output profile on chi > 0 (region I orientation).
double output_profile(const ModeSpec& spec, double chi);

/// output_profile with the reference Bessel factor hoisted out.
class OutputProfile {
 public:
  explicit OutputProfile(const ModeSpec& spec);
  double operator()(double chi) const;

 private:
  ModeSpec spec_;
  BesselOrder order_;
  double z_ref_;
  Complex s_ref_;
};

struct Support {
  double lo;
  double hi;
};

/// Where the envelope exceeds kEnvelopeThreshold, floored at kGridFloor.
Support envelope_support(const ModeSpec& spec);

/// Uniform grid over envelope_support; spacing <= min(0.01, period / 20),
/// divided further by `refinement`.
std::vector<double> build_grid(const ModeSpec& spec, int refinement = 1);

struct ModeNormalization {
  double input = 0.0;   // C
  double output = 0.0;  // C'
  quad::Diagnostics diag;
};

/// Constants that give both profiles unit Klein-Gordon norm, by adaptive
/// Gauss-Legendre quadrature over the envelope support.
ModeNormalization normalize_modes(const ModeSpec& spec, const quad::Options& opt = {});

/// Real t = 0 Cauchy data of a mode on a uniform grid of distances |x| from the
/// apex. The time derivative is d/dt f = -i * rate; the input mode has
/// rate = omega0 f and the output mode rate = omega0 (x0 / x) f.
class SampledMode {
 public:
  SampledMode(ModeSpec spec, ModeKind kind, std::vector<double> grid, std::vector<double> values,
              std::vector<double> rates, double norm_constant);

  const ModeSpec& spec() const { return spec_; }
  ModeKind kind() const { return kind_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& rates() const { return rates_; }
  double norm_constant() const { return norm_constant_; }
  double spacing() const { return spacing_; }

  /// Signed Minkowski coordinates: region II lives on x < 0.
  std::vector<double> coordinates() const;

  SampledMode scaled(double factor) const;

 private:
  ModeSpec spec_;
  ModeKind kind_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> rates_;
  double norm_constant_;
  double spacing_;
};

struct SampleOptions {
  int refinement = 1;
  bool enforce_guards = true;  // false only for diagnostics outside the regime
};

SampledMode sample_input(const ModeSpec& spec, const SampleOptions& opt = {});
SampledMode sample_output(const ModeSpec& spec, const SampleOptions& opt = {});

/// Klein-Gordon norm 2 * integral(f * rate) on the grid (trapezoid).
/// Throws NumericError if it is not positive.
double kg_norm(const SampledMode& mode);

/// Fraction of the Klein-Gordon norm carried by negative Minkowski frequencies
/// in a plane-wave (DFT) decomposition of the Cauchy data. Input modes only.
double positive_frequency_residual(const SampledMode& mode);

/// Zeroes the negative-frequency plane-wave amplitudes, resynthesizes the t = 0
/// data and rescales to unit Klein-Gordon norm. Input modes only.
SampledMode project_positive_frequency(const SampledMode& mode);

}  // namespace accelcoh
