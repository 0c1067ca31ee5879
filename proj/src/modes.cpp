#include "accelcoh/modes.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <sstream>

#include "accelcoh/errors.hpp"

namespace accelcoh {

namespace {

double signum(Region r) { return r == Region::I ? 1.0 : -1.0; }

void require_positive_coordinate(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << what << ": coordinate must be finite and > 0, got " << x;
    throw DomainError(msg.str());
  }
}

struct Spectrum {
  std::vector<std::complex<double>> positive;  // A(k)
  std::vector<std::complex<double>> negative;  // B(k)
  std::vector<double> omega;
};

// Plane-wave split of Cauchy data (f, d/dt f = -i rate):
//   f~ = A + B,   rate~ = omega (A - B).
// The omega = 0 bin of a massless field has no frequency sign and is dropped.
Spectrum decompose(const SampledMode& mode) {
  const std::size_t n = mode.values().size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fv;
  std::vector<std::complex<double>> fr;
  fft.fwd(fv, mode.values());
  fft.fwd(fr, mode.rates());

  Spectrum s;
  s.positive.resize(n);
  s.negative.resize(n);
  s.omega.resize(n);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * mode.spacing());
  const double m = mode.spec().mass;
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_index =
        j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    const double k = signed_index * dk;
    const double w = std::sqrt(k * k + m * m);
    s.omega[j] = w;
    if (w == 0.0) continue;
    s.positive[j] = 0.5 * (fv[j] + fr[j] / w);
    s.negative[j] = 0.5 * (fv[j] - fr[j] / w);
  }
  return s;
}

void require_input(const SampledMode& mode, const char* what) {
  if (mode.kind() != ModeKind::input) {
    throw UnsupportedOperation(std::string(what) +
                               ": only defined for input (Minkowski) modes");
  }
}

}  // namespace

const char* to_string(Region r) { return r == Region::I ? "I" : "II"; }

Region region_from_string(const std::string& s) {
  if (s == "I" || s == "1") return Region::I;
  if (s == "II" || s == "2") return Region::II;
  throw ConfigError("unknown region '" + s + "' (expected I or II)");
}

double ModeSpec::period() const { return 2.0 * std::numbers::pi / wavenumber(); }

ModeSpec fiducial_spec(Region region) { return ModeSpec{region, 0.1, 2.0, 5.0, 0.1}; }

void validate_basic(const ModeSpec& spec) {
  auto bad = [](const std::string& why) { throw InvalidSpec("invalid mode spec: " + why); };
  if (!(spec.accel > 0.0) || !std::isfinite(spec.accel)) bad("accel must be > 0");
  if (!(spec.width > 0.0) || !std::isfinite(spec.width)) bad("width must be > 0");
  if (!(spec.omega0 > 0.0) || !std::isfinite(spec.omega0)) bad("omega0 must be > 0");
  if (!(spec.mass >= 0.0) || !std::isfinite(spec.mass)) bad("mass must be >= 0");
  if (!(spec.omega0 > spec.mass)) bad("omega0 must exceed mass");
}

std::optional<std::string> guard_violation(const ModeSpec& spec) {
  try {
    validate_basic(spec);
  } catch (const InvalidSpec& e) {
    return std::string(e.what());
  }
  std::ostringstream msg;
  msg.precision(17);
  if (spec.omega0 * spec.width < kMinOmegaWidth) {
    msg << "omega0 * width = " << spec.omega0 * spec.width << " < " << kMinOmegaWidth;
    return msg.str();
  }
  if (spec.center() < kHorizonClearance * spec.width * (1.0 - 1e-12)) {
    msg << "1 / accel = " << spec.center() << " < " << kHorizonClearance << " * width";
    return msg.str();
  }
  return std::nullopt;
}

void validate(const ModeSpec& spec) {
  if (auto why = guard_violation(spec)) throw InvalidSpec("invalid mode spec: " + *why);
}

double envelope(const ModeSpec& spec, double x) {
  const double x0 = spec.center();
  const double u = x0 / spec.width * std::log(x / x0);
  return std::exp(-2.0 * u * u);
}

double input_profile(const ModeSpec& spec, double x) {
  require_positive_coordinate(x, "input_profile");
  return envelope(spec, x) * std::sin(spec.wavenumber() * (x - spec.center()));
}

OutputProfile::OutputProfile(const ModeSpec& spec)
    : spec_(spec),
      order_(spec.bessel_order()),
      z_ref_(spec.mass * spec.center()),
      s_ref_(z_ref_ > 0.0 ? scaled_bessel(order_, z_ref_).value : Complex(1.0, 0.0)) {}

double OutputProfile::operator()(double chi) const {
  require_positive_coordinate(chi, "output_profile");
  const double env = envelope(spec_, chi);
  if (env == 0.0) return 0.0;
  if (z_ref_ == 0.0) {
    // m -> 0: S -> 1 and the modulation reduces to sin(nu ln(chi / x0)).
    return env * std::sin(order_.value() * std::log(chi / spec_.center()));
  }
  return env * bessel_product_im(order_, z_ref_, s_ref_, spec_.mass * chi);
}

double output_profile(const ModeSpec& spec, double chi) { return OutputProfile(spec)(chi); }

Support envelope_support(const ModeSpec& spec) {
  const double x0 = spec.center();
  const double half = spec.width / x0 * std::sqrt(std::log(1.0 / kEnvelopeThreshold) / 2.0);
  return {std::max(kGridFloor, x0 * std::exp(-half)), x0 * std::exp(half)};
}

std::vector<double> build_grid(const ModeSpec& spec, int refinement) {
  validate_basic(spec);
  if (refinement < 1) throw ConfigError("build_grid: refinement must be >= 1");
  const Support s = envelope_support(spec);
  const double target =
      std::min(kMaxGridSpacing, spec.period() / kMinPointsPerPeriod) / refinement;
  const auto intervals = static_cast<std::size_t>(std::ceil((s.hi - s.lo) / target));
  const double h = (s.hi - s.lo) / static_cast<double>(intervals);
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) grid[i] = s.lo + static_cast<double>(i) * h;
  grid.back() = s.hi;
  return grid;
}

ModeNormalization normalize_modes(const ModeSpec& spec, const quad::Options& opt) {
  validate_basic(spec);
  const OutputProfile psi(spec);
  const Support s = envelope_support(spec);
  const double x0 = spec.center();
  auto integrand = [&](double x) -> std::array<double, 2> {
    const double f = input_profile(spec, x);
    const double g = psi(x);
    return {f * f, g * g / x};
  };
  const auto res = quad::integrate<2>(integrand, s.lo, s.hi, spec.period() / 10.0, opt);
  const double in_norm = 2.0 * spec.omega0 * res.value[0];
  const double out_norm = 2.0 * spec.omega0 * x0 * res.value[1];
  if (!(in_norm > 0.0) || !(out_norm > 0.0)) {
    throw NumericError("normalize_modes: non-positive Klein-Gordon norm");
  }
  return {1.0 / std::sqrt(in_norm), 1.0 / std::sqrt(out_norm), res.diag};
}

SampledMode::SampledMode(ModeSpec spec, ModeKind kind, std::vector<double> grid,
                         std::vector<double> values, std::vector<double> rates,
                         double norm_constant)
    : spec_(spec),
      kind_(kind),
      grid_(std::move(grid)),
      values_(std::move(values)),
      rates_(std::move(rates)),
      norm_constant_(norm_constant) {
  if (grid_.size() < 2 || values_.size() != grid_.size() || rates_.size() != grid_.size()) {
    throw ConfigError("SampledMode: grid, values and rates must have equal length >= 2");
  }
  if (!(grid_.front() > 0.0)) throw ConfigError("SampledMode: grid must be positive");
  spacing_ = (grid_.back() - grid_.front()) / static_cast<double>(grid_.size() - 1);
}

std::vector<double> SampledMode::coordinates() const {
  std::vector<double> out(grid_);
  if (spec_.region == Region::II) {
    for (double& x : out) x = -x;
  }
  return out;
}

SampledMode SampledMode::scaled(double factor) const {
  std::vector<double> v(values_);
  std::vector<double> r(rates_);
  for (double& x : v) x *= factor;
  for (double& x : r) x *= factor;
  return SampledMode(spec_, kind_, grid_, std::move(v), std::move(r), norm_constant_ * factor);
}

SampledMode sample_input(const ModeSpec& spec, const SampleOptions& opt) {
  if (opt.enforce_guards) {
    validate(spec);
  } else {
    validate_basic(spec);
  }
  const double c = normalize_modes(spec).input;
  std::vector<double> grid = build_grid(spec, opt.refinement);
  const double sign = signum(spec.region);
  std::vector<double> values(grid.size());
  std::vector<double> rates(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = sign * c * input_profile(spec, grid[i]);
    rates[i] = spec.omega0 * values[i];
  }
  return SampledMode(spec, ModeKind::input, std::move(grid), std::move(values),
                     std::move(rates), c);
}

SampledMode sample_output(const ModeSpec& spec, const SampleOptions& opt) {
  if (opt.enforce_guards) {
    validate(spec);
  } else {
    validate_basic(spec);
  }
  const double c = normalize_modes(spec).output;
  const OutputProfile psi(spec);
  std::vector<double> grid = build_grid(spec, opt.refinement);
  const double sign = signum(spec.region);
  const double x0 = spec.center();
  std::vector<double> values(grid.size());
  std::vector<double> rates(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = sign * c * psi(grid[i]);
    // Proper time of the packet-centre trajectory: d/dt = (x0 / x) d/dtau.
    rates[i] = spec.omega0 * x0 / grid[i] * values[i];
  }
  return SampledMode(spec, ModeKind::output, std::move(grid), std::move(values),
                     std::move(rates), c);
}

double kg_norm(const SampledMode& mode) {
  std::vector<double> density(mode.values().size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    density[i] = mode.values()[i] * mode.rates()[i];
  }
  const double norm = 2.0 * quad::trapezoid(density, mode.spacing());
  if (!(norm > 0.0)) {
    std::ostringstream msg;
    msg << "kg_norm: non-positive Klein-Gordon norm " << norm;
    throw NumericError(msg.str());
  }
  return norm;
}

double positive_frequency_residual(const SampledMode& mode) {
  require_input(mode, "positive_frequency_residual");
  const Spectrum s = decompose(mode);
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t j = 0; j < s.omega.size(); ++j) {
    pos += s.omega[j] * std::norm(s.positive[j]);
    neg += s.omega[j] * std::norm(s.negative[j]);
  }
  if (!(pos + neg > 0.0)) throw NumericError("positive_frequency_residual: empty spectrum");
  return neg / (pos + neg);
}

SampledMode project_positive_frequency(const SampledMode& mode) {
  require_input(mode, "project_positive_frequency");
  const Spectrum s = decompose(mode);
  std::vector<std::complex<double>> rate_spec(s.positive.size());
  for (std::size_t j = 0; j < rate_spec.size(); ++j) rate_spec[j] = s.omega[j] * s.positive[j];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> v;
  std::vector<std::complex<double>> r;
  fft.inv(v, s.positive);
  fft.inv(r, rate_spec);
  std::vector<double> values(v.size());
  std::vector<double> rates(r.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    values[i] = v[i].real();
    rates[i] = r[i].real();
  }
  SampledMode projected(mode.spec(), ModeKind::input, mode.grid(), std::move(values),
                        std::move(rates), mode.norm_constant());
  return projected.scaled(1.0 / std::sqrt(kg_norm(projected)));
}

}  // namespace accelcoh
