#include <doctest.h>

#include <cmath>

#include "accelcoh/errors.hpp"
#include "accelcoh/modes.hpp"

using namespace accelcoh;

TEST_CASE("fiducial spec and derived quantities") {
  const ModeSpec s = fiducial_spec();
  CHECK(s.center() == doctest::Approx(10.0));
  CHECK(s.bessel_order() == doctest::Approx(50.0));
  CHECK(s.wavenumber() == doctest::Approx(std::sqrt(24.99)));
  CHECK_FALSE(guard_violation(s).has_value());
  CHECK(to_string(Region::II) == std::string("II"));
  CHECK(region_from_string("I") == Region::I);
  CHECK_THROWS_AS(region_from_string("III"), ConfigError);
}

TEST_CASE("guard violations are reported") {
  ModeSpec s = fiducial_spec();
  s.omega0 = 2.0;  // omega0 * width = 4 < 5
  REQUIRE(guard_violation(s).has_value());
  CHECK(guard_violation(s)->find("omega0 * width") != std::string::npos);
  CHECK_THROWS_AS(validate(s), InvalidSpec);

  s = fiducial_spec();
  s.accel = 0.3;  // 1/accel = 3.33 < 2.5 * 2
  CHECK(guard_violation(s).has_value());
  s.accel = 0.2;  // exactly on the clearance boundary
  CHECK_FALSE(guard_violation(s).has_value());

  s = fiducial_spec();
  s.mass = 6.0;
  CHECK_THROWS_AS(validate_basic(s), InvalidSpec);
  s = fiducial_spec();
  s.accel = -0.1;
  CHECK_THROWS_AS(validate_basic(s), InvalidSpec);
}

TEST_CASE("profiles reject non-positive coordinates") {
  CHECK_THROWS_AS(input_profile(fiducial_spec(), 0.0), DomainError);
  CHECK_THROWS_AS(output_profile(fiducial_spec(), -1.0), DomainError);
}

TEST_CASE("profiles peak near the packet centre and agree there") {
  const ModeSpec s = fiducial_spec();
  CHECK(envelope(s, s.center()) == 1.0);
  CHECK(input_profile(s, s.center()) == 0.0);
  CHECK(output_profile(s, s.center()) == 0.0);
  CHECK(envelope(s, 3.0 * s.center()) < 1e-12);
}

TEST_CASE("massless output profile uses the logarithmic phase") {
  ModeSpec s = fiducial_spec();
  s.mass = 0.0;
  const double chi = 10.3;
  CHECK(output_profile(s, chi) ==
        doctest::Approx(envelope(s, chi) * std::sin(50.0 * std::log(chi / 10.0))));
}

TEST_CASE("grid covers the envelope support at the required resolution") {
  const ModeSpec s = fiducial_spec();
  const auto g = build_grid(s);
  const Support sup = envelope_support(s);
  CHECK(g.front() == sup.lo);
  CHECK(g.back() == sup.hi);
  CHECK(g[1] - g[0] <= std::min(kMaxGridSpacing, s.period() / kMinPointsPerPeriod) + 1e-15);
  const auto g2 = build_grid(s, 2);
  CHECK(g2.size() == 2 * (g.size() - 1) + 1);
  CHECK_THROWS_AS(build_grid(s, 0), ConfigError);
}

TEST_CASE("sampled modes have unit Klein-Gordon norm, stable under refinement") {
  for (Region region : {Region::I, Region::II}) {
    const ModeSpec s = fiducial_spec(region);
    for (auto sample : {&sample_input, &sample_output}) {
      const double n1 = kg_norm(sample(s, {1, true}));
      const double n2 = kg_norm(sample(s, {2, true}));
      CHECK(std::abs(n1 - 1.0) <= 1e-6);
      CHECK(std::abs(n2 - n1) <= 1e-6);
    }
  }
}

TEST_CASE("region II modes are mirrored with a sign flip") {
  const auto a = sample_input(fiducial_spec(Region::I));
  const auto b = sample_input(fiducial_spec(Region::II));
  REQUIRE(a.values().size() == b.values().size());
  const auto xa = a.coordinates();
  const auto xb = b.coordinates();
  for (std::size_t i = 0; i < xa.size(); i += 97) {
    CHECK(xb[i] == -xa[i]);
    CHECK(b.values()[i] == -a.values()[i]);
  }
}

TEST_CASE("sampling enforces guards unless told otherwise") {
  ModeSpec s = fiducial_spec();
  s.accel = 0.3;
  CHECK_THROWS_AS(sample_input(s), InvalidSpec);
  CHECK_NOTHROW(sample_input(s, {1, false}));
}

TEST_CASE("negative-frequency content of the raw input mode") {
  const auto mode = sample_input(fiducial_spec());
  const double res = positive_frequency_residual(mode);
  // Numpy reference with a 2^20-point padded FFT of the same profile.
  CHECK(res == doctest::Approx(5.3e-3).epsilon(0.05));
  CHECK(res > 1e-3);
}

TEST_CASE("projection removes negative frequencies and is idempotent") {
  const auto mode = sample_input(fiducial_spec());
  const auto p1 = project_positive_frequency(mode);
  CHECK(positive_frequency_residual(p1) < 1e-20);
  CHECK(kg_norm(p1) == doctest::Approx(1.0).epsilon(1e-12));
  const auto p2 = project_positive_frequency(p1);
  double worst = 0.0;
  for (std::size_t i = 0; i < p1.values().size(); ++i) {
    worst = std::max(worst, std::abs(p2.values()[i] - p1.values()[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("frequency operations are defined for input modes only") {
  const auto out = sample_output(fiducial_spec());
  CHECK_THROWS_AS(positive_frequency_residual(out), UnsupportedOperation);
  CHECK_THROWS_AS(project_positive_frequency(out), UnsupportedOperation);
}
