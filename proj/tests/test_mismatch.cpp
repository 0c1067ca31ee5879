#include <doctest.h>

#include <cmath>

#include "accelcoh/errors.hpp"
#include "accelcoh/mismatch.hpp"

using namespace accelcoh;

namespace {

// tests/oracles/overlap_oracle.py
struct MismatchCase {
  double accel, width, omega0, mass, mismatch;
  std::size_t points;
};
constexpr MismatchCase kOracle[] = {
    {0.1, 2.0, 5.0, 0.1, 0.00028934595428189964, 1599},
    {0.001, 2.0, 5.0, 0.1, 4.661448736393702e-10, 100599},
    {0.02, 2.0, 5.0, 0.1, 3.3487058647604762e-06, 5599},
    {0.2, 2.0, 5.0, 0.1, 0.0015843170847182498, 1099},
    {0.1, 3.0, 4.0, 0.1, 0.0009228110015290407, 1899},
    {0.05, 1.5, 6.0, 0.3, 1.8208046509195755e-05, 2449},
    {0.1, 2.0, 4.7, 0.1, 0.0002734828284147408, 1599},
};

}  // namespace

TEST_CASE("mode mismatch agrees with the oracle") {
  for (const auto& c : kOracle) {
    CAPTURE(c.accel);
    CAPTURE(c.width);
    const auto m = mode_mismatch(ModeSpec{Region::I, c.accel, c.width, c.omega0, c.mass});
    CHECK(m.grid_points == c.points);
    // The oracle's normalization is a trapezoid estimate good to ~1e-10.
    CHECK(m.value == doctest::Approx(c.mismatch).epsilon(1e-7));
  }
}

TEST_CASE("grid size follows floor((1/A + 3L - 0.02)/0.01) + 1") {
  CHECK(mismatch_grid_size(fiducial_spec()) == 1599);
  ModeSpec s = fiducial_spec();
  s.accel = 0.125;  // span 13.98 is not a binary multiple of the step
  CHECK(mismatch_grid_size(s) == 1399);
  s.width = 1.5;
  CHECK(mismatch_grid_size(s) == 1249);
}

TEST_CASE("mismatch is non-negative, region-symmetric and continuous") {
  const ModeSpec fid = fiducial_spec();
  const double m = mode_mismatch(fid).value;
  CHECK(m >= 0.0);
  CHECK(mode_mismatch(fiducial_spec(Region::II)).value == m);
  const std::pair<SweepParam, double> nominal[] = {{SweepParam::accel, fid.accel},
                                                    {SweepParam::width, fid.width},
                                                    {SweepParam::omega0, fid.omega0},
                                                    {SweepParam::mass, fid.mass}};
  for (double rel : {1e-4, -1e-4}) {
    for (const auto& [param, value] : nominal) {
      ModeSpec s = fid;
      set_param(s, param, value * (1.0 + rel));
      CHECK(std::abs(mode_mismatch(s).value - m) <= 1e-3);
    }
  }
}

TEST_CASE("pair mismatch is the mean of the two observers") {
  ModeSpec a = fiducial_spec(Region::I);
  ModeSpec b = fiducial_spec(Region::II);
  b.accel = 0.15;
  const double ma = mode_mismatch(a).value;
  const double mb = mode_mismatch(b).value;
  const double p = pair_mismatch(a, b);
  CHECK(p == doctest::Approx(0.5 * (ma + mb)));
  CHECK(p > std::min(ma, mb));
  CHECK(p < std::max(ma, mb));
}

TEST_CASE("acceleration sweep is monotone increasing") {
  ModeSpec fixed = fiducial_spec();
  fixed.omega0 = 4.7;
  const auto rows = mismatch_sweep(fixed, {SweepParam::accel, linspace(0.02, 0.2, 20)});
  REQUIRE(rows.size() == 20);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].mismatch.has_value());
    CHECK(*rows[i].mismatch > *rows[i - 1].mismatch);
    CHECK(rows[i].index == i);
  }
}

TEST_CASE("two-axis sweep ordering and skipped points") {
  const auto rows = mismatch_sweep(fiducial_spec(), {SweepParam::width, {1.0, 2.0}},
                                   SweepAxis{SweepParam::omega0, {4.0, 5.0, 6.0}});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].param1 == 1.0);
  CHECK(*rows[0].param2 == 4.0);
  CHECK(*rows[1].param2 == 5.0);
  CHECK(rows[3].param1 == 2.0);
  CHECK_FALSE(rows[0].mismatch.has_value());  // omega0 * width = 4 < 5
  CHECK(rows[0].skipped.find("omega0 * width") != std::string::npos);
  CHECK(rows[1].mismatch.has_value());
}

TEST_CASE("parallel sweeps are identical to serial") {
  const SweepAxis axis{SweepParam::accel, linspace(0.02, 0.2, 12)};
  const auto a = mismatch_sweep(fiducial_spec(), axis, std::nullopt, 1);
  const auto b = mismatch_sweep(fiducial_spec(), axis, std::nullopt, 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i].mismatch == *b[i].mismatch);
}

TEST_CASE("degenerate single-point range yields one row") {
  const auto rows = mismatch_sweep(fiducial_spec(), {SweepParam::accel, linspace(0.1, 0.1, 1)});
  CHECK(rows.size() == 1);
}

TEST_CASE("linspace and parameter names") {
  const auto v = linspace(0.02, 0.2, 10);
  CHECK(v.front() == 0.02);
  CHECK(v[2] == 0.06);
  CHECK(v.back() == 0.2);
  CHECK(linspace(1.0, 2.0, 0).empty());
  CHECK(sweep_param_from_string("omega0") == SweepParam::omega0);
  CHECK(std::string(to_string(SweepParam::mass)) == "mass");
  CHECK_THROWS_AS(sweep_param_from_string("speed"), ConfigError);
}

TEST_CASE("invalid spec is rejected") {
  ModeSpec s = fiducial_spec();
  s.accel = 1.0;
  CHECK_THROWS_AS(mode_mismatch(s), InvalidSpec);
}
