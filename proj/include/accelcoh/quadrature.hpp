#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <span>

#include "accelcoh/errors.hpp"

namespace accelcoh::quad {

struct Rule {
  std::array<double, 16> nodes;    // on [-1, 1]
  std::array<double, 16> weights;
};

/// 16-point Gauss-Legendre rule, computed once by Newton iteration.
const Rule& gauss_legendre16();

struct Options {
  double rel_tol = 1e-8;
  int max_bisections = 12;
};

struct Diagnostics {
  std::size_t panels = 0;       // panels in the accepted estimate
  std::size_t evaluations = 0;  // integrand calls, all rounds
  int bisections = 0;
  double max_change = 0.0;      // last relative change, worst component
};

template <std::size_t N>
struct Result {
  std::array<double, N> value{};
  std::array<double, N> abs_value{};  // integral of |f|, the round-off scale
  Diagnostics diag;
};

namespace detail {

template <std::size_t N, class F>
void composite_pass(F& f, double a, double b, std::size_t panels, std::array<double, N>& sum,
                    std::array<double, N>& abs_sum) {
  const Rule& rule = gauss_legendre16();
  const double width = (b - a) / static_cast<double>(panels);
  sum.fill(0.0);
  abs_sum.fill(0.0);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    std::array<double, N> panel{};
    std::array<double, N> abs_panel{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const std::array<double, N> v = f(mid + half * rule.nodes[j]);
      for (std::size_t c = 0; c < N; ++c) {
        panel[c] += rule.weights[j] * v[c];
        abs_panel[c] += rule.weights[j] * std::abs(v[c]);
      }
    }
    for (std::size_t c = 0; c < N; ++c) {
      sum[c] += half * panel[c];
      abs_sum[c] += half * abs_panel[c];
    }
  }
}

}  // namespace detail

/// Integrates the N-component function f over [a, b] with composite 16-point
/// Gauss-Legendre panels no wider than max_panel_width. All panels are bisected
/// until every component changes by less than rel_tol relative to its value,
/// or to a round-off floor of 1e3 eps times the integral of |f| when the value
/// itself cancels to near zero.
template <std::size_t N, class F>
Result<N> integrate(F&& f, double a, double b, double max_panel_width, const Options& opt = {}) {
  Result<N> out;
  if (!(b > a)) return out;
  auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel_width));
  if (panels == 0) panels = 1;

  std::array<double, N> prev{};
  std::array<double, N> prev_abs{};
  detail::composite_pass<N>(f, a, b, panels, prev, prev_abs);
  out.diag.evaluations = panels * 16;

  constexpr double kFloor = 1e3 * std::numeric_limits<double>::epsilon();
  for (int round = 1; round <= opt.max_bisections; ++round) {
    panels *= 2;
    std::array<double, N> cur{};
    std::array<double, N> cur_abs{};
    detail::composite_pass<N>(f, a, b, panels, cur, cur_abs);
    out.diag.evaluations += panels * 16;

    bool converged = true;
    double worst = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      const double change = std::abs(cur[c] - prev[c]);
      const double scale = std::max(std::abs(cur[c]), kFloor / opt.rel_tol * cur_abs[c]);
      const double rel = scale > 0.0 ? change / scale : 0.0;
      worst = std::max(worst, rel);
      if (rel > opt.rel_tol) converged = false;
    }
    out.diag.max_change = worst;
    out.diag.bisections = round;
    prev = cur;
    prev_abs = cur_abs;
    if (converged) {
      out.value = cur;
      out.abs_value = cur_abs;
      out.diag.panels = panels;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "quadrature did not converge on [" << a << ", " << b << "]: panels = " << panels
      << ", evaluations = " << out.diag.evaluations
      << ", last relative change = " << out.diag.max_change;
  throw NumericError(msg.str());
}

/// Trapezoid rule on a uniform grid, used for gridded (sampled) data.
double trapezoid(std::span<const double> values, double spacing);

}  // namespace accelcoh::quad
