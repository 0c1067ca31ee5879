#include "accelcoh/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "accelcoh/errors.hpp"

namespace accelcoh {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kMaxSeriesTerms = 500;
constexpr double kSeriesRelTol = 1e-16;

Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    x += kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Principal log of sin(pi z), computed without overflowing for large |Im z|.
Complex log_sin_pi(Complex z) {
  const bool flip = z.imag() < 0.0;
  if (flip) z = std::conj(z);
  const Complex i_unit(0.0, 1.0);
  Complex out;
  if (z.imag() < 20.0) {
    out = std::log(std::sin(kPi * z));
  } else {
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}); |e^{2 i pi z}| < e^{-125}.
    out = -i_unit * kPi * z + Complex(-std::log(2.0), kPi / 2.0) +
          std::log(1.0 - std::exp(2.0 * i_unit * kPi * z));
    out.imag(std::remainder(out.imag(), 2.0 * kPi));
  }
  return flip ? std::conj(out) : out;
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw DomainError("BesselOrder: nu must be finite and >= 0");
  }
}

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("log_gamma: non-finite argument");
  }
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "log_gamma: pole at z = " << z.real();
    throw DomainError(msg.str());
  }
  if (z.real() >= 0.5) return log_gamma_right(z);

  // Reflection; the 2 pi i shift keeps the branch continuous away from the
  // negative real axis (Hare's correction).
  const double shift = std::copysign(2.0 * kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
  return Complex(std::log(kPi), shift) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

ScaledBessel scaled_bessel(BesselOrder order, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("scaled_bessel: z must be finite and > 0");
  }
  const double nu = order.value();
  const double q = 0.25 * z * z;
  Complex term(1.0, 0.0);
  Complex sum = term;
  int small_in_a_row = 0;
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    term *= q / (static_cast<double>(k) * Complex(static_cast<double>(k), nu));
    sum += term;
    if (std::abs(term) < kSeriesRelTol * std::abs(sum)) {
      if (++small_in_a_row == 2) return {sum, k + 1};
    } else {
      small_in_a_row = 0;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "scaled_bessel: series did not converge in " << kMaxSeriesTerms
      << " terms (nu = " << nu << ", z = " << z << ", |last term| = " << std::abs(term)
      << ", |sum| = " << std::abs(sum) << ")";
  throw NumericError(msg.str());
}

double bessel_product_im(BesselOrder order, double z_ref, const Complex& s_ref, double z) {
  if (!(z_ref > 0.0) || !(z > 0.0)) {
    throw DomainError("bessel_product_im: arguments must be > 0");
  }
  // conj(S) S is real; return the exact zero rather than a rounding residue.
  if (z == z_ref) return 0.0;
  const double nu = order.value();
  const Complex s = scaled_bessel(order, z).value;
  const double phase = nu * std::log(z / z_ref);
  return (std::polar(1.0, phase) * std::conj(s_ref) * s).imag();
}

double bessel_product_im(BesselOrder order, double z_ref, double z) {
  if (!(z_ref > 0.0)) throw DomainError("bessel_product_im: arguments must be > 0");
  return bessel_product_im(order, z_ref, scaled_bessel(order, z_ref).value, z);
}

}  // namespace accelcoh
