#pragma once

#include <complex>

namespace accelcoh {

using Complex = std::complex<double>;

/// Order nu >= 0 of I_{i nu}. In the mode construction nu = omega0 / accel.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

/// Principal branch of log Gamma(z) (Lanczos, g = 7, reflection for Re z < 0.5).
/// Throws DomainError at the poles z = 0, -1, -2, ...
Complex log_gamma(Complex z);

struct ScaledBessel {
  Complex value;
  int terms = 0;  // series terms summed, including k = 0
};

/// S(z; nu) = Gamma(1 + i nu) (z/2)^{-i nu} I_{i nu}(z)
///          = sum_k (z/2)^{2k} / (k! (1 + i nu)(2 + i nu)...(k + i nu)).
/// The normalisation strips the exponentially large 1/|Gamma(1 + i nu)| and the
/// unimodular phase, so S stays O(1)..O(I_0(z)) for any nu.
/// Throws NumericError if 500 terms do not converge.
ScaledBessel scaled_bessel(BesselOrder order, double z);

/// Im[ e^{i nu ln(z / z_ref)} conj(S(z_ref; nu)) S(z; nu) ].
///
/// Equals Im[I_{-i nu}(z_ref) I_{i nu}(z)] divided by sinh(pi nu) / (pi nu),
/// a positive factor that the output-mode normalisation absorbs.
double bessel_product_im(BesselOrder order, double z_ref, double z);

/// Same product with S(z_ref; nu) supplied by the caller, for repeated
/// evaluation against a fixed reference point.
double bessel_product_im(BesselOrder order, double z_ref, const Complex& s_ref, double z);

}  // namespace accelcoh
