#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "accelcoh/gaussian.hpp"

namespace testing_support {

// Random two-mode symplectic matrix built from local rotations and squeezers,
// a beam splitter and a two-mode squeezer (ordering x1, p1, x2, p2).
inline accelcoh::Matrix4 random_symplectic(std::mt19937_64& rng, double max_squeeze = 1.0) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
  auto local = [&] {
    accelcoh::Matrix4 m = accelcoh::Matrix4::Zero();
    for (int mode = 0; mode < 2; ++mode) {
      const double t = angle(rng);
      const double s = sq(rng);
      Eigen::Matrix2d rot;
      rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
      Eigen::Matrix2d squeeze = Eigen::Vector2d(std::exp(-s), std::exp(s)).asDiagonal();
      m.block<2, 2>(2 * mode, 2 * mode) = squeeze * rot;
    }
    return m;
  };
  const double th = angle(rng);
  accelcoh::Matrix4 bs = accelcoh::Matrix4::Zero();
  bs.block<2, 2>(0, 0) = std::cos(th) * Eigen::Matrix2d::Identity();
  bs.block<2, 2>(2, 2) = std::cos(th) * Eigen::Matrix2d::Identity();
  bs.block<2, 2>(0, 2) = std::sin(th) * Eigen::Matrix2d::Identity();
  bs.block<2, 2>(2, 0) = -std::sin(th) * Eigen::Matrix2d::Identity();
  const double r = sq(rng);
  accelcoh::Matrix4 tms = accelcoh::Matrix4::Zero();
  const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  tms.block<2, 2>(0, 0) = std::cosh(r) * Eigen::Matrix2d::Identity();
  tms.block<2, 2>(2, 2) = std::cosh(r) * Eigen::Matrix2d::Identity();
  tms.block<2, 2>(0, 2) = std::sinh(r) * z;
  tms.block<2, 2>(2, 0) = std::sinh(r) * z;
  return local() * bs * tms * local();
}

// Random physical covariance matrix S diag(nu1, nu1, nu2, nu2) S^T with nu >= 1.
inline accelcoh::Matrix4 random_physical(std::mt19937_64& rng, double* nu1 = nullptr,
                                         double* nu2 = nullptr) {
  std::uniform_real_distribution<double> thermal(1.0, 4.0);
  const double a = thermal(rng);
  const double b = thermal(rng);
  if (nu1) *nu1 = a;
  if (nu2) *nu2 = b;
  const accelcoh::Matrix4 s = random_symplectic(rng);
  const accelcoh::Vector4 d(a, a, b, b);
  accelcoh::Matrix4 sigma = s * d.asDiagonal() * s.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace testing_support
