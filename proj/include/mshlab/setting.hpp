#ifndef MSHLAB_SETTING_HPP
#define MSHLAB_SETTING_HPP

#include <cmath>
#include <string>

#include "mshlab/errors.hpp"

namespace mshlab {

// Normalizations used throughout, with beta = ddc|z|^2 and ddc = (i/2pi) d dbar:
//   beta^n                = (n!/pi^n) dV
//   ddc f ^ beta^{n-1}    = ((n-1)!/(4 pi^n)) (Laplacian f) dV
//   mass(ddc|z|^2, B(0,r)) = r^{2n}   (the calibration identity the tests lock)

// Ambient dimension n and Hessian order m, 1 <= m < n.
struct Setting {
  int n = 2;
  int m = 1;

  Setting() = default;
  Setting(int n_, int m_) : n(n_), m(m_) {
    if (n < 2 || m < 1 || m >= n)
      throw InvalidSetting("setting requires 1 <= m < n, got n=" + std::to_string(n_) +
                           " m=" + std::to_string(m_));
  }

  double ratio() const { return static_cast<double>(n) / m; }  // n/m > 1

  // Exponent s0 = n/m - 1 of the fundamental radial profile -t^{-s0}/s0.
  double weightPower() const { return ratio() - 1.0; }

  // Radial comparison weight w(r) = -(1/s0) r^{-2 s0}; the growth normalizer
  // against which sphere/ball means and sups are measured. w < 0, w(0+) = -inf.
  double weight(double r) const {
    const double s0 = weightPower();
    return -std::pow(r, -2.0 * s0) / s0;
  }
  double weightDerivative(double r) const { return 2.0 * std::pow(r, 1.0 - 2.0 * ratio()); }
  // Inverse of weight: the radius at which the weight equals v (v < 0).
  double weightInverse(double v) const {
    const double s0 = weightPower();
    return std::pow(s0 * (-v), -0.5 / s0);
  }

  // Normalizing exponent (2n/m)(m + p - n) of the Lelong quotient for a
  // current of bidimension (p,p).
  double lelongNormExponent(int p) const {
    return 2.0 * ratio() * (m + p - n);
  }

  bool operator==(const Setting& o) const { return n == o.n && m == o.m; }
};

constexpr double kPi = 3.14159265358979323846;

// Euclidean volume of the real 2n-ball of radius r: pi^n r^{2n} / n!.
inline double ballVolume(int n, double r) {
  double v = 1.0;
  for (int j = 1; j <= n; ++j) v *= kPi * r * r / j;
  return v;
}

// Surface measure of the sphere |z| = r in C^n: 2 pi^n r^{2n-1} / (n-1)!.
inline double sphereSurface(int n, double r) {
  double s = 2.0 * kPi * r;
  for (int j = 1; j <= n - 1; ++j) s *= kPi * r * r / j;
  return s;
}

}  // namespace mshlab

#endif
