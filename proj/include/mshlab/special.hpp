#ifndef MSHLAB_SPECIAL_HPP
#define MSHLAB_SPECIAL_HPP

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

// Regularized incomplete beta I_x(a,b), continued fraction per the
// modified Lentz scheme; relative accuracy ~1e-14 away from the corners.
namespace detail {

inline double betaContinuedFraction(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

inline double regularizedIncompleteBeta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw InvalidInput("incomplete beta requires positive parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betaContinuedFraction(a, b, x) / a;
  return 1.0 - front * detail::betaContinuedFraction(b, a, 1.0 - x) / b;
}

// Digamma via recurrence up to x >= 12 followed by the asymptotic series
// through the x^{-10} Bernoulli term (absolute error below ~3e-14).
inline double digamma(double x) {
  if (x <= 0.0) throw InvalidInput("digamma requires a positive argument");
  double value = 0.0;
  while (x < 12.0) {
    value -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  value += std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 -
                   inv2 * (1.0 / 120.0 -
                           inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
  return value;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_k.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature legendreRule(int k) {
  if (k < 1) throw InvalidInput("quadrature order must be positive");
  Quadrature q;
  q.nodes.resize(k);
  q.weights.resize(k);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (k + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[k - 1 - i] = x;
    q.weights[i] = q.weights[k - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

namespace detail {
inline const Quadrature& cachedRule(int k) {
  static const Quadrature r16 = legendreRule(16);
  static const Quadrature r64 = legendreRule(64);
  if (k == 16) return r16;
  if (k == 64) return r64;
  thread_local std::map<int, Quadrature> extra;
  auto it = extra.find(k);
  if (it == extra.end()) it = extra.emplace(k, legendreRule(k)).first;
  return it->second;
}
}  // namespace detail

// Single-panel Gauss-Legendre integral of f over [a, b].
template <class F>
double integrateGL(F&& f, double a, double b, int order = 16) {
  const Quadrature& q = detail::cachedRule(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (size_t i = 0; i < q.nodes.size(); ++i) sum += q.weights[i] * f(mid + half * q.nodes[i]);
  return half * sum;
}

// Composite rule: [a, b] split into equal panels.
template <class F>
double integratePanels(F&& f, double a, double b, int panels, int order = 16) {
  if (panels < 1) throw InvalidInput("panel count must be positive");
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) sum += integrateGL(f, a + p * h, a + (p + 1) * h, order);
  return sum;
}

}  // namespace mshlab

#endif
