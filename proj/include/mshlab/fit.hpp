#ifndef MSHLAB_FIT_HPP
#define MSHLAB_FIT_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "mshlab/errors.hpp"

namespace mshlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rSquared = 1.0;
};

inline LinearFit linearFit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw InvalidInput("linear fit needs at least two matching points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("degenerate abscissae in linear fit");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.rSquared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

// Slope of log(y) against log(x); caller guarantees positive data.
inline LinearFit logLogFit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0) throw InvalidInput("log-log fit needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  return linearFit(lx, ly);
}

// Geometric grid of `count` points from lo to hi inclusive.
inline std::vector<double> geomGrid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidInput("bad geometric grid bounds");
  std::vector<double> g(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Least-squares fit of v = v0 + C r^gamma over gamma in [gammaLo, gammaHi]:
// for each trial gamma the (v0, C) pair is linear, so the exponent is found
// by a coarse scan followed by golden-section refinement of the residual.
struct PowerLawFit {
  double offset = 0.0;     // v0
  double coefficient = 0;  // C
  double exponent = 1.0;   // gamma
  double rmse = 0.0;
};

namespace detail {

inline double powerLawResidual(const std::vector<double>& rs, const std::vector<double>& vs,
                               double gamma, double* v0, double* c) {
  const size_t n = rs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::pow(rs[i], gamma);
    sx += x;
    sy += vs[i];
    sxx += x * x;
    sxy += x * vs[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::fabs(det) < 1e-300) return std::numeric_limits<double>::infinity();
  const double cc = (n * sxy - sx * sy) / det;
  const double off = (sy - cc * sx) / n;
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = vs[i] - off - cc * std::pow(rs[i], gamma);
    sse += e * e;
  }
  if (v0) *v0 = off;
  if (c) *c = cc;
  return sse;
}

}  // namespace detail

inline PowerLawFit powerLawFit(const std::vector<double>& rs, const std::vector<double>& vs,
                               double gammaLo = 0.05, double gammaHi = 4.0) {
  if (rs.size() < 4 || rs.size() != vs.size())
    throw InvalidInput("power law fit needs at least four matching points");
  const int scan = 160;
  double bestGamma = gammaLo, bestSse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double g = gammaLo + (gammaHi - gammaLo) * i / scan;
    const double sse = detail::powerLawResidual(rs, vs, g, nullptr, nullptr);
    if (sse < bestSse) {
      bestSse = sse;
      bestGamma = g;
    }
  }
  const double step = (gammaHi - gammaLo) / scan;
  double lo = std::max(gammaLo, bestGamma - step), hi = std::min(gammaHi, bestGamma + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = detail::powerLawResidual(rs, vs, x1, nullptr, nullptr);
  double f2 = detail::powerLawResidual(rs, vs, x2, nullptr, nullptr);
  for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = detail::powerLawResidual(rs, vs, x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = detail::powerLawResidual(rs, vs, x2, nullptr, nullptr);
    }
  }
  PowerLawFit out;
  out.exponent = 0.5 * (lo + hi);
  const double sse =
      detail::powerLawResidual(rs, vs, out.exponent, &out.offset, &out.coefficient);
  out.rmse = std::sqrt(sse / rs.size());
  return out;
}

}  // namespace mshlab

#endif
