#ifndef MSHLAB_EXPONENT_HPP
#define MSHLAB_EXPONENT_HPP

// Integrability exponents of model functions.  Two independent estimators are
// provided: tailExponent fits the power-law decay of sublevel-set volumes,
// while integrabilityExponent scans partial integrals of |f|^c for the
// convergence threshold.  Sublevel volumes come in closed form where the
// geometry allows and from importance-sampled Monte Carlo otherwise.  A
// bounds report ties the exponent at a point to the density of the associated
// Hessian current there.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/estimate.hpp"
#include "mshlab/fit.hpp"
#include "mshlab/integrate.hpp"
#include "mshlab/lelong.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/rng.hpp"
#include "mshlab/setting.hpp"
#include "mshlab/special.hpp"

namespace mshlab {

// Finite union of pairwise disjoint closed balls.
struct CompactRegion {
  struct Ball {
    Point center;
    double radius = 0.0;
  };

  std::vector<Ball> balls;

  static CompactRegion ball(Point center, double radius) {
    CompactRegion k;
    k.balls.push_back({std::move(center), radius});
    return k;
  }

  void validate(int n) const {
    if (balls.empty()) throw InvalidInput("compact region needs at least one ball");
    for (const auto& b : balls) {
      if (!(b.radius > 0.0) || !std::isfinite(b.radius))
        throw InvalidInput("region balls need positive finite radius");
      if (static_cast<int>(b.center.size()) > n)
        throw InvalidInput("region ball center exceeds the ambient dimension");
    }
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        const double d = std::sqrt(distanceSquared(balls[i].center, balls[j].center, n));
        if (d <= balls[i].radius + balls[j].radius)
          throw InvalidInput("region balls must be pairwise disjoint");
      }
  }

  double volume(int n) const {
    double v = 0.0;
    for (const auto& b : balls) v += ballVolume(n, b.radius);
    return v;
  }

  bool contains(const Point& z, int n) const {
    for (const auto& b : balls)
      if (distanceSquared(z, b.center, n) <= b.radius * b.radius) return true;
    return false;
  }

  double maxRadius() const {
    double r = 0.0;
    for (const auto& b : balls) r = std::max(r, b.radius);
    return r;
  }
};

// Volume of one sublevel set {f <= t} inside a compact region.
struct SublevelEstimate {
  double t = 0.0;
  double volume = 0.0;
  double stderrOfMean = 0.0;
  Method method = Method::ClosedForm;
  bool degenerate = false;  // t >= 0: the sublevel set covers the region
};

// Power-law fit of sublevel volumes against |t|.
struct TailFit {
  double alpha = 0.0;     // decay exponent of volume({f <= t}) ~ cAlpha |t|^-alpha
  double cAlpha = 0.0;    // fitted prefactor
  double rSquared = 0.0;  // fit quality; the fit is trusted only above 0.99
  std::pair<double, double> tRange{0.0, 0.0};
  bool unbounded = false;  // volumes decay faster than every power
  int pointsUsed = 0;
};

enum class ExponentMethod { TailSlope, IntegralScan };

inline const char* exponentMethodName(ExponentMethod m) {
  switch (m) {
    case ExponentMethod::TailSlope:
      return "tail-slope";
    case ExponentMethod::IntegralScan:
      return "integral-scan";
  }
  return "unknown";
}

// Critical integrability exponent; an empty iota means every power of |f| is
// integrable on the region ("unbounded").
struct ExponentEstimate {
  std::optional<double> iota;
  ExponentMethod method = ExponentMethod::IntegralScan;
  std::pair<double, double> interval{0.0, 0.0};

  bool unbounded() const { return !iota.has_value(); }
};

namespace detail {

// A connected singular set of a model function: an isolated point when
// k == n, the axis of a tube when k < n.  Distances to the set live in the
// first k coordinates.
struct SingularFeature {
  Point center;
  int k = 0;
};

inline double axisDistance(const SingularFeature& ft, const Point& z) {
  return std::sqrt(distanceSquared(z, ft.center, ft.k));
}

inline bool termBelongsTo(const FunctionTerm& t, const SingularFeature& ft) {
  return t.profile.singularAtZero() && t.k == ft.k &&
         distanceSquared(t.center, ft.center, ft.k) == 0.0;
}

inline std::vector<SingularFeature> collectFeatures(const ModelFunction& f) {
  std::vector<SingularFeature> feats;
  for (const auto& t : f.terms()) {
    if (!t.profile.singularAtZero()) continue;
    bool known = false;
    for (const auto& e : feats)
      if (termBelongsTo(t, e)) {
        known = true;
        break;
      }
    if (!known) feats.push_back({t.center, t.k});
  }
  return feats;
}

inline bool featureTouchesBall(const SingularFeature& ft, const CompactRegion::Ball& b) {
  return axisDistance(ft, b.center) <= b.radius;
}

inline bool featureTouchesRegion(const SingularFeature& ft, const CompactRegion& K) {
  for (const auto& b : K.balls)
    if (featureTouchesBall(ft, b)) return true;
  return false;
}

inline Point fullPoint(const Point& p, int n) {
  Point z = p;
  z.resize(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  return z;
}

// Largest value of f on the region (closed balls).
inline double regionSup(const ModelFunction& f, const CompactRegion& K) {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& b : K.balls)
    s = std::max(s, ballSup(f, fullPoint(b.center, f.dim()), b.radius).value);
  return s;
}

// Minimum of a single term over a ball, using that its profile is monotone in
// the distance to the term's singular set.
inline double termMinOnBall(const FunctionTerm& t, const Point& ballCenter, double radius) {
  const double d = std::sqrt(distanceSquared(ballCenter, t.center, t.k));
  const double lo = std::max(0.0, d - radius);
  const double hi = d + radius;
  return t.coeff * std::min(t.profile.g(lo * lo), t.profile.g(hi * hi));
}

// Lower bound for the sum of all terms NOT anchored at `ft`, valid on the part
// of the ball that is nearer to `ft` than to any other singular set.  Returns
// -infinity when no useful bound exists (the caller then samples the whole
// ball, which is always correct).
inline double othersLowerBound(const ModelFunction& f, const SingularFeature& ft,
                               const CompactRegion::Ball& b) {
  double total = 0.0;
  for (const auto& t : f.terms()) {
    if (termBelongsTo(t, ft)) continue;
    if (t.profile.singularAtZero()) {
      if (ft.k < f.dim()) return -std::numeric_limits<double>::infinity();
      const double d = std::sqrt(distanceSquared(ft.center, t.center, t.k));
      if (!(d > 0.0)) return -std::numeric_limits<double>::infinity();
      const double lo = 0.5 * d;  // nearer-half points keep this much distance
      total += t.coeff * t.profile.g(lo * lo);
    } else {
      total += termMinOnBall(t, b.center, b.radius);
    }
  }
  return total;
}

// Radius around a feature guaranteed to contain the local piece of the
// sublevel set {sum of the feature's own terms <= tau}; 0 means empty,
// +infinity means no bound.
inline double featureEnclosureRadius(const ModelFunction& f, const SingularFeature& ft,
                                     double tau) {
  if (!std::isfinite(tau) || tau >= 0.0) return std::numeric_limits<double>::infinity();
  std::vector<const FunctionTerm*> own;
  for (const auto& t : f.terms())
    if (termBelongsTo(t, ft)) own.push_back(&t);
  if (own.empty()) return 0.0;
  // If the sum of the own terms is below tau, at least one of them is below
  // tau / count; union the corresponding radii.
  double r = 0.0;
  for (const FunctionTerm* t : own) {
    const double threshold = tau / (static_cast<double>(own.size()) * t->coeff);
    double tSq = 0.0;
    if (t->profile.kind == Profile::Kind::Affine) {
      if (t->profile.c1 <= 0.0) return std::numeric_limits<double>::infinity();
      tSq = std::max(0.0, (threshold - t->profile.c0) / t->profile.c1);
    } else {
      if (threshold >= 0.0) return std::numeric_limits<double>::infinity();
      tSq = t->profile.inverse(threshold);
    }
    r = std::max(r, std::sqrt(std::max(0.0, tSq)));
  }
  return r;
}

// One sampling region for the sublevel Monte Carlo: a ball around a feature
// (k == n), a tube slice (k < n, paired with a region ball providing the
// remaining coordinates), or a whole region ball.
struct SublevelEnclosure {
  Point center;    // first k coordinates matter
  int k = 0;       // complex dimension of the sampled cross-section
  double rho = 0;  // cross-section radius
  Point rest;      // region-ball center for the remaining coordinates
  double restRadius = 0.0;
};

inline bool enclosureContains(const SublevelEnclosure& e, const Point& z) {
  return distanceSquared(z, e.center, e.k) <= e.rho * e.rho;
}

inline SublevelEstimate sublevelMonteCarlo(const ModelFunction& f, const CompactRegion& K,
                                           double t, const MCConfig& cfg) {
  const int n = f.dim();
  const auto feats = collectFeatures(f);

  std::vector<SublevelEnclosure> encl;
  auto pushWholeBall = [&](const CompactRegion::Ball& b) {
    encl.push_back({fullPoint(b.center, n), n, b.radius, {}, 0.0});
  };
  for (const auto& ft : feats) {
    // One enclosure serves every region ball the feature can reach, so the
    // threshold must be the weakest (largest) bound across the balls.
    double tau = -std::numeric_limits<double>::infinity();
    for (const auto& b : K.balls) tau = std::max(tau, t - othersLowerBound(f, ft, b));
    const double rho = featureEnclosureRadius(f, ft, tau);
    if (rho == 0.0) continue;
    bool touches = false;
    for (const auto& b : K.balls)
      if (featureTouchesBall(ft, b) ||
          (std::isfinite(rho) && axisDistance(ft, b.center) <= rho + b.radius)) {
        touches = true;
        break;
      }
    if (!touches) continue;
    if (!std::isfinite(rho)) {
      for (const auto& b : K.balls)
        if (featureTouchesBall(ft, b)) pushWholeBall(b);
      continue;
    }
    if (ft.k == n) {
      // Clip to the region's reach so deep-but-mild bounds stay efficient.
      double reach = 0.0;
      for (const auto& b : K.balls)
        reach = std::max(reach, axisDistance(ft, b.center) + b.radius);
      encl.push_back({fullPoint(ft.center, n), n, std::min(rho, reach), {}, 0.0});
    } else {
      for (const auto& b : K.balls)
        if (axisDistance(ft, b.center) <= rho + b.radius)
          encl.push_back({fullPoint(ft.center, n), ft.k, rho, fullPoint(b.center, n), b.radius});
    }
  }
  if (encl.empty())
    for (const auto& b : K.balls) pushWholeBall(b);

  const std::uint64_t budget =
      std::max<std::uint64_t>(1000, cfg.samplesPerShell * static_cast<std::uint64_t>(cfg.shells) / 4);
  const int chunks = 8;
  const std::uint64_t perChunk = (budget + chunks - 1) / chunks;

  double volumeTotal = 0.0;
  double varTotal = 0.0;
  for (std::size_t e = 0; e < encl.size(); ++e) {
    const auto& enc = encl[e];
    const double cellVolume =
        ballVolume(enc.k, enc.rho) *
        (enc.k == n ? 1.0 : ballVolume(n - enc.k, enc.restRadius));
    auto chunkFn = [&](int chunk) {
      CounterRng rng(cfg.seed, 0x5B000000ULL + 256 * static_cast<std::uint64_t>(e) +
                                   static_cast<std::uint64_t>(chunk));
      ChunkStats stats;
      Point z(static_cast<std::size_t>(n));
      std::vector<double> g(2 * static_cast<std::size_t>(enc.k));
      std::vector<double> h(2 * static_cast<std::size_t>(n - enc.k));
      for (std::uint64_t i = 0; i < perChunk; ++i) {
        const std::uint64_t base = (static_cast<std::uint64_t>(chunk) * perChunk + i) * (2 * n + 4);
        // Direction and radius for the cross-section ball.
        double normSq = 0.0;
        for (int j = 0; j < enc.k; ++j) {
          double g0, g1;
          rng.gaussianPair(base + static_cast<std::uint64_t>(j), g0, g1);
          g[2 * j] = g0;
          g[2 * j + 1] = g1;
          normSq += g0 * g0 + g1 * g1;
        }
        const double norm = std::sqrt(std::max(normSq, 1e-300));
        const double u = rng.uniform(2 * (base + static_cast<std::uint64_t>(enc.k)) + 1);
        const double rad = enc.rho * std::pow(std::max(u, 1e-300), 1.0 / (2.0 * enc.k));
        for (int j = 0; j < enc.k; ++j)
          z[j] = enc.center[j] + Complex(g[2 * j], g[2 * j + 1]) * (rad / norm);
        if (enc.k < n) {
          double normSq2 = 0.0;
          for (int j = 0; j < n - enc.k; ++j) {
            double g0, g1;
            rng.gaussianPair(base + static_cast<std::uint64_t>(enc.k + 1 + j), g0, g1);
            h[2 * j] = g0;
            h[2 * j + 1] = g1;
            normSq2 += g0 * g0 + g1 * g1;
          }
          const double norm2 = std::sqrt(std::max(normSq2, 1e-300));
          const double u2 = rng.uniform(2 * (base + static_cast<std::uint64_t>(2 * n + 1)) + 1);
          const double rad2 =
              enc.restRadius * std::pow(std::max(u2, 1e-300), 1.0 / (2.0 * (n - enc.k)));
          for (int j = 0; j < n - enc.k; ++j)
            z[enc.k + j] = enc.rest[enc.k + j] + Complex(h[2 * j], h[2 * j + 1]) * (rad2 / norm2);
        }
        double hit = 0.0;
        if (K.contains(z, n) && f.evaluate(z) <= t) {
          // Count each point for the first enclosure containing it only, so
          // overlapping enclosures never double count.
          bool first = true;
          for (std::size_t e2 = 0; e2 < e; ++e2)
            if (enclosureContains(encl[e2], z)) {
              first = false;
              break;
            }
          if (first) hit = 1.0;
        }
        stats.sum += hit;
        stats.sumSq += hit * hit;
        stats.count += 1;
      }
      return stats;
    };
    const auto merged = mergeChunks(runChunks(chunks, chunkFn, cfg.workerCount()));
    volumeTotal += cellVolume * merged.mean;
    varTotal += cellVolume * cellVolume * merged.stderrOfMean * merged.stderrOfMean;
  }

  SublevelEstimate out;
  out.t = t;
  out.volume = volumeTotal;
  out.stderrOfMean = std::sqrt(varTotal);
  out.method = Method::MonteCarlo;
  return out;
}

}  // namespace detail

// Volume of {f <= t} intersected with the region.  Requires f < 0 on the
// closed region; t >= 0 yields the full region volume with a degenerate flag.
inline SublevelEstimate sublevelVolume(const ModelFunction& f, const CompactRegion& K, double t,
                                       const MCConfig& cfg = {}) {
  const int n = f.dim();
  K.validate(n);
  if (detail::regionSup(f, K) >= 0.0)
    throw InvalidInput("sublevel analysis needs a function negative on the region");
  if (t >= 0.0) {
    SublevelEstimate out;
    out.t = t;
    out.volume = K.volume(n);
    out.method = Method::ClosedForm;
    out.degenerate = true;
    return out;
  }

  if (!cfg.forceMonteCarlo && f.terms().size() == 1 && K.balls.size() == 1) {
    const FunctionTerm& term = f.terms().front();
    const auto& b = K.balls.front();
    const double tau = t / term.coeff;
    bool closed = true;
    double rhoSq = 0.0;
    if (term.profile.kind == Profile::Kind::Affine) {
      if (term.profile.c1 > 0.0)
        rhoSq = std::max(0.0, (tau - term.profile.c0) / term.profile.c1);
      else if (term.profile.c1 == 0.0)
        rhoSq = term.profile.c0 <= tau ? std::numeric_limits<double>::infinity() : 0.0;
      else
        closed = false;  // decreasing profile: sublevel is an outer region
    } else {
      rhoSq = tau < 0.0 ? term.profile.inverse(tau) : std::numeric_limits<double>::infinity();
    }
    if (closed) {
      const double rho = std::sqrt(rhoSq);
      SublevelEstimate out;
      out.t = t;
      out.method = Method::ClosedForm;
      if (term.radial(n)) {
        const double d = std::sqrt(distanceSquared(term.center, b.center, n));
        if (rho == 0.0)
          out.volume = 0.0;
        else if (d + rho <= b.radius)
          out.volume = ballVolume(n, rho);
        else if (d + b.radius <= rho)
          out.volume = K.volume(n);
        else
          closed = false;  // partial overlap: no simple formula
      } else {
        const double dAxis = std::sqrt(distanceSquared(term.center, b.center, term.k));
        if (dAxis == 0.0) {
          // Tube through the ball center: slicing the ball along the tube
          // cross-section gives a Beta integral.
          const double x = std::min(1.0, rhoSq / (b.radius * b.radius));
          out.volume = K.volume(n) * regularizedIncompleteBeta(
                                         static_cast<double>(term.k),
                                         static_cast<double>(n - term.k + 1), x);
        } else {
          closed = false;
        }
      }
      if (closed) return out;
    }
  }

  return detail::sublevelMonteCarlo(f, K, t, cfg);
}

// Fits volume({f <= t}) ~ C |t|^-alpha over a deep range of t, chosen so the
// sublevel sets span radii about [1e-3, 1e-1] of the region scale.
inline TailFit tailExponent(const ModelFunction& f, const CompactRegion& K,
                            const MCConfig& cfg = {}) {
  const int n = f.dim();
  K.validate(n);
  TailFit fit;

  std::vector<detail::SingularFeature> feats;
  for (const auto& ft : detail::collectFeatures(f))
    if (detail::featureTouchesRegion(ft, K)) feats.push_back(ft);
  if (feats.empty()) {
    fit.unbounded = true;  // no pole inside the region: volumes vanish deep down
    return fit;
  }

  const double R = K.maxRadius();
  auto singularValueAt = [&](double rho) {
    // Deepest feature value at distance rho; the far tail of the volume is
    // governed by the most negative branch.
    double v = std::numeric_limits<double>::infinity();
    for (const auto& ft : feats) {
      double own = 0.0;
      for (const auto& t : f.terms())
        if (detail::termBelongsTo(t, ft)) own += t.coeff * t.profile.g(rho * rho);
      v = std::min(v, own);
    }
    return v;
  };

  auto runWindow = [&](double loFrac, double hiFrac, int count, std::vector<double>& absT,
                       std::vector<double>& vols) {
    absT.clear();
    vols.clear();
    for (double rho : geomGrid(loFrac * R, hiFrac * R, count)) {
      const double t = singularValueAt(rho);
      if (!(t < 0.0)) continue;
      const auto est = sublevelVolume(f, K, t, cfg);
      if (est.volume > 0.0 && std::isfinite(est.volume)) {
        absT.push_back(-t);
        vols.push_back(est.volume);
      }
    }
  };

  std::vector<double> absT, vols;
  runWindow(1e-3, 1e-1, 16, absT, vols);
  if (absT.size() < 4) {
    fit.unbounded = true;
    return fit;
  }
  LinearFit lf = logLogFit(absT, vols);
  if (lf.rSquared < 0.99) {
    std::vector<double> absT2, vols2;
    runWindow(1e-4, 0.2, 24, absT2, vols2);
    if (absT2.size() >= 4) {
      absT = std::move(absT2);
      vols = std::move(vols2);
      lf = logLogFit(absT, vols);
    }
  }

  fit.alpha = -lf.slope;
  fit.cAlpha = std::exp(lf.intercept);
  fit.rSquared = lf.rSquared;
  fit.pointsUsed = static_cast<int>(absT.size());
  const auto minmax = std::minmax_element(absT.begin(), absT.end());
  fit.tRange = {-*minmax.first, -*minmax.second};

  if (lf.rSquared < 0.99) {
    // Distinguish noisy power law from super-polynomial decay: the latter
    // steepens as |t| grows.
    std::vector<std::size_t> order(absT.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return absT[a] < absT[b]; });
    const std::size_t half = order.size() / 2;
    std::vector<double> xa, ya, xb, yb;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < half ? xa : xb).push_back(absT[order[i]]);
      (i < half ? ya : yb).push_back(vols[order[i]]);
    }
    if (xa.size() >= 2 && xb.size() >= 2) {
      const double sa = std::abs(logLogFit(xa, ya).slope);
      const double sb = std::abs(logLogFit(xb, yb).slope);
      if (sb > 1.3 * sa + 0.5) fit.unbounded = true;
    }
  }
  return fit;
}

namespace detail {

// Classifies convergence of the integral of |f - shift|^c near one singular
// feature.  Along a probe ray approaching the feature, the integrand's local
// log-log exponent e(rho) = d ln[(shift - f)^c rho^{2k-1}] / d ln rho is
// tracked on shrinking radii until it stabilizes; the core integral diverges
// exactly when the limiting exponent drops to -1 or below.  Everything is
// evaluated in log space, so arbitrarily deep probes never overflow, and the
// 0.02 margin errs on the convergent side (the critical power itself is not
// integrable, so the scan approaches the threshold from above).
inline bool featureIntegralConverges(const ModelFunction& f, const SingularFeature& ft,
                                     const CompactRegion& K, double shift, double c) {
  const int n = f.dim();
  const CompactRegion::Ball* home = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : K.balls) {
    const double d = axisDistance(ft, b.center) - b.radius;
    if (d < best) {
      best = d;
      home = &b;
    }
  }
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& other : collectFeatures(f)) {
    if (other.k == ft.k && distanceSquared(other.center, ft.center, ft.k) == 0.0) continue;
    sep = std::min(sep, axisDistance(other, fullPoint(ft.center, n)));
  }
  double epsMax = 0.45 * home->radius;
  if (std::isfinite(sep)) epsMax = std::min(epsMax, 0.45 * sep);
  epsMax = std::max(epsMax, 1e-6 * home->radius);

  // Probe ray: equal real components in the feature's first k coordinates,
  // remaining coordinates pinned to the home-ball slice.
  const double invSqrtK = 1.0 / std::sqrt(static_cast<double>(ft.k));
  Point base = fullPoint(home->center, n);
  for (int j = 0; j < ft.k; ++j)
    base[j] = j < static_cast<int>(ft.center.size()) ? ft.center[j] : Complex(0.0, 0.0);
  auto logIntegrand = [&](double rho) {
    Point z = base;
    for (int j = 0; j < ft.k; ++j) z[j] += Complex(rho * invSqrtK, 0.0);
    const double depth = shift - f.evaluate(z);
    return c * std::log(std::max(depth, 1e-300)) + (2.0 * ft.k - 1.0) * std::log(rho);
  };

  // Half-decade probe ladder, up to twenty decades deep.
  const double step = 0.5 * std::log(10.0);
  double prevLog = logIntegrand(epsMax);
  double prevExp = std::numeric_limits<double>::quiet_NaN();
  double exponent = 0.0;
  int stableRuns = 0;
  for (int j = 1; j <= 40; ++j) {
    const double rho = epsMax * std::exp(-step * j);
    const double curLog = logIntegrand(rho);
    exponent = (prevLog - curLog) / step;  // d ln integrand / d ln rho
    if (!std::isfinite(exponent)) return false;
    if (std::isfinite(prevExp) && std::abs(exponent - prevExp) < 0.005) {
      if (++stableRuns >= 2 && j >= 4) break;
    } else {
      stableRuns = 0;
    }
    prevExp = exponent;
    prevLog = curLog;
  }
  return exponent > -1.0 - 0.02;
}

inline bool integralConverges(const ModelFunction& f,
                              const std::vector<SingularFeature>& feats,
                              const CompactRegion& K, double shift, double c) {
  for (const auto& ft : feats)
    if (!featureIntegralConverges(f, ft, K, shift, c)) return false;
  return true;
}

}  // namespace detail

// Critical exponent of integrability of |f|^c over the region, found by
// doubling and bisecting the convergence threshold of core partial integrals.
inline ExponentEstimate integrabilityExponent(const ModelFunction& f, const CompactRegion& K,
                                              const MCConfig& cfg = {}) {
  (void)cfg;  // the scan is deterministic quadrature
  const int n = f.dim();
  K.validate(n);

  ExponentEstimate out;
  out.method = ExponentMethod::IntegralScan;

  std::vector<detail::SingularFeature> feats;
  for (const auto& ft : detail::collectFeatures(f))
    if (detail::featureTouchesRegion(ft, K)) feats.push_back(ft);
  constexpr double kCap = 64.0;
  if (feats.empty()) {
    out.interval = {kCap, std::numeric_limits<double>::infinity()};
    return out;
  }

  const double sup = detail::regionSup(f, K);
  const double shift = sup >= 0.0 ? sup + 1.0 : 0.0;

  double lo = 0.0;  // trivially convergent
  double hi = 1.0;
  while (hi <= kCap && detail::integralConverges(f, feats, K, shift, hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi > kCap) {
    out.interval = {kCap, std::numeric_limits<double>::infinity()};
    return out;
  }
  int guard = 0;
  while (hi - lo > 1e-3 && guard++ < 64) {
    const double mid = 0.5 * (lo + hi);
    if (detail::integralConverges(f, feats, K, shift, mid))
      lo = mid;
    else
      hi = mid;
  }
  out.iota = 0.5 * (lo + hi);
  out.interval = {lo, hi};
  return out;
}

// Infimum of the pointwise integrability exponent over the region, probed at
// the supplied sample points.  Every singular point inside the region must be
// among the sample points.
inline ExponentEstimate compactInfimum(const ModelFunction& f, const CompactRegion& K,
                                       const std::vector<Point>& samplePoints,
                                       const MCConfig& cfg = {}) {
  const int n = f.dim();
  K.validate(n);

  std::vector<detail::SingularFeature> feats;
  for (const auto& ft : detail::collectFeatures(f))
    if (detail::featureTouchesRegion(ft, K)) feats.push_back(ft);
  for (const auto& ft : feats) {
    bool matched = false;
    for (const auto& x : samplePoints)
      if (detail::axisDistance(ft, x) <= 1e-9) {
        matched = true;
        break;
      }
    if (!matched)
      throw InvalidInput("sample points must cover every singular point inside the region");
  }

  std::vector<ExponentEstimate> results;
  results.push_back(integrabilityExponent(f, K, cfg));  // whole-region consistency anchor
  for (const auto& x : samplePoints) {
    double r = 0.25 * K.maxRadius();
    for (const auto& ft : feats) {
      const double d = detail::axisDistance(ft, x);
      if (d > 1e-9) r = std::min(r, 0.45 * d);
    }
    r = std::max(r, 1e-3 * K.maxRadius());
    results.push_back(integrabilityExponent(f, CompactRegion::ball(x, r), cfg));
  }

  const ExponentEstimate* best = nullptr;
  for (const auto& est : results) {
    if (est.unbounded()) continue;
    if (!best || *est.iota < *best->iota) best = &est;
  }
  if (!best) {
    ExponentEstimate out;
    out.method = ExponentMethod::IntegralScan;
    out.interval = results.front().interval;
    return out;
  }
  return *best;
}

// Exponent bounds at a point: the dimensional lower bound always holds, and a
// positive density of the Hessian current caps the exponent from above.
struct ExponentBounds {
  double lowerBound = 0.0;  // n/(n-m)
  double upperBound = 0.0;  // n*m/(n-m), binding when the density is positive
  ExponentEstimate iota;
  std::optional<double> nu;  // density of the Hessian current of f at the point
  double nuErr = 0.0;
  bool lowerOk = false;
  bool upperApplicable = false;
  bool upperOk = true;
  std::optional<bool> hessianIdentityOk;  // m == 1: exponent pinned at n/(n-1)
};

inline ExponentBounds boundsReport(const ModelFunction& f, const Setting& st, const Point& a,
                                   const MCConfig& cfg = {}, double localRadius = 0.25) {
  if (f.dim() != st.n) throw InvalidInput("function dimension does not match the setting");

  ExponentBounds rep;
  rep.lowerBound = static_cast<double>(st.n) / (st.n - st.m);
  rep.upperBound = rep.lowerBound * st.m;

  rep.iota = integrabilityExponent(f, CompactRegion::ball(detail::fullPoint(a, st.n), localRadius), cfg);

  SimpleCurrent hessianCurrent{st.n, std::nullopt, {{f, 1}}, 0};
  const auto nuEst = lelongNumber(hessianCurrent, st, a, cfg, /*exploratory=*/true);
  if (nuEst.nu) {
    rep.nu = nuEst.nu;
    rep.nuErr = nuEst.err;
  }

  rep.lowerOk = rep.iota.unbounded() || *rep.iota.iota >= rep.lowerBound * (1.0 - 1e-6);
  rep.upperApplicable = rep.nu.has_value() && *rep.nu > 3.0 * rep.nuErr;
  rep.upperOk =
      !rep.upperApplicable || (!rep.iota.unbounded() && *rep.iota.iota <= rep.upperBound * 1.05);
  if (st.m == 1 && !rep.iota.unbounded())
    rep.hessianIdentityOk = std::abs(*rep.iota.iota - rep.lowerBound) <= 0.05 * rep.lowerBound;
  return rep;
}

}  // namespace mshlab

#endif  // MSHLAB_EXPONENT_HPP
