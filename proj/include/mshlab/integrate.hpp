#ifndef MSHLAB_INTEGRATE_HPP
#define MSHLAB_INTEGRATE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "mshlab/current.hpp"
#include "mshlab/estimate.hpp"
#include "mshlab/fit.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/rng.hpp"
#include "mshlab/setting.hpp"
#include "mshlab/special.hpp"

namespace mshlab {

// Optional radial multiplier W(|z-a|) applied to a mass integral; w0 is the
// value picked up by an atom sitting at the integration center.
struct RadialWeight {
  std::function<double(double)> w;
  double w0 = 1.0;
  // radii where w is continuous but not smooth; the radial quadrature aligns
  // its shell boundaries with these so Gauss-Legendre keeps full accuracy
  std::vector<double> breakpoints;
};

namespace detail {

// Pointwise density of T wedge beta^p against Lebesgue measure:
//   (n!/pi^n) * coeff(z) * D(H_1 x k_1, ..., I x (n-q)).
inline double currentDensity(const SimpleCurrent& T, const Point& z) {
  const int n = T.n;
  double c = 1.0;
  if (T.coefficient) {
    c = T.coefficient->evaluate(z);
    if (!std::isfinite(c)) throw SingularPoint("coefficient pole hit");
  }
  std::vector<std::pair<HermitianMatrix, int>> hs;
  hs.reserve(T.factors.size());
  for (const auto& [f, k] : T.factors) hs.emplace_back(f.hessian(z), k);
  const double d = mixedDiscriminantPowers(hs, n - T.q());
  double fact = 1.0;
  for (int j = 2; j <= n; ++j) fact *= j;
  return fact / std::pow(kPi, n) * c * d;
}

// Leading small-t behavior of the radial reduction about a common center.
// The factor product t^n prod g_i'(t)^{k_i} tends to `atom` when its leading
// exponent alpha is zero, diverges when alpha < 0, and vanishes otherwise.
struct RadialLeading {
  double alpha = 0.0;        // leading exponent of t^n prod (g')^k
  double atom = 0.0;         // limit value when alpha == 0
  bool divergent = false;    // alpha < 0
  double coeffExp = 0.0;     // leading exponent of the coefficient value
  bool coeffLog = false;     // leading coefficient behavior is log t
  double coeffAtZero = 1.0;  // finite coefficient value at the center
  bool coeffSingular = false;
};

inline RadialLeading radialLeading(const SimpleCurrent& T) {
  RadialLeading out;
  double alpha = T.n;
  double atom = 1.0;
  for (const auto& [f, k] : T.factors) {
    double e = std::numeric_limits<double>::infinity();
    double lead = 0.0;
    for (const auto& t : f.terms()) {
      const double te = t.profile.leadPow();
      const double tc = t.coeff * t.profile.leadCoeff();
      if (tc == 0.0) continue;
      if (te < e - 1e-12) {
        e = te;
        lead = tc;
      } else if (te < e + 1e-12) {
        lead += tc;
      }
    }
    if (!std::isfinite(e)) {
      e = 0.0;  // constant-profile factor: zero Hessian
      lead = 0.0;
    }
    alpha += k * e;
    atom *= std::pow(std::fabs(lead), k) * (lead < 0.0 && k % 2 ? -1.0 : 1.0);
  }
  out.alpha = alpha;
  if (alpha < -1e-12) out.divergent = true;
  out.atom = std::fabs(alpha) <= 1e-12 ? atom : 0.0;

  if (T.coefficient) {
    double e = std::numeric_limits<double>::infinity();
    bool logLead = false;
    double atZero = 0.0;
    bool sing = false;
    for (const auto& t : T.coefficient->terms()) {
      switch (t.profile.kind) {
        case Profile::Kind::Power:
          e = std::min(e, -t.profile.s);
          if (t.coeff != 0.0) sing = true;
          break;
        case Profile::Kind::Log:
          logLead = true;
          if (t.coeff != 0.0) sing = true;
          break;
        case Profile::Kind::Affine:
          atZero += t.coeff * t.profile.c0;
          e = std::min(e, 0.0);
          break;
      }
    }
    if (!std::isfinite(e)) e = 0.0;
    out.coeffExp = e;
    out.coeffLog = sing ? false : logLead;  // pure log handled as near-zero exponent
    if (e < -1e-15) {
      out.coeffSingular = true;
    } else if (logLead) {
      out.coeffSingular = true;
      out.coeffLog = true;
      out.coeffExp = 0.0;
    }
    out.coeffAtZero = atZero;
  }
  return out;
}

}  // namespace detail

// Mass of T wedge beta^p over the ball B(a, r), with an optional radial
// weight. Exact one-dimensional geometric-shell quadrature (shell ratio 1.2,
// innermost 1e-7 r, 16 Gauss nodes per shell, analytic inner tail from the
// leading exponent) when everything is rotation-invariant about a; stratified
// equal-volume shell Monte Carlo with antithetic pairs otherwise. Atoms of
// factor measures are added in closed form on both paths.
inline Estimate ballCurrentMass(const SimpleCurrent& T, const Setting& st, const Point& a,
                                double r, const MCConfig& cfg,
                                const RadialWeight* weight = nullptr) {
  T.validate();
  if (T.n != st.n) throw InvalidInput("current dimension does not match the setting");
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  cfg.validate();

  const int n = st.n;
  const bool radial = isRadialCurrentAbout(T, a) && !cfg.forceMonteCarlo;

  // Atom bookkeeping. Factor measures can carry point masses at the centers
  // of their radial singular parts; every such center inside the ball is
  // accounted in closed form (sampling cannot see a point mass). The atom at
  // a center c comes from the c-centered radial part of each factor alone:
  // mixed products with terms smooth at c have a strictly positive mass
  // exponent there and contribute no atom.
  double atomContribution = 0.0;
  std::optional<Point> factorCenter;  // set when all factor terms share one radial center
  if (!T.factors.empty()) {
    bool common = true;
    const Point& c0 = T.factors.front().first.terms().front().center;
    for (const auto& [f, k] : T.factors)
      for (const auto& t : f.terms())
        if (!(t.radial(n) && t.center == c0)) common = false;
    if (common) factorCenter = c0;
  }
  auto atomAt = [&](const Point& c, const detail::RadialLeading& leadC) {
    if (leadC.divergent) throw DivergentIntegral("factor measure mass diverges at its center");
    if (leadC.atom == 0.0) return;
    const double dc = std::sqrt(distanceSquared(c, a, n));
    if (dc >= r) return;
    const double wv = weight ? (dc == 0.0 ? weight->w0 : weight->w(dc)) : 1.0;
    if (wv == 0.0) return;  // the atom sits outside the weighted region
    double coeffVal = 1.0;
    if (T.coefficient) {
      coeffVal = T.coefficient->evaluate(c);
      if (!std::isfinite(coeffVal))
        throw DivergentIntegral("singular coefficient against an atomic factor measure");
    }
    atomContribution += leadC.atom * coeffVal * wv;
  };
  detail::RadialLeading lead;
  if (factorCenter) {
    lead = detail::radialLeading(T);
    atomAt(*factorCenter, lead);
  } else if (!T.factors.empty()) {
    // distinct radial term centers across all factors
    std::vector<Point> centers;
    for (const auto& [f, k] : T.factors)
      for (const auto& t : f.terms())
        if (t.radial(n) &&
            std::find(centers.begin(), centers.end(), t.center) == centers.end())
          centers.push_back(t.center);
    for (const Point& c : centers) {
      SimpleCurrent sub;
      sub.n = n;
      sub.betaPower = T.betaPower;
      bool everyFactor = true;
      for (const auto& [f, k] : T.factors) {
        std::vector<FunctionTerm> part;
        for (const auto& t : f.terms())
          if (t.radial(n) && t.center == c) part.push_back(t);
        if (part.empty()) {
          everyFactor = false;  // a slot smooth at c: no atom there
          break;
        }
        sub.factors.emplace_back(ModelFunction(n, std::move(part)), k);
      }
      if (everyFactor) atomAt(c, detail::radialLeading(sub));
    }
  } else if (T.coefficient) {
    // no factors: coefficient times beta^n; leading data still used below
    lead = detail::radialLeading(T);
    if (radial && lead.coeffSingular && lead.coeffExp <= -double(n))
      throw DivergentIntegral("coefficient is not locally integrable");
  }

  if (radial) {
    // The weighted radial integrand behaves like t^{alphaW - 1} (up to log
    // factors) near the center; it is integrable exactly when alphaW > 0.
    const double alphaW = lead.alpha + (T.coefficient ? lead.coeffExp : 0.0);
    if (std::fabs(lead.alpha) > 1e-12 && alphaW <= 1e-12)
      throw DivergentIntegral("weighted density is not integrable at the center");

    auto integrand = [&](double rho) {
      Point z = a;
      z[0] += rho;
      double d = detail::currentDensity(T, z);
      if (weight) d *= weight->w(rho);
      return d * sphereSurface(n, rho);
    };
    const double rho0 = 1e-7 * r;
    double total = 0.0;
    // analytic tail below rho0 using the exact leading exponent
    if (std::fabs(lead.alpha) > 1e-12) {
      const double f0 = integrand(rho0);
      if (f0 != 0.0) {
        if (lead.coeffLog) {
          const double lt = std::log(rho0 * rho0);
          total += f0 * rho0 / (2.0 * alphaW) * (lt - 1.0 / alphaW) / lt;
        } else {
          total += f0 * rho0 / (2.0 * alphaW);
        }
      }
    }
    std::vector<double> cuts;
    if (weight)
      for (double b : weight->breakpoints)
        if (b > rho0 && b < r) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double lo = rho0;
    while (lo < r) {
      double hi = std::min(r, lo * 1.2);
      for (double b : cuts)
        if (b > lo && b < hi) hi = b;  // land a shell edge on every kink
      total += integrateGL(integrand, lo, hi, 16);
      lo = hi;
    }
    return Estimate::quadrature(total + atomContribution);
  }

  // Stratified Monte Carlo over equal-volume shells.
  const int shells = cfg.shells;
  const int chunksPerShell = 4;
  const std::uint64_t perChunk = std::max<std::uint64_t>(1, cfg.samplesPerShell / (2 * chunksPerShell));
  const double ballVol = ballVolume(n, r);

  auto chunkFn = [&](int chunk) {
    const int shell = chunk / chunksPerShell;
    CounterRng rng(cfg.seed, 0x42000000ull + chunk);
    ChunkStats s;
    const double uLo = double(shell) / shells, uHi = double(shell + 1) / shells;
    std::uint64_t ctr = 0;
    Point z1(n), z2(n);
    for (std::uint64_t i = 0; i < perChunk; ++i) {
      double norm2 = 0.0;
      std::vector<Complex> dir(n);
      for (int j = 0; j < n; ++j) {
        double g0, g1;
        rng.gaussianPair(ctr++, g0, g1);
        dir[j] = Complex(g0, g1);
        norm2 += std::norm(dir[j]);
      }
      const double u = uLo + (uHi - uLo) * rng.uniform(1000000000ull + ctr++);
      const double rho = r * std::pow(u, 1.0 / (2.0 * n));
      const double scale = rho / std::sqrt(std::max(norm2, 1e-300));
      for (int j = 0; j < n; ++j) {
        z1[j] = a[j] + dir[j] * scale;
        z2[j] = a[j] - dir[j] * scale;
      }
      double v = 0.0;
      for (const Point* z : {&z1, &z2}) {
        double d;
        try {
          d = detail::currentDensity(T, *z);
        } catch (const SingularPoint&) {
          d = 0.0;  // measure-zero pole hit
        }
        if (weight) d *= weight->w(rho);
        v += 0.5 * d;
      }
      s.sum += v;
      s.sumSq += v * v;
      ++s.count;
    }
    return s;
  };

  const auto chunks = runChunks(shells * chunksPerShell, chunkFn, cfg.workerCount());
  double value = 0.0, var = 0.0;
  const double shellVol = ballVol / shells;
  for (int shell = 0; shell < shells; ++shell) {
    ChunkStats agg;
    for (int c = 0; c < chunksPerShell; ++c) {
      const auto& cs = chunks[shell * chunksPerShell + c];
      agg.sum += cs.sum;
      agg.sumSq += cs.sumSq;
      agg.count += cs.count;
    }
    const double mean = agg.sum / double(agg.count);
    const double v = std::max(0.0, agg.sumSq / double(agg.count) - mean * mean);
    value += mean * shellVol;
    var += v / double(agg.count) * shellVol * shellVol;
  }
  return Estimate::monteCarlo(value + atomContribution, std::sqrt(var));
}

// Mass over the open annulus {r1 < |z-a| < r2} of T wedged with the
// comparison kernel: extraKernelPower copies of the Hessian of the weight
// function centered at a, with n-m extra beta slots.
inline Estimate annulusCurrentMass(const SimpleCurrent& T, const Setting& st, const Point& a,
                                   double r1, double r2, int extraKernelPower,
                                   const MCConfig& cfg) {
  if (!(r1 > 0.0) || !(r2 > r1)) throw InvalidInput("annulus needs 0 < r1 < r2");
  SimpleCurrent aug = T;
  if (extraKernelPower < 0) throw InvalidInput("kernel power must be nonnegative");
  if (extraKernelPower > 0) aug.factors.emplace_back(fundamentalSolution(st, a), extraKernelPower);
  aug.betaPower += st.n - st.m;
  aug.validate();
  if (aug.p() != 0)
    throw InvalidInput("kernel bookkeeping must produce a full-degree measure");

  if (isRadialCurrentAbout(aug, a) && !cfg.forceMonteCarlo) {
    auto integrand = [&](double rho) {
      Point z = a;
      z[0] += rho;
      return detail::currentDensity(aug, z) * sphereSurface(st.n, rho);
    };
    double total = 0.0, lo = r1;
    while (lo < r2) {
      const double hi = std::min(r2, lo * 1.2);
      total += integrateGL(integrand, lo, hi, 16);
      lo = hi;
    }
    return Estimate::quadrature(total);
  }

  // Monte Carlo via the difference of two weighted ball masses restricted to
  // the annulus by an indicator weight.
  RadialWeight ind;
  ind.w = [r1](double rho) { return rho > r1 ? 1.0 : 0.0; };
  ind.w0 = 0.0;
  return ballCurrentMass(aug, st, a, r2, cfg, &ind);
}

// ---------------------------------------------------------------------------
// Sphere and ball means.
// ---------------------------------------------------------------------------

namespace detail {

// Mean of g(|z'-b'|^2) over the sphere S(a, r) when every profile term is
// fully radial: reduces to the polar angle against each shifted center,
// with weight sin^{2n-2}.
inline double shiftedRadialSphereMean(const FunctionTerm& term, int n, const Point& a, double r) {
  const double d = std::sqrt(distanceSquared(a, term.center, n));
  if (d == 0.0) return term.coeff * term.profile.g(r * r);
  auto f = [&](double theta) {
    const double t = r * r + d * d - 2.0 * r * d * std::cos(theta);
    return term.profile.g(std::max(t, 0.0)) * std::pow(std::sin(theta), 2.0 * n - 2.0);
  };
  auto w = [&](double theta) { return std::pow(std::sin(theta), 2.0 * n - 2.0); };
  const double num = integratePanels(f, 0.0, kPi, 8, 64);
  const double den = integratePanels(w, 0.0, kPi, 8, 64);
  return term.coeff * num / den;
}

// Beta-moment closed forms for an aligned cylindrical term on the sphere
// (u = |z'|^2 / r^2 ~ Beta(k, n-k)) and on the ball (Beta(k, n-k+1)).
inline double betaMomentMean(const Profile& p, int k, double betaB, double r2) {
  const double a = k;
  switch (p.kind) {
    case Profile::Kind::Power: {
      if (p.s >= a) throw DivergentIntegral("cylindrical profile mean diverges");
      const double m = std::exp(std::lgamma(a - p.s) + std::lgamma(a + betaB) -
                                std::lgamma(a) - std::lgamma(a + betaB - p.s));
      return -std::pow(r2, -p.s) * m;
    }
    case Profile::Kind::Log:
      return std::log(r2) + digamma(a) - digamma(a + betaB);
    case Profile::Kind::Affine:
      return p.c0 + p.c1 * r2 * a / (a + betaB);
  }
  return 0.0;
}

}  // namespace detail

// Average of f over the sphere S(a, r). Exact for radial-about-a functions;
// polar-angle quadrature for shifted radial terms; Beta moments for aligned
// cylindrical terms; uniform sphere Monte Carlo (Gaussian directions,
// antithetic) otherwise.
inline Estimate sphereMean(const ModelFunction& f, const Point& a, double r,
                           const MCConfig& cfg) {
  if (!(r > 0.0)) throw InvalidInput("sphere radius must be positive");
  cfg.validate();
  const int n = f.dim();

  if (!cfg.forceMonteCarlo) {
    if (f.isRadialAbout(a)) return Estimate::closedForm(f.radialValue(r * r));
    bool reducible = true;
    bool exact = true;
    for (const auto& t : f.terms()) {
      if (t.radial(n)) {
        if (std::sqrt(distanceSquared(a, t.center, n)) != 0.0) exact = false;
        continue;
      }
      // cylindrical: aligned when the first k coordinates of the centers
      // match; aligned terms reduce to exact Beta moments, so only shifted
      // radial terms (handled by theta-quadrature above) lose exactness
      bool aligned = true;
      for (int j = 0; j < t.k; ++j) aligned = aligned && t.center[j] == a[j];
      if (!aligned) reducible = false;
    }
    if (reducible) {
      double v = 0.0;
      for (const auto& t : f.terms()) {
        if (t.radial(n))
          v += detail::shiftedRadialSphereMean(t, n, a, r);
        else
          v += t.coeff * detail::betaMomentMean(t.profile, t.k, double(n - t.k), r * r);
      }
      return exact ? Estimate::closedForm(v) : Estimate::quadrature(v);
    }
  }

  const int chunks = 64;
  const std::uint64_t perChunk = std::max<std::uint64_t>(
      1, cfg.samplesPerShell * std::uint64_t(cfg.shells) / (2 * chunks));
  auto chunkFn = [&](int chunk) {
    CounterRng rng(cfg.seed, 0x53000000ull + chunk);
    ChunkStats s;
    std::uint64_t ctr = 0;
    Point z1(n), z2(n);
    for (std::uint64_t i = 0; i < perChunk; ++i) {
      double norm2 = 0.0;
      std::vector<Complex> dir(n);
      for (int j = 0; j < n; ++j) {
        double g0, g1;
        rng.gaussianPair(ctr++, g0, g1);
        dir[j] = Complex(g0, g1);
        norm2 += std::norm(dir[j]);
      }
      const double scale = r / std::sqrt(std::max(norm2, 1e-300));
      for (int j = 0; j < n; ++j) {
        z1[j] = a[j] + dir[j] * scale;
        z2[j] = a[j] - dir[j] * scale;
      }
      const double v = 0.5 * (f.evaluate(z1) + f.evaluate(z2));
      s.sum += v;
      s.sumSq += v * v;
      ++s.count;
    }
    return s;
  };
  const auto merged = mergeChunks(runChunks(chunks, chunkFn, cfg.workerCount()));
  return Estimate::monteCarlo(merged.mean, merged.stderrOfMean);
}

// Average of f over the ball B(a, r): closed forms for radial-about-a and
// aligned cylindrical terms, the classical identity
// 2n int_0^1 u^{2n-1} sphereMean(ru) du on the shifted-radial quadrature
// path, and direct uniform-ball Monte Carlo otherwise.
inline Estimate ballMean(const ModelFunction& f, const Point& a, double r, const MCConfig& cfg) {
  if (!(r > 0.0)) throw InvalidInput("ball radius must be positive");
  cfg.validate();
  const int n = f.dim();

  if (!cfg.forceMonteCarlo) {
    bool closed = true;
    bool reducible = true;
    for (const auto& t : f.terms()) {
      if (t.radial(n)) {
        if (std::sqrt(distanceSquared(a, t.center, n)) != 0.0) closed = false;
        continue;
      }
      closed = false;
      bool aligned = true;
      for (int j = 0; j < t.k; ++j) aligned = aligned && t.center[j] == a[j];
      if (!aligned) reducible = false;
    }
    if (closed) {
      double v = 0.0;
      for (const auto& t : f.terms()) {
        const double r2 = r * r;
        switch (t.profile.kind) {
          case Profile::Kind::Power:
            if (t.profile.s >= n)
              throw DivergentIntegral("profile is not integrable over the ball");
            v += t.coeff * (-std::pow(r2, -t.profile.s)) * double(n) / (n - t.profile.s);
            break;
          case Profile::Kind::Log:
            v += t.coeff * (std::log(r2) - 1.0 / n);
            break;
          case Profile::Kind::Affine:
            v += t.coeff * (t.profile.c0 + t.profile.c1 * r2 * double(n) / (n + 1));
            break;
        }
      }
      return Estimate::closedForm(v);
    }
    if (reducible) {
      // aligned cylindrical: exact Beta(k, n-k+1) moments; shifted radial:
      // integrate the sphere mean over radii with a split at any pole radius
      double v = 0.0;
      bool sawShifted = false;
      for (const auto& t : f.terms()) {
        if (!t.radial(n)) {
          if (t.profile.kind == Profile::Kind::Power && t.profile.s >= t.k)
            throw DivergentIntegral("cylindrical profile is not integrable over the ball");
          v += t.coeff * detail::betaMomentMean(t.profile, t.k, double(n - t.k + 1), r * r);
          continue;
        }
        sawShifted = true;
        auto lam = [&](double u) {
          return detail::shiftedRadialSphereMean(t, n, a, r * u) *
                 (2.0 * n) * std::pow(u, 2.0 * n - 1.0);
        };
        const double d = std::sqrt(distanceSquared(a, t.center, n));
        std::vector<double> splits{0.0, 1.0};
        if (d > 0.0 && d < r) splits.insert(splits.begin() + 1, d / r);
        for (size_t i = 0; i + 1 < splits.size(); ++i)
          v += integratePanels(lam, splits[i], splits[i + 1], 8, 64);
      }
      return sawShifted ? Estimate::quadrature(v) : Estimate::closedForm(v);
    }
  }

  const int chunks = 64;
  const std::uint64_t perChunk = std::max<std::uint64_t>(
      1, cfg.samplesPerShell * std::uint64_t(cfg.shells) / (2 * chunks));
  auto chunkFn = [&](int chunk) {
    CounterRng rng(cfg.seed, 0x62000000ull + chunk);
    ChunkStats s;
    std::uint64_t ctr = 0;
    Point z1(n), z2(n);
    for (std::uint64_t i = 0; i < perChunk; ++i) {
      double norm2 = 0.0;
      std::vector<Complex> dir(n);
      for (int j = 0; j < n; ++j) {
        double g0, g1;
        rng.gaussianPair(ctr++, g0, g1);
        dir[j] = Complex(g0, g1);
        norm2 += std::norm(dir[j]);
      }
      const double rho = r * std::pow(rng.uniform(1000000000ull + ctr++), 1.0 / (2.0 * n));
      const double scale = rho / std::sqrt(std::max(norm2, 1e-300));
      for (int j = 0; j < n; ++j) {
        z1[j] = a[j] + dir[j] * scale;
        z2[j] = a[j] - dir[j] * scale;
      }
      const double v = 0.5 * (f.evaluate(z1) + f.evaluate(z2));
      s.sum += v;
      s.sumSq += v * v;
      ++s.count;
    }
    return s;
  };
  const auto merged = mergeChunks(runChunks(chunks, chunkFn, cfg.workerCount()));
  return Estimate::monteCarlo(merged.mean, merged.stderrOfMean);
}

// Supremum of f over the closed ball B(a, r): exact one-dimensional
// optimization when all terms share one center (or there is a single term);
// multi-start projected gradient ascent (64 deterministic starts) otherwise,
// flagged as a lower bound.
inline Estimate ballSup(const ModelFunction& f, const Point& a, double r) {
  if (!(r > 0.0)) throw InvalidInput("ball radius must be positive");
  const int n = f.dim();

  // common-center 1-D case (works per-term when there is a single term)
  bool common = true;
  for (const auto& t : f.terms()) {
    const auto& t0 = f.terms().front();
    common = common && t.k == t0.k;
    for (int j = 0; j < t.k; ++j) common = common && t.center[j] == t0.center[j];
  }
  if (common) {
    const auto& t0 = f.terms().front();
    const double d = std::sqrt(distanceSquared(a, t0.center, t0.k));
    const double tLo = std::pow(std::max(0.0, d - r), 2);
    const double tHi = std::pow(d + r, 2);
    auto val = [&](double t) {
      double v = 0.0;
      for (const auto& term : f.terms()) v += term.coeff * term.profile.g(t);
      return v;
    };
    double best = std::max(val(tLo), val(tHi));
    // scan + golden refinement for interior maxima of mixed profiles
    const int scan = 256;
    double bestT = tLo;
    for (int i = 0; i <= scan; ++i) {
      const double t = tLo + (tHi - tLo) * i / scan;
      const double v = val(t);
      if (v > best) {
        best = v;
        bestT = t;
      }
    }
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(tLo, bestT - (tHi - tLo) / scan);
    double hi = std::min(tHi, bestT + (tHi - tLo) / scan);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-14 * (1.0 + tHi); ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = val(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = val(x2);
      }
    }
    best = std::max(best, val(0.5 * (lo + hi)));
    return Estimate::closedForm(best);
  }

  // multi-start projected gradient ascent
  auto project = [&](Point& z) {
    double d2 = distanceSquared(z, a, n);
    if (d2 > r * r) {
      const double sc = r / std::sqrt(d2);
      for (int j = 0; j < n; ++j) z[j] = a[j] + (z[j] - a[j]) * sc;
    }
  };
  auto tryImprove = [&](Point z, double& best) {
    project(z);
    double v = f.evaluate(z);
    double step = 0.25 * r;
    for (int it = 0; it < 200 && step > 1e-12 * r; ++it) {
      std::vector<double> g;
      try {
        g = f.realGradient(z);
      } catch (const SingularPoint&) {
        break;
      }
      double gn = 0.0;
      for (double gv : g) gn += gv * gv;
      gn = std::sqrt(gn);
      if (gn < 1e-300) break;
      Point zn = z;
      for (int j = 0; j < n; ++j)
        zn[j] += Complex(g[2 * j], g[2 * j + 1]) * (step / gn);
      project(zn);
      const double vn = f.evaluate(zn);
      if (vn > v) {
        z = zn;
        v = vn;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, v);
  };

  double best = -std::numeric_limits<double>::infinity();
  // per-term analytic candidates: push away from (or onto) each center
  for (const auto& t : f.terms()) {
    Point z = a;
    const double d = std::sqrt(distanceSquared(a, t.center, t.k));
    Complex dir(1.0, 0.0);
    if (d > 0.0) {
      for (int j = 0; j < t.k; ++j) z[j] += (a[j] - t.center[j]) * (r / d);
    } else {
      z[0] += r;
    }
    tryImprove(z, best);
  }
  CounterRng rng(7u, 99u);
  std::uint64_t ctr = 0;
  for (int start = 0; start < 64; ++start) {
    Point z(n);
    double norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
      double g0, g1;
      rng.gaussianPair(ctr++, g0, g1);
      z[j] = Complex(g0, g1);
      norm2 += std::norm(z[j]);
    }
    const double rho = r * std::pow(rng.uniform(1000000000ull + ctr++), 1.0 / (2.0 * n));
    const double sc = rho / std::sqrt(std::max(norm2, 1e-300));
    for (int j = 0; j < n; ++j) z[j] = a[j] + z[j] * sc;
    tryImprove(z, best);
  }
  return Estimate::ascent(best);
}

}  // namespace mshlab

#endif
