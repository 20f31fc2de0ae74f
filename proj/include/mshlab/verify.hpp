#ifndef MSHLAB_VERIFY_HPP
#define MSHLAB_VERIFY_HPP

// Self-contained verification suite. Each check exercises one measurable
// property of the library end to end -- mass calibration, density limits,
// identity closure, convexity, exponent bounds, reproducibility -- and
// reports a CheckResult. Checks whose purpose is to measure something (a
// constant, a gap) or to confirm an expected divergence report status
// `finding`; `fail` is reserved for genuine violations.
//
// The suite is deterministic for a fixed seed. Monte Carlo checks cap their
// per-shell sample counts so that every check finishes well within the
// stated per-check budget on a single core.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mshlab/catalog.hpp"
#include "mshlab/exponent.hpp"
#include "mshlab/integrate.hpp"
#include "mshlab/lelong.hpp"
#include "mshlab/parser.hpp"
#include "mshlab/report.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  Setting setting{3, 2};
  std::uint64_t seed = 42;
  std::uint64_t samplesPerShell = 200000;
  int shells = 32;
  std::vector<std::string> suite;  // check ids to run; empty means all
};

inline const std::vector<std::string>& verifyCheckIds();

inline void validateRunConfig(const RunConfig& config) {
  // the Setting constructor has already vetted n and m
  if (config.samplesPerShell == 0) throw InvalidInput("samples per shell must be positive");
  if (config.shells <= 0) throw InvalidInput("shell count must be positive");
  const auto& known = verifyCheckIds();
  for (const auto& id : config.suite)
    if (std::find(known.begin(), known.end(), id) == known.end())
      throw InvalidInput("unknown check id: " + id);
}

namespace detail {

inline MCConfig suiteCfg(const RunConfig& c) {
  MCConfig m;
  m.seed = c.seed;
  m.samplesPerShell = c.samplesPerShell;
  m.shells = c.shells;
  return m;
}

// Reduced Monte Carlo budget for checks that only need statistical, not
// high-precision, agreement.
inline MCConfig cappedCfg(const RunConfig& c, std::uint64_t cap, int shells) {
  MCConfig m;
  m.seed = c.seed;
  m.samplesPerShell = std::min<std::uint64_t>(c.samplesPerShell, cap);
  m.shells = std::min(c.shells, shells);
  return m;
}

inline std::optional<CatalogEntry> tryEntry(const Setting& st, const std::string& name) {
  for (const auto& e : standardCatalog(st))
    if (e.name == name) return e;
  return std::nullopt;
}

// Entries exist per setting, but some are only constructible when the
// parameters leave room (e.g. Hessian powers m-1 need m >= 2).
inline std::optional<SimpleCurrent> tryCurrent(const Setting& st, const std::string& name) {
  const auto e = tryEntry(st, name);
  if (!e) return std::nullopt;
  try {
    return catalogCurrent(*e, st);
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

inline std::optional<ModelFunction> tryFunction(const Setting& st, const std::string& name) {
  const auto e = tryEntry(st, name);
  if (!e) return std::nullopt;
  try {
    return catalogFunction(*e, st);
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

inline CheckResult makeCheck(const char* id, const char* claim) {
  CheckResult r;
  r.id = id;
  r.claim = claim;
  return r;
}

inline void skip(CheckResult& r, const std::string& why) {
  r.status = CheckStatus::Skipped;
  r.diagnostics = why;
}

// value must land within tolerance of expected.
inline void judgeWithin(CheckResult& r, double value, double expected, double tol) {
  r.value = value;
  r.expected = expected;
  r.tolerance = tol;
  r.status = std::fabs(value - expected) <= tol ? CheckStatus::Pass : CheckStatus::Fail;
}

inline std::string num(double v) { return formatReal(v); }

// The four reference parameter pairs used by the cross-setting checks.
inline std::vector<Setting> referencePairs() {
  return {Setting{2, 1}, Setting{3, 2}, Setting{4, 2}, Setting{4, 3}};
}

// ---------------------------------------------------------------------------
// Criterion 1: mass calibration against the quadratic profile
// ---------------------------------------------------------------------------

inline CheckResult checkCalibrationRadial(const RunConfig& c) {
  CheckResult r = makeCheck("01-mass-calibration-radial",
                            "ball mass of the quadratic calibration current equals r^(2n)");
  double maxRel = 0.0;
  for (int n : {2, 3, 4}) {
    const Setting st{n, n - 1 > 0 ? n - 1 : 1};
    const auto T = tryCurrent(st, "cal");
    if (!T) {
      skip(r, "calibration current unavailable at n=" + std::to_string(n));
      return r;
    }
    for (double rad : {0.1, 0.5, 1.0}) {
      const Estimate e = ballCurrentMass(*T, st, origin(n), rad, suiteCfg(c));
      const double want = std::pow(rad, 2.0 * n);
      maxRel = std::max(maxRel, std::fabs(e.value - want) / want);
    }
  }
  judgeWithin(r, maxRel, 0.0, 1e-6);
  r.diagnostics = "largest relative error over n in {2,3,4}, r in {0.1,0.5,1}";
  return r;
}

inline CheckResult checkCalibrationMonteCarlo(const RunConfig& c) {
  CheckResult r = makeCheck("01-mass-calibration-sampled",
                            "sampled ball mass matches r^(2n) within three standard errors");
  MCConfig mc = cappedCfg(c, 20000, 8);
  mc.forceMonteCarlo = true;
  double maxDev = 0.0;
  for (int n : {2, 3, 4}) {
    const Setting st{n, n - 1 > 0 ? n - 1 : 1};
    const auto T = tryCurrent(st, "cal");
    if (!T) {
      skip(r, "calibration current unavailable at n=" + std::to_string(n));
      return r;
    }
    for (double rad : {0.1, 0.5, 1.0}) {
      const Estimate e = ballCurrentMass(*T, st, origin(n), rad, mc);
      const double want = std::pow(rad, 2.0 * n);
      // the calibration density is constant, so the stratified sampler can be
      // exactly zero-variance; allow summation roundoff in that case
      const double se = std::max(e.stderrOfMean, 1e-12 * want);
      maxDev = std::max(maxDev, std::fabs(e.value - want) / se);
    }
  }
  judgeWithin(r, maxDev, 0.0, 3.0);
  r.diagnostics = "largest standardized deviation over n in {2,3,4}, r in {0.1,0.5,1}";
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 2: unit density of the canonical singular profile
// ---------------------------------------------------------------------------

inline CheckResult checkFundamentalDensity(const RunConfig& c) {
  CheckResult r = makeCheck("02-fundamental-density",
                            "Hessian current of the canonical profile has unit density");
  double maxDev = 0.0;
  for (const Setting& st : referencePairs()) {
    const auto T = tryCurrent(st, "fundT");
    if (!T) {
      skip(r, "entry fundT unavailable");
      return r;
    }
    const LelongEstimate est = lelongNumber(*T, st, origin(st.n), suiteCfg(c));
    if (est.doesNotConverge()) {
      r.status = CheckStatus::Fail;
      r.valueNote = "does-not-converge";
      r.diagnostics = "density limit did not converge at n=" + std::to_string(st.n) +
                      ", m=" + std::to_string(st.m);
      return r;
    }
    maxDev = std::max(maxDev, std::fabs(*est.nu - 1.0));
  }
  judgeWithin(r, maxDev, 0.0, 1e-3);
  r.diagnostics = "largest deviation of the density from 1 over the four reference pairs";
  return r;
}

inline CheckResult checkFundamentalAtom(const RunConfig& c) {
  CheckResult r = makeCheck("02-fundamental-atom",
                            "top Hessian measure of the canonical profile carries a unit atom");
  double maxDev = 0.0;
  for (const Setting& st : referencePairs()) {
    const auto f = tryFunction(st, "fund");
    if (!f) {
      skip(r, "entry fund unavailable");
      return r;
    }
    const LelongEstimate est = hessianMeasureAtom(*f, st, origin(st.n), suiteCfg(c));
    if (est.doesNotConverge()) {
      r.status = CheckStatus::Fail;
      r.valueNote = "does-not-converge";
      r.diagnostics = "atom extrapolation did not converge at n=" + std::to_string(st.n) +
                      ", m=" + std::to_string(st.m);
      return r;
    }
    maxDev = std::max(maxDev, std::fabs(*est.nu - 1.0));
  }
  judgeWithin(r, maxDev, 0.0, 1e-2);
  r.diagnostics = "largest deviation of the atomic mass from 1 over the four reference pairs";
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 3: monotone normalized mass of positive currents
// ---------------------------------------------------------------------------

inline CheckResult checkPositiveMonotone(const RunConfig& c) {
  CheckResult r = makeCheck("03-positive-monotone",
                            "normalized mass profiles of positive currents are nondecreasing");
  const Setting st = c.setting;
  double minMargin = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (const char* name : {"cal", "fundT", "radlogT"}) {
    const auto T = tryCurrent(st, name);
    if (!T) continue;
    if (st.m + T->p() < st.n) continue;
    const LelongProfile prof =
        lelongFunction(*T, st, origin(st.n), 1e-3, 0.32, 12, suiteCfg(c));
    double scale = 1.0;
    for (double v : prof.values) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i + 1 < prof.values.size(); ++i) {
      const double slack = 3.0 * (prof.stderrs[i] + prof.stderrs[i + 1]);
      const double margin = (prof.values[i + 1] - prof.values[i] + slack) / scale;
      minMargin = std::min(minMargin, margin);
    }
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no positive reference currents constructible at this setting");
    return r;
  }
  r.value = minMargin;
  r.expectedNote = "nonnegative";
  r.tolerance = 1e-9;
  r.status = minMargin >= -1e-9 ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = "smallest normalized forward increment over " + std::to_string(checked) +
                  " profiles, 12 radii each";
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 4: closure of the two-radius mass identity
// ---------------------------------------------------------------------------

inline CheckResult jensenCheck(const RunConfig& c, const char* id, const char* claim,
                               const char* entryName) {
  CheckResult r = makeCheck(id, claim);
  const Setting st = c.setting;
  const auto T = tryCurrent(st, entryName);
  if (!T) {
    skip(r, std::string("entry ") + entryName + " not constructible at this setting");
    return r;
  }
  if (st.m + T->p() < st.n) {
    skip(r, std::string("entry ") + entryName + " outside the admissible degree range");
    return r;
  }
  const JensenReport rep = lelongJensen(*T, st, origin(st.n), 0.1, 0.3, suiteCfg(c));
  judgeWithin(r, rep.residual, 0.0, 1e-2);
  r.diagnostics = "lhs " + num(rep.lhs) + ", rhs " + num(rep.rhs) + ", radii 0.1 and 0.3";
  return r;
}

inline CheckResult checkJensenClosed(const RunConfig& c) {
  return jensenCheck(c, "04-identity-closed",
                     "two-radius mass identity closes for a smooth closed current", "cal");
}

inline CheckResult checkJensenFundamental(const RunConfig& c) {
  return jensenCheck(c, "04-identity-fundamental",
                     "two-radius mass identity closes for the canonical singular current",
                     "fundT");
}

inline CheckResult checkJensenNonclosed(const RunConfig& c) {
  return jensenCheck(c, "04-identity-nonclosed",
                     "two-radius mass identity closes for a non-closed coefficient current",
                     "jensen3");
}

// ---------------------------------------------------------------------------
// Criterion 5: strongly singular current -- scaling law and divergence
// ---------------------------------------------------------------------------

inline CheckResult checkStrongSingularProfile(const RunConfig& c) {
  CheckResult r = makeCheck(
      "05-strong-singular-profile",
      "extremal negative current: scaled profile is a negative constant, density diverges");
  const Setting st = c.setting;
  const auto T = tryCurrent(st, "T0");
  if (!T) {
    skip(r, "entry T0 not constructible at this setting");
    return r;
  }
  const LelongProfile prof = lelongFunction(*T, st, origin(st.n), 1e-3, 1e-2, 8, suiteCfg(c));
  std::vector<double> scaled;
  scaled.reserve(prof.radii.size());
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    scaled.push_back(prof.values[i] * std::pow(prof.radii[i], 2.0 * (st.ratio() - 1.0)));
  double lo = scaled[0], hi = scaled[0], mean = 0.0;
  for (double u : scaled) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
  }
  mean /= double(scaled.size());
  const double spread = (hi - lo) / std::max(std::fabs(mean), 1e-300);
  const LelongEstimate est = lelongNumber(*T, st, origin(st.n), suiteCfg(c), true);

  r.value = mean;
  r.expectedNote = "negative constant";
  r.tolerance = 0.01;
  const bool ok = spread <= 0.01 && mean < 0.0 && est.doesNotConverge();
  r.status = ok ? CheckStatus::Finding : CheckStatus::Fail;
  r.diagnostics = "scaled profile constant " + num(mean) + " with relative spread " +
                  num(spread) + " over r in [1e-3,1e-2]; normalized mass diverges as r -> 0" +
                  (est.doesNotConverge() ? " (expected)" : " NOT detected");
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 6: mildly singular negative current -- convergence and bound
// ---------------------------------------------------------------------------

inline CheckResult checkMildNegativeLimit(const RunConfig& c) {
  CheckResult r = makeCheck("06-mild-negative-limit",
                            "bounded-coefficient negative current has a finite density limit");
  const Setting st = c.setting;
  const auto T = tryCurrent(st, "mild");
  if (!T) {
    skip(r, "entry mild not constructible at this setting");
    return r;
  }
  const NegativeCurrentReport rep =
      negativeCurrentCheck(*T, st, origin(st.n), 0.2, suiteCfg(c));
  const bool ok = rep.converged && rep.nuLimit.has_value() && rep.gNonincreasing;
  if (rep.nuLimit) r.value = *rep.nuLimit;
  else r.valueNote = "does-not-converge";
  r.expectedNote = "finite limit";
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = std::string("kernel integrable: ") + (rep.kernelIntegrable ? "yes" : "no") +
                  ", compensated profile nonincreasing: " + (rep.gNonincreasing ? "yes" : "no");
  return r;
}

inline CheckResult checkNegativeBound(const RunConfig& c) {
  CheckResult r = makeCheck("06-negative-comparison-bound",
                            "comparison bound holds at every radius for both negative currents");
  const Setting st = c.setting;
  int violations = 0, checked = 0;
  std::string names;
  for (const char* name : {"T0", "mild"}) {
    const auto T = tryCurrent(st, name);
    if (!T) continue;
    const NegativeCurrentReport rep =
        negativeCurrentCheck(*T, st, origin(st.n), 0.2, suiteCfg(c));
    for (char ok : rep.boundSatisfied)
      if (!ok) ++violations;
    ++checked;
    names += names.empty() ? name : std::string(", ") + name;
  }
  if (checked == 0) {
    skip(r, "no negative reference currents constructible at this setting");
    return r;
  }
  judgeWithin(r, double(violations), 0.0, 0.0);
  r.diagnostics = "grid radii violating the bound across entries " + names;
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 7: mean-value ratio, calibration constant, bounded entries
// ---------------------------------------------------------------------------

inline CheckResult checkMeanRatio(const RunConfig& c) {
  CheckResult r = makeCheck("07-mean-ratio",
                            "ball-to-sphere mean ratio equals n/(n+1-n/m) at pole entries");
  const Setting st = c.setting;
  const double want = double(st.n) / (double(st.n) + 1.0 - st.ratio());
  double maxDev = 0.0;
  int checked = 0;
  for (const char* name : {"fund", "twopole", "twopole2"}) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    const MeanValueReport mv = meanValueRatios(*f, st, origin(st.n), suiteCfg(c));
    if (!mv.ratio) {
      r.status = CheckStatus::Fail;
      r.diagnostics = std::string("ratio unresolved for entry ") + name;
      return r;
    }
    maxDev = std::max(maxDev, std::fabs(*mv.ratio - want));
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no pole entries available at this setting");
    return r;
  }
  r.value = maxDev;
  r.expected = 0.0;
  r.tolerance = 1e-2;
  r.status = maxDev <= 1e-2 ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = "largest deviation from " + num(want) + " over " + std::to_string(checked) +
                  " entries whose sphere-mean limit is nonzero";
  return r;
}

inline CheckResult checkKappa(const RunConfig& c) {
  CheckResult r = makeCheck("07-calibration-constant",
                            "growth-to-density calibration constant, identical across entries");
  const Setting st = c.setting;
  std::vector<double> ks;
  ks.push_back(measureKappa(st, suiteCfg(c)));
  for (const char* name : {"fund", "quad", "bounded", "twopole"}) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    ks.push_back(meanValueRatios(*f, st, origin(st.n), suiteCfg(c)).kappa);
  }
  const auto [lo, hi] = std::minmax_element(ks.begin(), ks.end());
  const double spread = *hi - *lo;
  r.value = ks.front();
  r.expectedNote = "one measured constant";
  r.tolerance = 1e-3;
  r.status = spread <= 1e-3 ? CheckStatus::Finding : CheckStatus::Fail;
  r.diagnostics = "measured from the canonical profile; spread " + num(spread) + " across " +
                  std::to_string(ks.size()) + " computations";
  return r;
}

inline CheckResult checkBoundedNull(const RunConfig& c) {
  CheckResult r = makeCheck("07-bounded-null",
                            "entries bounded near the base point have zero density");
  const Setting st = c.setting;
  double maxAbs = 0.0;
  int checked = 0;
  for (const char* name : {"quad", "bounded"}) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    // calibrated sphere-mean density with a small extrapolation window, so
    // the smooth part of the entry cannot contaminate the r -> 0 limit
    const LelongMapReport rep =
        lelongMap(*f, st, {origin(st.n)}, suiteCfg(c), 0.01);
    const auto& est = rep.entries.front().estimate;
    if (!est.nu) {
      r.status = CheckStatus::Fail;
      r.valueNote = "does-not-converge";
      r.diagnostics = std::string("density limit unresolved for entry ") + name;
      return r;
    }
    maxAbs = std::max(maxAbs, std::fabs(*est.nu));
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no bounded entries available at this setting");
    return r;
  }
  judgeWithin(r, maxAbs, 0.0, 1e-6);
  r.diagnostics = "largest calibrated density magnitude over " + std::to_string(checked) +
                  " bounded entries, radii up to 0.01";
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 8: convexity in the weight coordinate; sup-growth comparison
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& functionEntryNames() {
  static const std::vector<std::string> names = {"fund",    "quad",    "bounded", "radlog",
                                                 "halfpow", "twopole", "twopole2"};
  return names;
}

inline CheckResult checkConvexity(const RunConfig& c) {
  CheckResult r = makeCheck("08-weight-convexity",
                            "sphere mean and ball sup are convex in the weight coordinate");
  const Setting st = c.setting;
  const auto radii = geomGrid(1e-3, 0.32, 32);
  std::vector<double> xs;
  xs.reserve(radii.size());
  for (double rad : radii) xs.push_back(st.weight(rad));

  int checked = 0;
  std::string offenders;
  for (const auto& name : functionEntryNames()) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    std::vector<double> lambda, sup;
    lambda.reserve(radii.size());
    sup.reserve(radii.size());
    for (double rad : radii) {
      lambda.push_back(sphereMean(*f, origin(st.n), rad, suiteCfg(c)).value);
      sup.push_back(ballSup(*f, origin(st.n), rad).value);
    }
    if (!detail::convexInCoordinate(xs, lambda)) offenders += " " + name + "(mean)";
    if (!detail::convexInCoordinate(xs, sup)) offenders += " " + name + "(sup)";
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no function entries available at this setting");
    return r;
  }
  r.value = double(checked);
  r.expectedNote = "all secant slopes nondecreasing";
  r.status = offenders.empty() ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = offenders.empty()
                      ? "32-point grids, " + std::to_string(checked) + " entries"
                      : "convexity violated for:" + offenders;
  return r;
}

inline CheckResult checkSupGrowthGap(const RunConfig& c) {
  CheckResult r = makeCheck("08-sup-growth-gap",
                            "sup-growth density never exceeds the mean-growth density");
  const Setting st = c.setting;
  double maxGap = -std::numeric_limits<double>::infinity();
  int checked = 0;
  std::string offenders;
  for (const auto& name : functionEntryNames()) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    const LelongEstimate ell = supGrowth(*f, st, origin(st.n));
    if (ell.doesNotConverge()) {
      offenders += " " + name + "(no-sup-limit)";
      continue;
    }
    const MeanValueReport mv = meanValueRatios(*f, st, origin(st.n), suiteCfg(c));
    const double gap = *ell.nu - mv.calibratedNu;
    maxGap = std::max(maxGap, gap);
    if (gap > 1e-2) offenders += " " + name;
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no function entries available at this setting");
    return r;
  }
  r.value = maxGap;
  r.expectedNote = "at most zero up to tolerance";
  r.tolerance = 1e-2;
  r.status = offenders.empty() ? CheckStatus::Finding : CheckStatus::Fail;
  r.diagnostics = offenders.empty()
                      ? "largest measured sup-minus-mean density gap over " +
                            std::to_string(checked) + " entries"
                      : "ordering violated for:" + offenders;
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 9: density map localizes an isolated pole
// ---------------------------------------------------------------------------

inline CheckResult checkDensityMap(const RunConfig& c) {
  CheckResult r = makeCheck("09-density-map",
                            "density map is 1 at the pole, null elsewhere, and has no "
                            "semicontinuity flags");
  const Setting st = c.setting;
  const auto f = tryFunction(st, "fund");
  if (!f) {
    skip(r, "entry fund unavailable");
    return r;
  }
  const int axes = std::min(3, st.n);
  const double step = 0.05;
  std::vector<Point> grid;
  std::vector<int> offsets = {-4, -3, -2, -1, 0, 1, 2, 3, 4};
  std::size_t poleIndex = 0;
  {
    const std::size_t total = [&] {
      std::size_t t = 1;
      for (int a = 0; a < axes; ++a) t *= offsets.size();
      return t;
    }();
    for (std::size_t flat = 0; flat < total; ++flat) {
      Point p = origin(st.n);
      std::size_t rem = flat;
      bool isPole = true;
      for (int a = 0; a < axes; ++a) {
        const int off = offsets[rem % offsets.size()];
        rem /= offsets.size();
        p[a] = Complex(step * off, 0.0);
        if (off != 0) isPole = false;
      }
      if (isPole) poleIndex = grid.size();
      grid.push_back(std::move(p));
    }
  }
  const LelongMapReport rep = lelongMap(*f, st, grid, suiteCfg(c), 0.005);

  double poleDev = std::numeric_limits<double>::infinity();
  double offMax = 0.0;
  int unresolved = 0;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& est = rep.entries[i].estimate;
    if (!est.nu) {
      ++unresolved;
      continue;
    }
    if (i == poleIndex) poleDev = std::fabs(*est.nu - 1.0);
    else offMax = std::max(offMax, std::fabs(*est.nu));
  }
  const bool ok =
      unresolved == 0 && poleDev <= 1e-3 && offMax < 1e-3 && rep.uscFlags.empty();
  r.value = offMax;
  r.expected = 0.0;
  r.tolerance = 1e-3;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = std::to_string(grid.size()) + "-point grid, spacing " + num(step) +
                  "; pole deviation " + num(poleDev) + "; semicontinuity flags " +
                  std::to_string(rep.uscFlags.size()) +
                  (unresolved ? "; unresolved points " + std::to_string(unresolved) : "");
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 10: agreement of the two integrability estimators
// ---------------------------------------------------------------------------

inline CheckResult checkEstimatorAgreement(const RunConfig& c) {
  CheckResult r = makeCheck("10-estimator-agreement",
                            "tail-slope and convergence-scan exponents agree within 5%");
  struct Case {
    int n, m;
    const char* entry;
  };
  const Case cases[] = {
      {2, 1, "fund"}, {3, 2, "fund"}, {4, 2, "fund"}, {4, 3, "fund"}, {4, 2, "cylpole"}};
  double maxRel = 0.0;
  std::string summary;
  for (const Case& cs : cases) {
    const Setting st{cs.n, cs.m};
    const auto f = tryFunction(st, cs.entry);
    if (!f) {
      skip(r, std::string("entry ") + cs.entry + " unavailable at one reference pair");
      return r;
    }
    const double expected = std::string(cs.entry) == "cylpole"
                                ? double(cs.m) * (cs.n - 1) / double(cs.n - 1 - cs.m)
                                : double(cs.n) * cs.m / double(cs.n - cs.m);
    const CompactRegion K = CompactRegion::ball(origin(st.n), 1.0);
    const TailFit tail = tailExponent(*f, K, suiteCfg(c));
    const ExponentEstimate scan = integrabilityExponent(*f, K, suiteCfg(c));
    if (tail.unbounded || scan.unbounded()) {
      r.status = CheckStatus::Fail;
      r.valueNote = "unbounded";
      r.diagnostics = std::string("unexpected unbounded exponent for ") + cs.entry;
      return r;
    }
    maxRel = std::max(maxRel, std::fabs(tail.alpha - expected) / expected);
    maxRel = std::max(maxRel, std::fabs(*scan.iota - expected) / expected);
    maxRel = std::max(maxRel, std::fabs(tail.alpha - *scan.iota) / *scan.iota);
    if (!summary.empty()) summary += "; ";
    summary += std::string(cs.entry) + "(" + std::to_string(cs.n) + "," + std::to_string(cs.m) +
               "): slope " + num(tail.alpha) + ", scan " + num(*scan.iota);
  }
  judgeWithin(r, maxRel, 0.0, 0.05);
  r.diagnostics = summary;
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 11: integrability exponent bounds
// ---------------------------------------------------------------------------

inline CheckResult checkExponentBounds(const RunConfig& c) {
  CheckResult r = makeCheck("11-exponent-bounds",
                            "exponent obeys the dimensional lower bound and the density-driven "
                            "upper bound");
  const Setting st = c.setting;
  double minMargin = std::numeric_limits<double>::infinity();
  bool anyFinite = false;
  int checked = 0;
  std::string offenders;
  for (const auto& name : functionEntryNames()) {
    const auto f = tryFunction(st, name);
    if (!f) continue;
    const ExponentBounds br =
        boundsReport(*f, st, origin(st.n), cappedCfg(c, 4000, 8), 0.25);
    if (!br.lowerOk) offenders += " " + name + "(lower)";
    if (!br.upperOk) offenders += " " + name + "(upper)";
    if (br.iota.iota) {
      anyFinite = true;
      minMargin = std::min(minMargin, (*br.iota.iota - br.lowerBound) / br.lowerBound);
    }
    ++checked;
  }
  if (checked == 0) {
    skip(r, "no function entries available at this setting");
    return r;
  }
  if (anyFinite) r.value = minMargin;
  else r.valueNote = "unbounded";
  r.expectedNote = "nonnegative margin over the lower bound";
  r.tolerance = 1e-6;
  r.status = offenders.empty() ? CheckStatus::Pass : CheckStatus::Fail;
  r.diagnostics = offenders.empty()
                      ? "smallest relative margin over the lower bound across " +
                            std::to_string(checked) + " entries"
                      : "bound violated for:" + offenders;
  return r;
}

inline CheckResult checkDimensionIdentity(const RunConfig& c) {
  CheckResult r = makeCheck("11-dimension-identity",
                            "at m=1 the exponent of the canonical profile equals n/(n-1)");
  const Setting st = c.setting.m == 1 ? c.setting : Setting{2, 1};
  const auto f = tryFunction(st, "fund");
  if (!f) {
    skip(r, "entry fund unavailable");
    return r;
  }
  const ExponentBounds br = boundsReport(*f, st, origin(st.n), cappedCfg(c, 4000, 8), 0.25);
  const double want = double(st.n) / double(st.n - 1);
  if (!br.iota.iota) {
    r.status = CheckStatus::Fail;
    r.valueNote = "unbounded";
    r.expected = want;
    r.diagnostics = "exponent unexpectedly unbounded";
    return r;
  }
  judgeWithin(r, *br.iota.iota, want, 0.05 * want);
  r.diagnostics = std::string("identity flag: ") +
                  (br.hessianIdentityOk && *br.hessianIdentityOk ? "confirmed" : "not set");
  if (br.hessianIdentityOk && !*br.hessianIdentityOk) r.status = CheckStatus::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 12: several poles -- infimum rule and monotonicity
// ---------------------------------------------------------------------------

inline CheckResult checkTwoPoleInfimum(const RunConfig& c) {
  CheckResult r = makeCheck("12-two-pole-infimum",
                            "region exponent equals the smaller per-pole exponent");
  const Setting st = c.setting;
  const auto f = tryFunction(st, "twopole2");
  if (!f) {
    skip(r, "entry twopole2 unavailable");
    return r;
  }
  // pole locations are the centers of the radially singular terms
  std::vector<Point> poles;
  for (const auto& t : f->terms())
    if (t.radial(st.n) && t.profile.singularAtZero()) poles.push_back(t.center);
  if (poles.size() < 2) {
    skip(r, "entry twopole2 does not expose two point poles");
    return r;
  }

  double minPer = std::numeric_limits<double>::infinity();
  double widths = 0.0;
  bool anyFinite = false;
  for (const Point& p : poles) {
    const ExponentEstimate e =
        integrabilityExponent(*f, CompactRegion::ball(p, 0.2), suiteCfg(c));
    if (e.iota) {
      anyFinite = true;
      if (*e.iota < minPer) minPer = *e.iota;
      widths += e.interval.second - e.interval.first;
    }
  }
  const ExponentEstimate inf = compactInfimum(
      *f, CompactRegion::ball(origin(st.n), 0.8), poles, suiteCfg(c));
  if (!anyFinite || !inf.iota) {
    r.status = (!anyFinite && !inf.iota) ? CheckStatus::Pass : CheckStatus::Fail;
    r.valueNote = "unbounded";
    r.diagnostics = "per-pole and region exponents both unbounded";
    return r;
  }
  widths += inf.interval.second - inf.interval.first;
  const double tol = widths + 0.02 * minPer;
  judgeWithin(r, *inf.iota, minPer, tol);
  r.diagnostics = "region scan " + num(*inf.iota) + " vs smaller per-pole exponent " +
                  num(minPer) + " over " + std::to_string(poles.size()) + " poles";
  return r;
}

inline CheckResult checkExponentMonotone(const RunConfig& c) {
  CheckResult r = makeCheck("12-exponent-monotone",
                            "pointwise smaller functions have no larger exponent");
  const Setting st = c.setting;
  const auto base = tryFunction(st, "fund");
  const auto two = tryFunction(st, "twopole");
  if (!base || !two) {
    skip(r, "reference entries unavailable");
    return r;
  }
  const ModelFunction doubled = parseFunction("sum(2*fund())", st);
  const CompactRegion K = CompactRegion::ball(origin(st.n), 0.8);
  const ExponentEstimate eBase = integrabilityExponent(*base, K, suiteCfg(c));
  const ExponentEstimate eDoubled = integrabilityExponent(doubled, K, suiteCfg(c));
  const ExponentEstimate eTwo = integrabilityExponent(*two, K, suiteCfg(c));
  if (!eBase.iota || !eDoubled.iota || !eTwo.iota) {
    r.status = CheckStatus::Fail;
    r.valueNote = "unbounded";
    r.diagnostics = "unexpected unbounded exponent among the ordered test functions";
    return r;
  }
  const double worst =
      std::max(*eDoubled.iota - *eBase.iota, *eTwo.iota - *eBase.iota);
  r.value = worst;
  r.expectedNote = "at most zero up to scan resolution";
  r.tolerance = 0.05;
  r.status = (*eDoubled.iota <= *eBase.iota + 2e-3 && *eTwo.iota <= *eBase.iota + 0.05)
                 ? CheckStatus::Pass
                 : CheckStatus::Fail;
  r.diagnostics = "base " + num(*eBase.iota) + ", doubled " + num(*eDoubled.iota) +
                  ", two-pole " + num(*eTwo.iota);
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 13: reproducibility
// ---------------------------------------------------------------------------

inline CheckResult checkDeterminism(const RunConfig& c) {
  CheckResult r = makeCheck("13-determinism",
                            "identical configuration reproduces byte-identical reports");
  const Setting st = c.setting;
  const auto T = tryCurrent(st, "fundT");
  const auto f = tryFunction(st, "fund");
  if (!T || !f) {
    skip(r, "reference entries unavailable");
    return r;
  }
  auto once = [&]() {
    MCConfig mc = cappedCfg(c, 4000, 4);
    mc.forceMonteCarlo = true;
    const Estimate mass = ballCurrentMass(*T, st, origin(st.n), 0.25, mc);
    const Estimate mean = sphereMean(*f, origin(st.n), 0.25, mc);
    CheckResult p1 = makeCheck("probe-mass", "sampled ball mass");
    p1.value = mass.value;
    p1.tolerance = mass.stderrOfMean;
    p1.status = CheckStatus::Pass;
    CheckResult p2 = makeCheck("probe-mean", "sampled sphere mean");
    p2.value = mean.value;
    p2.tolerance = mean.stderrOfMean;
    p2.status = CheckStatus::Pass;
    const ReportMeta meta{"determinism-probe", st, c.seed, 1.0};
    const std::vector<CheckResult> checks = {p1, p2};
    return std::make_pair(reportJson(meta, checks), reportCsv(checks));
  };
  const auto a = once();
  const auto b = once();
  const bool same = a.first == b.first && a.second == b.second;
  judgeWithin(r, same ? 1.0 : 0.0, 1.0, 0.0);
  r.diagnostics = same ? "two sampled runs serialized to identical JSON and CSV bytes"
                       : "serialized reports differ between identical runs";
  return r;
}

using CheckFn = CheckResult (*)(const RunConfig&);

struct CheckDef {
  const char* id;
  CheckFn fn;
};

inline const std::vector<CheckDef>& checkRegistry() {
  static const std::vector<CheckDef> defs = {
      {"01-mass-calibration-radial", &checkCalibrationRadial},
      {"01-mass-calibration-sampled", &checkCalibrationMonteCarlo},
      {"02-fundamental-density", &checkFundamentalDensity},
      {"02-fundamental-atom", &checkFundamentalAtom},
      {"03-positive-monotone", &checkPositiveMonotone},
      {"04-identity-closed", &checkJensenClosed},
      {"04-identity-fundamental", &checkJensenFundamental},
      {"04-identity-nonclosed", &checkJensenNonclosed},
      {"05-strong-singular-profile", &checkStrongSingularProfile},
      {"06-mild-negative-limit", &checkMildNegativeLimit},
      {"06-negative-comparison-bound", &checkNegativeBound},
      {"07-mean-ratio", &checkMeanRatio},
      {"07-calibration-constant", &checkKappa},
      {"07-bounded-null", &checkBoundedNull},
      {"08-weight-convexity", &checkConvexity},
      {"08-sup-growth-gap", &checkSupGrowthGap},
      {"09-density-map", &checkDensityMap},
      {"10-estimator-agreement", &checkEstimatorAgreement},
      {"11-exponent-bounds", &checkExponentBounds},
      {"11-dimension-identity", &checkDimensionIdentity},
      {"12-two-pole-infimum", &checkTwoPoleInfimum},
      {"12-exponent-monotone", &checkExponentMonotone},
      {"13-determinism", &checkDeterminism},
  };
  return defs;
}

}  // namespace detail

inline const std::vector<std::string>& verifyCheckIds() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& d : detail::checkRegistry()) out.emplace_back(d.id);
    return out;
  }();
  return ids;
}

// Runs the configured checks (all of them when config.suite is empty) and
// returns the results ordered by check id. Deterministic for a fixed seed.
inline std::vector<CheckResult> runVerifySuite(const RunConfig& config) {
  validateRunConfig(config);
  std::vector<CheckResult> results;
  for (const auto& def : detail::checkRegistry()) {
    if (!config.suite.empty() &&
        std::find(config.suite.begin(), config.suite.end(), def.id) == config.suite.end())
      continue;
    CheckResult r;
    try {
      r = def.fn(config);
    } catch (const std::exception& e) {
      r.id = def.id;
      r.claim = "check aborted";
      r.status = CheckStatus::Fail;
      r.diagnostics = e.what();
    }
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return results;
}

// Calibration constant for the report header.
inline double reportKappa(const RunConfig& config) {
  return measureKappa(config.setting, detail::suiteCfg(config));
}

}  // namespace mshlab

#endif
