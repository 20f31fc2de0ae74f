// Command-line front end: mass profiles, density estimates, the two-radius
// identity, growth characterizations, integrability exponents, the model
// catalog, and the self-verification suite.
//
// Exit codes: 0 success, 1 failed checks or a divergent computation,
// 2 configuration error (bad flags, bad grammar, unwritable output).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mshlab/catalog.hpp"
#include "mshlab/exponent.hpp"
#include "mshlab/lelong.hpp"
#include "mshlab/parser.hpp"
#include "mshlab/report.hpp"
#include "mshlab/verify.hpp"

namespace {

using namespace mshlab;

// "re,im,re,im,..." (2n values) or "re,re,..." (n values, imaginary parts 0);
// shorter lists are padded with zeros.
Point parsePoint(const std::string& text, int n) {
  Point p = origin(n);
  if (text.empty()) return p;
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse coordinate '" + item + "' in center argument");
    }
  }
  if (int(vals.size()) <= n) {
    for (std::size_t j = 0; j < vals.size(); ++j) p[j] = Complex(vals[j], 0.0);
  } else if (int(vals.size()) <= 2 * n) {
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (j % 2 == 0) p[j / 2] = Complex(vals[j], p[j / 2].imag());
      else p[j / 2] = Complex(p[j / 2].real(), vals[j]);
    }
  } else {
    throw InvalidInput("center has more than 2n coordinates");
  }
  return p;
}

std::string makeRunId(std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  return "run-" + std::to_string(ms) + "-s" + std::to_string(seed);
}

void emitToSink(const std::string& content, const std::string& outPath) {
  if (outPath.empty()) std::cout << content;
  else writeTextFile(outPath, content);
}

// Shared numeric flags. Ranges are validated by the library types.
struct CommonOpts {
  int n = 3;
  int m = 2;
  std::uint64_t seed = 42;
  std::uint64_t samples = 200000;
  std::string center;
  std::string out;
  std::string format = "json";
};

void addSettingFlags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--n", o.n, "complex dimension n (n > m >= 1)")->capture_default_str();
  cmd->add_option("--m", o.m, "Hessian order m")->capture_default_str();
}

void addSamplingFlags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "random seed for sampled integrals")->capture_default_str();
  cmd->add_option("--samples", o.samples, "Monte Carlo samples per shell")
      ->capture_default_str();
}

MCConfig mcFromOpts(const CommonOpts& o) {
  MCConfig cfg;
  cfg.seed = o.seed;
  cfg.samplesPerShell = o.samples;
  return cfg;
}

std::string optionalReal(const std::optional<double>& v, const char* ifMissing) {
  return v ? detail::jsonReal(*v) : detail::jsonString(ifMissing);
}

// ---------------------------------------------------------------------------
// lelong: normalized mass profile and its r -> 0 limit
// ---------------------------------------------------------------------------

int runLelong(const CommonOpts& o, const std::string& fnSpec, const std::string& curSpec,
              double rMin, double rMax, int points) {
  const Setting st{o.n, o.m};
  if (fnSpec.empty() == curSpec.empty())
    throw InvalidInput("provide exactly one of --fn or --current");
  SimpleCurrent T;
  if (!curSpec.empty()) {
    T = parseCurrentSpec(curSpec, st);
  } else {
    const ModelFunction f = parseFunction(fnSpec, st);
    T.n = st.n;
    T.factors.emplace_back(f, 1);
    T.betaPower = 0;
  }
  const Point a = parsePoint(o.center, st.n);
  const MCConfig cfg = mcFromOpts(o);

  const LelongProfile prof = lelongFunction(T, st, a, rMin, rMax, points, cfg);
  const LelongEstimate est =
      detail::extrapolateValues(prof.radii, prof.values, prof.stderrs,
                                LelongMethod::DefinitionExtrapolation);
  if (!o.out.empty()) writeTextFile(o.out, profileCsv(prof));

  std::ostringstream js;
  js << "{\n";
  js << "  \"nu\": " << optionalReal(est.nu, "does-not-converge") << ",\n";
  js << "  \"err\": " << detail::jsonReal(est.err) << ",\n";
  js << "  \"method\": " << detail::jsonString(lelongMethodName(est.method)) << ",\n";
  js << "  \"normExponent\": " << detail::jsonReal(prof.normExponent) << ",\n";
  js << "  \"grid\": {\"rMin\": " << detail::jsonReal(rMin)
     << ", \"rMax\": " << detail::jsonReal(rMax) << ", \"points\": " << points << "}\n";
  js << "}\n";
  std::cout << js.str();
  return 0;
}

// ---------------------------------------------------------------------------
// exponent: integrability analysis over a ball
// ---------------------------------------------------------------------------

int runExponent(const CommonOpts& o, const std::string& fnSpec, double radius) {
  const Setting st{o.n, o.m};
  if (fnSpec.empty()) throw InvalidInput("--fn is required");
  const ModelFunction f = parseFunction(fnSpec, st);
  const Point a = parsePoint(o.center, st.n);
  const CompactRegion K = CompactRegion::ball(a, radius);
  const MCConfig cfg = mcFromOpts(o);

  const TailFit tail = tailExponent(f, K, cfg);
  const ExponentEstimate scan = integrabilityExponent(f, K, cfg);

  if (!o.out.empty()) {
    std::vector<SublevelEstimate> rows;
    if (!tail.unbounded && tail.tRange.first < 0.0 && tail.tRange.second < tail.tRange.first) {
      const auto depths = geomGrid(-tail.tRange.first, -tail.tRange.second, 16);
      rows.reserve(depths.size());
      for (double d : depths) rows.push_back(sublevelVolume(f, K, -d, cfg));
    }
    writeTextFile(o.out, sublevelCsv(rows));
  }
  std::cout << exponentSummaryJson(tail, scan);
  return 0;
}

// ---------------------------------------------------------------------------
// jensen: two-radius mass identity
// ---------------------------------------------------------------------------

int runJensen(const CommonOpts& o, const std::string& curSpec, double r1, double r2) {
  const Setting st{o.n, o.m};
  if (curSpec.empty()) throw InvalidInput("--current is required");
  const SimpleCurrent T = parseCurrentSpec(curSpec, st);
  const Point a = parsePoint(o.center, st.n);
  const JensenReport rep = lelongJensen(T, st, a, r1, r2, mcFromOpts(o));

  std::ostringstream js;
  js << "{\n";
  js << "  \"kernelPower\": " << rep.kernelPower << ",\n";
  js << "  \"normExponent\": " << detail::jsonReal(rep.normExponent) << ",\n";
  js << "  \"lhs\": " << detail::jsonReal(rep.lhs) << ",\n";
  js << "  \"term1\": " << detail::jsonReal(rep.term1) << ",\n";
  js << "  \"term2\": " << detail::jsonReal(rep.term2) << ",\n";
  js << "  \"term3\": " << detail::jsonReal(rep.term3) << ",\n";
  js << "  \"rhs\": " << detail::jsonReal(rep.rhs) << ",\n";
  js << "  \"residual\": " << detail::jsonReal(rep.residual) << ",\n";
  js << "  \"combinedStderr\": " << detail::jsonReal(rep.combinedStderr) << ",\n";
  js << "  \"usedMonteCarlo\": " << (rep.usedMonteCarlo ? "true" : "false") << "\n";
  js << "}\n";
  emitToSink(js.str(), o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// sup: growth characterizations at a point
// ---------------------------------------------------------------------------

int runSup(const CommonOpts& o, const std::string& fnSpec) {
  const Setting st{o.n, o.m};
  if (fnSpec.empty()) throw InvalidInput("--fn is required");
  const ModelFunction f = parseFunction(fnSpec, st);
  const Point a = parsePoint(o.center, st.n);
  const LelongEstimate ell = supGrowth(f, st, a);
  const MeanValueReport mv = meanValueRatios(f, st, a, mcFromOpts(o));

  std::ostringstream js;
  js << "{\n";
  js << "  \"ell\": " << optionalReal(ell.nu, "does-not-converge") << ",\n";
  js << "  \"ellErr\": " << detail::jsonReal(ell.err) << ",\n";
  js << "  \"nu\": " << detail::jsonReal(mv.calibratedNu) << ",\n";
  js << "  \"kappa\": " << detail::jsonReal(mv.kappa) << ",\n";
  js << "  \"ratio\": " << (mv.ratio ? detail::jsonReal(*mv.ratio) : std::string("null"))
     << ",\n";
  js << "  \"shift\": " << detail::jsonReal(mv.shift) << "\n";
  js << "}\n";
  emitToSink(js.str(), o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// verify: the self-check suite
// ---------------------------------------------------------------------------

int runVerify(const CommonOpts& o, const std::vector<std::string>& suite) {
  RunConfig cfg;
  cfg.setting = Setting{o.n, o.m};
  cfg.seed = o.seed;
  cfg.samplesPerShell = o.samples;
  cfg.suite = suite;
  validateRunConfig(cfg);
  if (o.format != "json" && o.format != "csv")
    throw InvalidInput("unknown report format: " + o.format);

  const std::vector<CheckResult> results = runVerifySuite(cfg);
  ReportMeta meta;
  meta.runId = makeRunId(cfg.seed);
  meta.setting = cfg.setting;
  meta.seed = cfg.seed;
  meta.kappa = reportKappa(cfg);

  const std::string report =
      o.format == "json" ? reportJson(meta, results) : reportCsv(results);
  emitToSink(report, o.out);

  if (!o.out.empty()) {
    int pass = 0, fail = 0, finding = 0, skipped = 0;
    for (const auto& c : results) {
      switch (c.status) {
        case CheckStatus::Pass: ++pass; break;
        case CheckStatus::Fail: ++fail; break;
        case CheckStatus::Finding: ++finding; break;
        case CheckStatus::Skipped: ++skipped; break;
      }
    }
    std::cout << results.size() << " checks: " << pass << " pass, " << finding
              << " findings, " << skipped << " skipped, " << fail << " failed\n";
  }
  return suiteExitCode(results);
}

// ---------------------------------------------------------------------------
// catalog: reference entries and their known values
// ---------------------------------------------------------------------------

int runCatalog(const CommonOpts& o) {
  const Setting st{o.n, o.m};
  const auto cat = standardCatalog(st);
  if (o.format == "json") {
    std::ostringstream js;
    js << "[";
    for (std::size_t i = 0; i < cat.size(); ++i) {
      const CatalogEntry& e = cat[i];
      js << (i ? ",\n " : "\n ") << "{\"name\": " << detail::jsonString(e.name)
         << ", \"kind\": " << detail::jsonString(e.isCurrent ? "current" : "function")
         << ", \"spec\": " << detail::jsonString(e.spec)
         << ", \"description\": " << detail::jsonString(e.description) << ", \"density\": "
         << (e.facts.lelongDiverges
                 ? detail::jsonString("diverges")
                 : (e.facts.lelongAtOrigin ? detail::jsonReal(*e.facts.lelongAtOrigin)
                                           : std::string("null")))
         << ", \"exponent\": "
         << (e.facts.iotaUnbounded
                 ? detail::jsonString("unbounded")
                 : (e.facts.iotaAtOrigin ? detail::jsonReal(*e.facts.iotaAtOrigin)
                                         : std::string("null")))
         << ", \"maxOrder\": "
         << (e.facts.maxOrder ? std::to_string(*e.facts.maxOrder) : std::string("null"))
         << ", \"basis\": " << detail::jsonString(e.facts.basis) << "}";
    }
    js << "\n]\n";
    emitToSink(js.str(), o.out);
    return 0;
  }
  if (o.format != "text") throw InvalidInput("unknown catalog format: " + o.format);
  std::ostringstream out;
  out << "catalog at n=" << st.n << ", m=" << st.m << "\n\n";
  for (const CatalogEntry& e : cat) {
    out << e.name << "  [" << (e.isCurrent ? "current" : "function") << ", " << e.facts.basis
        << "]\n";
    out << "  " << e.description << "\n";
    out << "  spec: " << e.spec << "\n";
    std::string facts;
    if (e.facts.lelongDiverges) facts += "density diverges";
    else if (e.facts.lelongAtOrigin)
      facts += "density " + formatReal(*e.facts.lelongAtOrigin);
    if (e.facts.iotaUnbounded) facts += std::string(facts.empty() ? "" : "; ") +
                                        "every positive power integrable";
    else if (e.facts.iotaAtOrigin)
      facts += std::string(facts.empty() ? "" : "; ") + "integrability exponent " +
               formatReal(*e.facts.iotaAtOrigin);
    if (e.facts.maxOrder)
      facts += std::string(facts.empty() ? "" : "; ") + "max Hessian order " +
               std::to_string(*e.facts.maxOrder);
    if (!facts.empty()) out << "  known: " << facts << "\n";
    out << "\n";
  }
  emitToSink(out.str(), o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial singular models: mass profiles, densities, growth laws, and "
               "integrability exponents"};
  app.require_subcommand(1);

  CommonOpts lelongOpts, expOpts, jensenOpts, supOpts, verifyOpts, catalogOpts;

  // lelong
  auto* cmdLelong =
      app.add_subcommand("lelong", "normalized mass profile and its limit at a point");
  std::string lelongFn, lelongCur;
  double lelongRmin = 1e-3, lelongRmax = 0.32;
  int lelongPoints = 12;
  addSettingFlags(cmdLelong, lelongOpts);
  cmdLelong->add_option("--fn", lelongFn, "function in model grammar (analyzed via its Hessian current)");
  cmdLelong->add_option("--current", lelongCur, "current in model grammar");
  cmdLelong->add_option("--center", lelongOpts.center, "base point (comma-separated reals)");
  cmdLelong->add_option("--rmin", lelongRmin, "smallest grid radius")->capture_default_str();
  cmdLelong->add_option("--rmax", lelongRmax, "largest grid radius")->capture_default_str();
  cmdLelong->add_option("--points", lelongPoints, "grid size")->capture_default_str();
  addSamplingFlags(cmdLelong, lelongOpts);
  cmdLelong->add_option("--out", lelongOpts.out, "write the profile as CSV to this path");

  // exponent
  auto* cmdExp = app.add_subcommand("exponent", "integrability exponent over a ball");
  std::string expFn;
  double expRadius = 1.0;
  addSettingFlags(cmdExp, expOpts);
  cmdExp->add_option("--fn", expFn, "function in model grammar");
  cmdExp->add_option("--center", expOpts.center, "ball center (comma-separated reals)");
  cmdExp->add_option("--rmax", expRadius, "ball radius")->capture_default_str();
  addSamplingFlags(cmdExp, expOpts);
  cmdExp->add_option("--out", expOpts.out, "write the sublevel-volume scan as CSV to this path");

  // jensen
  auto* cmdJensen = app.add_subcommand("jensen", "two-radius mass identity for a current");
  std::string jensenCur;
  double jensenR1 = 0.1, jensenR2 = 0.3;
  addSettingFlags(cmdJensen, jensenOpts);
  cmdJensen->add_option("--current", jensenCur, "current in model grammar");
  cmdJensen->add_option("--center", jensenOpts.center, "base point");
  cmdJensen->add_option("--r1", jensenR1, "inner radius")->capture_default_str();
  cmdJensen->add_option("--r2", jensenR2, "outer radius")->capture_default_str();
  addSamplingFlags(cmdJensen, jensenOpts);
  cmdJensen->add_option("--out", jensenOpts.out, "write the JSON report to this path");

  // sup
  auto* cmdSup = app.add_subcommand("sup", "growth characterizations at a point");
  std::string supFn;
  addSettingFlags(cmdSup, supOpts);
  cmdSup->add_option("--fn", supFn, "function in model grammar");
  cmdSup->add_option("--center", supOpts.center, "base point");
  addSamplingFlags(cmdSup, supOpts);
  cmdSup->add_option("--out", supOpts.out, "write the JSON report to this path");

  // verify
  auto* cmdVerify = app.add_subcommand("verify", "run the self-verification suite");
  std::vector<std::string> verifySuite;
  addSettingFlags(cmdVerify, verifyOpts);
  addSamplingFlags(cmdVerify, verifyOpts);
  cmdVerify->add_option("--suite", verifySuite,
                        "run only these check ids (repeat or comma-separate)")
      ->delimiter(',');
  cmdVerify->add_option("--out", verifyOpts.out, "write the report to this path");
  cmdVerify->add_option("--format", verifyOpts.format, "report format: json or csv")
      ->capture_default_str();

  // catalog
  auto* cmdCatalog = app.add_subcommand("catalog", "list the reference entries");
  addSettingFlags(cmdCatalog, catalogOpts);
  catalogOpts.format = "text";
  cmdCatalog->add_option("--format", catalogOpts.format, "listing format: text or json")
      ->capture_default_str();
  cmdCatalog->add_option("--out", catalogOpts.out, "write the listing to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit cleanly; bad flags are config errors
  }

  try {
    if (cmdLelong->parsed())
      return runLelong(lelongOpts, lelongFn, lelongCur, lelongRmin, lelongRmax, lelongPoints);
    if (cmdExp->parsed()) return runExponent(expOpts, expFn, expRadius);
    if (cmdJensen->parsed()) return runJensen(jensenOpts, jensenCur, jensenR1, jensenR2);
    if (cmdSup->parsed()) return runSup(supOpts, supFn);
    if (cmdVerify->parsed()) return runVerify(verifyOpts, verifySuite);
    if (cmdCatalog->parsed()) return runCatalog(catalogOpts);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DivergentIntegral& e) {
    std::cerr << "divergent: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
