#ifndef MSHLAB_CATALOG_HPP
#define MSHLAB_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "mshlab/current.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/parser.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

// Reference facts attached to a catalog entry. Optional values that are
// absent mean "not applicable"; the flags mark divergent/unbounded cases.
struct KnownFacts {
  std::optional<double> lelongAtOrigin;  // density limit at the first pole
  bool lelongDiverges = false;           // the normalized mass blows up
  std::optional<double> iotaAtOrigin;    // integrability threshold at the pole
  bool iotaUnbounded = false;            // every positive power is integrable
  std::optional<int> maxOrder;           // largest admissible Hessian order
  std::string basis;                     // "exact" or "measured"
};

struct CatalogEntry {
  std::string name;
  bool isCurrent = false;
  std::string spec;  // grammar text, parseable by parseFunctionSpec/parseCurrentSpec
  std::string description;
  KnownFacts facts;
};

namespace detail {

inline std::string renderPointSpec(const Point& p) {
  std::string out;
  for (size_t j = 0; j < p.size(); ++j) {
    if (j) out += ",";
    out += renderReal(p[j].real()) + "," + renderReal(p[j].imag());
  }
  return out;
}

}  // namespace detail

// The standard example battery for a given dimension pair. Entries are
// chosen so that every code path (closed form, quadrature, Monte Carlo,
// atoms, divergence sentinels) is exercised by at least one of them.
inline std::vector<CatalogEntry> standardCatalog(const Setting& st) {
  const int n = st.n, m = st.m;
  const double s0 = st.weightPower();
  std::vector<CatalogEntry> out;

  Point shift = origin(n);
  shift[0] = Complex(0.5, 0.0);

  {
    CatalogEntry e;
    e.name = "fund";
    e.spec = "fund()";
    e.description = "canonical singular profile -t^{-s0}/s0 with s0 = n/m - 1";
    e.facts.lelongAtOrigin = 1.0;
    e.facts.iotaAtOrigin = double(n) * m / double(n - m);
    e.facts.maxOrder = m;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "quad";
    e.spec = "quad()";
    e.description = "smooth quadratic |z|^2";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.iotaUnbounded = true;
    e.facts.maxOrder = n - 1;  // admissible at every order this library models
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "bounded";
    e.spec = "aff(c0=-1,c1=1)";
    e.description = "bounded negative function -1 + |z|^2 near the origin";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.iotaUnbounded = true;
    e.facts.maxOrder = n - 1;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "radlog";
    e.spec = "radlog()";
    e.description = "logarithmic pole log|z|^2: unbounded but with zero density limit";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.iotaUnbounded = true;
    e.facts.maxOrder = n - 1;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "halfpow";
    e.spec = "radpow(s=" + detail::renderReal(0.5 * s0) + ")";
    e.description = "radial pole milder than the canonical one (exponent s0/2)";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.iotaAtOrigin = double(n) / (0.5 * s0);
    e.facts.maxOrder = int(std::floor(double(n) / (0.5 * s0 + 1.0) + 1e-9));
    e.facts.basis = "exact";
    out.push_back(e);
  }
  if (double(n - 1) / m - 1.0 > 1e-9) {
    CatalogEntry e;
    const double s = double(n - 1) / m - 1.0;
    e.name = "cylpole";
    e.spec = "cyl(s=" + detail::renderReal(s) + ",k=" + std::to_string(n - 1) + ")";
    e.description = "cylindrical pole along a line, at the admissibility threshold";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.iotaAtOrigin = double(m) * (n - 1) / double(n - 1 - m);
    e.facts.maxOrder = m;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "twopole";
    e.spec = "sum(1*fund(),2*fund(center=" + detail::renderPointSpec(shift) + "))";
    e.description = "two canonical poles with weights 1 and 2";
    e.facts.lelongAtOrigin = 1.0;
    e.facts.iotaAtOrigin = double(n) * m / double(n - m);
    e.facts.maxOrder = m;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "twopole2";
    e.spec = "sum(1*fund(),1*radpow(s=" + detail::renderReal(0.5 * s0) +
             ",center=" + detail::renderPointSpec(shift) + "))";
    e.description = "canonical pole at the origin plus a milder pole nearby";
    e.facts.lelongAtOrigin = 1.0;
    e.facts.iotaAtOrigin = double(n) * m / double(n - m);
    e.facts.maxOrder = std::min(m, int(std::floor(double(n) / (0.5 * s0 + 1.0) + 1e-9)));
    e.facts.basis = "exact";
    out.push_back(e);
  }

  // currents
  {
    CatalogEntry e;
    e.name = "cal";
    e.isCurrent = true;
    e.spec = "cur(coef=1,ddc=quad()^(1))";
    e.description = "calibration current: Hessian of |z|^2, mass of B_r equals r^{2n}";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "fundT";
    e.isCurrent = true;
    e.spec = "cur(coef=1,ddc=fund()^(1))";
    e.description = "Hessian current of the canonical profile; unit density at 0";
    e.facts.lelongAtOrigin = 1.0;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "radlogT";
    e.isCurrent = true;
    e.spec = "cur(coef=1,ddc=radlog()^(1))";
    e.description = "Hessian current of the log pole; zero density at 0";
    e.facts.lelongAtOrigin = 0.0;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "T0";
    e.isCurrent = true;
    e.spec = "cur(coef=fund(),ddc=fund()^(m-1))";
    e.description = "extremal negative current whose normalized mass diverges at 0";
    e.facts.lelongDiverges = true;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "mild";
    e.isCurrent = true;
    e.spec = "cur(coef=aff(c0=-1,c1=0.5),ddc=fund()^(m-1))";
    e.description = "negative current with bounded coefficient; density limit -1 at 0";
    e.facts.lelongAtOrigin = -1.0;
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "jensen3";
    e.isCurrent = true;
    e.spec = "cur(coef=radpow(s=" + detail::renderReal(0.3 * s0) +
             "),ddc=fund()^(m-1),beta=1)";
    e.description = "three-term mass-formula exercise with one explicit beta slot";
    e.facts.basis = "exact";
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "jensen3b";
    e.isCurrent = true;
    e.spec = "cur(coef=radpow(s=" + detail::renderReal(0.3 * s0) +
             "),ddc=fund()^(m-1),beta=0)";
    e.description = "variant of jensen3 with a nondegenerate comparison exponent";
    e.facts.basis = "exact";
    out.push_back(e);
  }
  return out;
}

inline const CatalogEntry& catalogEntry(const std::vector<CatalogEntry>& cat,
                                        const std::string& name) {
  for (const auto& e : cat)
    if (e.name == name) return e;
  throw InvalidInput("unknown catalog entry: " + name);
}

inline SimpleCurrent catalogCurrent(const CatalogEntry& e, const Setting& st) {
  if (!e.isCurrent) throw InvalidInput("catalog entry is not a current: " + e.name);
  return parseCurrentSpec(e.spec, st);
}

inline ModelFunction catalogFunction(const CatalogEntry& e, const Setting& st) {
  if (e.isCurrent) throw InvalidInput("catalog entry is not a function: " + e.name);
  return parseFunction(e.spec, st);
}

}  // namespace mshlab

#endif
