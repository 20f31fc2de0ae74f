#ifndef MSHLAB_CURRENT_HPP
#define MSHLAB_CURRENT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/model_function.hpp"

namespace mshlab {

// T = coefficient * prod_i (dd^c f_i)^{k_i} wedge beta^{betaPower}.
// Every wedge factor is closed, so dd^c T = dd^c(coefficient) wedge the rest.
// Bidimension is (p, p) with p = n - q - betaPower, q = sum of multiplicities.
struct SimpleCurrent {
  int n = 0;
  std::optional<ModelFunction> coefficient;  // nullopt means the constant 1
  std::vector<std::pair<ModelFunction, int>> factors;
  int betaPower = 0;

  int q() const {
    int s = 0;
    for (const auto& [f, k] : factors) s += k;
    return s;
  }
  int p() const { return n - q() - betaPower; }

  void validate() const {
    if (n < 1) throw InvalidInput("current dimension must be positive");
    if (betaPower < 0) throw InvalidInput("beta power must be nonnegative");
    for (const auto& [f, k] : factors) {
      if (f.dim() != n) throw InvalidInput("factor dimension mismatch");
      if (k < 1) throw InvalidInput("factor multiplicity must be positive");
    }
    if (coefficient && coefficient->dim() != n)
      throw InvalidInput("coefficient dimension mismatch");
    if (q() + betaPower > n)
      throw InvalidInput("degree bookkeeping: q + betaPower exceeds the dimension");
  }

  // dd^c T; empty optional encodes the zero current (constant coefficient).
  std::optional<SimpleCurrent> ddc() const {
    if (!coefficient) return std::nullopt;
    SimpleCurrent out;
    out.n = n;
    out.factors = factors;
    out.factors.emplace_back(*coefficient, 1);
    out.betaPower = betaPower;
    out.validate();
    return out;
  }

  bool operator==(const SimpleCurrent& o) const {
    return n == o.n && coefficient == o.coefficient && factors == o.factors &&
           betaPower == o.betaPower;
  }

  std::string render() const {
    std::string out = "cur(coef=";
    out += coefficient ? coefficient->render() : "1";
    out += ",ddc=";
    if (factors.empty()) {
      out += "quad()^(0)";
    } else {
      for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i].first.render() + "^(" + std::to_string(factors[i].second) + ")";
      }
    }
    out += ",beta=" + std::to_string(betaPower) + ")";
    return out;
  }
};

// True when the coefficient and every factor is radial about a — the case
// with an exact one-dimensional reduction.
inline bool isRadialCurrentAbout(const SimpleCurrent& t, const Point& a) {
  if (t.coefficient && !t.coefficient->isRadialAbout(a)) return false;
  for (const auto& [f, k] : t.factors)
    if (!f.isRadialAbout(a)) return false;
  return true;
}

}  // namespace mshlab

#endif
