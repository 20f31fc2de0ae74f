#ifndef MSHLAB_MODEL_FUNCTION_HPP
#define MSHLAB_MODEL_FUNCTION_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/hermitian.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

using Point = std::vector<Complex>;

inline Point origin(int n) { return Point(static_cast<size_t>(n), Complex(0.0)); }

inline double distanceSquared(const Point& a, const Point& b, int upTo) {
  double t = 0.0;
  for (int j = 0; j < upTo; ++j) t += std::norm(a[j] - b[j]);
  return t;
}

// One-variable radial profile g(t), applied to t = squared distance.
//   power(s):  g(t) = -t^{-s},  s > 0
//   log:       g(t) = log t
//   affine:    g(t) = c0 + c1 t
// All three have monomial derivatives g'(t) = leadCoeff * t^leadPow, which is
// what makes the radial mass bookkeeping exact.
struct Profile {
  enum class Kind { Power, Log, Affine };
  Kind kind = Kind::Affine;
  double s = 1.0;
  double c0 = 0.0;
  double c1 = 0.0;

  static Profile power(double s) {
    if (!(s > 0.0)) throw InvalidInput("power profile requires s > 0");
    Profile p;
    p.kind = Kind::Power;
    p.s = s;
    return p;
  }
  static Profile logProfile() {
    Profile p;
    p.kind = Kind::Log;
    return p;
  }
  static Profile affine(double c0, double c1) {
    Profile p;
    p.kind = Kind::Affine;
    p.c0 = c0;
    p.c1 = c1;
    return p;
  }

  bool singularAtZero() const { return kind != Kind::Affine; }

  double g(double t) const {
    switch (kind) {
      case Kind::Power:
        return t <= 0.0 ? -std::numeric_limits<double>::infinity() : -std::pow(t, -s);
      case Kind::Log:
        return t <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(t);
      case Kind::Affine:
        return c0 + c1 * t;
    }
    return 0.0;
  }
  double gp(double t) const {
    switch (kind) {
      case Kind::Power:
        return s * std::pow(t, -s - 1.0);
      case Kind::Log:
        return 1.0 / t;
      case Kind::Affine:
        return c1;
    }
    return 0.0;
  }
  double gpp(double t) const {
    switch (kind) {
      case Kind::Power:
        return -s * (s + 1.0) * std::pow(t, -s - 2.0);
      case Kind::Log:
        return -1.0 / (t * t);
      case Kind::Affine:
        return 0.0;
    }
    return 0.0;
  }

  // g'(t) = leadCoeff() * t^leadPow() exactly.
  double leadCoeff() const {
    switch (kind) {
      case Kind::Power:
        return s;
      case Kind::Log:
        return 1.0;
      case Kind::Affine:
        return c1;
    }
    return 0.0;
  }
  double leadPow() const {
    switch (kind) {
      case Kind::Power:
        return -s - 1.0;
      case Kind::Log:
        return -1.0;
      case Kind::Affine:
        return 0.0;
    }
    return 0.0;
  }

  bool nondecreasing() const { return kind != Kind::Affine || c1 >= 0.0; }

  // t such that g(t) = v, for strictly monotone profiles.
  double inverse(double v) const {
    switch (kind) {
      case Kind::Power:
        if (!(v < 0.0)) throw InvalidInput("power profile range is (-inf, 0)");
        return std::pow(-v, -1.0 / s);
      case Kind::Log:
        return std::exp(v);
      case Kind::Affine:
        if (c1 == 0.0) throw InvalidInput("constant profile has no inverse");
        return (v - c0) / c1;
    }
    return 0.0;
  }

  bool operator==(const Profile& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Power) return s == o.s;
    if (kind == Kind::Affine) return c0 == o.c0 && c1 == o.c1;
    return true;
  }
};

// A weighted profile term coeff * g(|z' - center'|^2) over the first k
// coordinates; k == n means fully radial.
struct FunctionTerm {
  double coeff = 1.0;
  Point center;
  int k = 0;
  Profile profile;

  bool radial(int n) const { return k == n; }
  bool operator==(const FunctionTerm& o) const {
    return coeff == o.coeff && center == o.center && k == o.k && profile == o.profile;
  }
};

namespace detail {
inline std::string renderReal(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string renderPoint(const Point& p) {
  std::string out;
  for (size_t j = 0; j < p.size(); ++j) {
    if (j) out += ",";
    out += renderReal(p[j].real()) + "," + renderReal(p[j].imag());
  }
  return out;
}

inline bool isOrigin(const Point& p) {
  for (const auto& c : p)
    if (c != Complex(0.0)) return false;
  return true;
}
}  // namespace detail

// Nonnegative combination of profile terms. Values are extended reals
// (-inf on pole sets); Hessians are closed-form and throw on the pole set.
class ModelFunction {
 public:
  ModelFunction(int n, std::vector<FunctionTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ < 1) throw InvalidInput("dimension must be positive");
    for (auto& t : terms_) {
      if (static_cast<int>(t.center.size()) != n_)
        throw InvalidInput("term center dimension mismatch");
      if (t.k < 1 || t.k > n_) throw InvalidInput("term coordinate count out of range");
      if (t.coeff < 0.0) throw InvalidInput("negative coefficient in combination");
    }
    if (terms_.empty()) throw InvalidInput("function needs at least one term");
  }

  static ModelFunction radial(int n, Profile p, Point center = {}) {
    if (center.empty()) center = origin(n);
    return ModelFunction(n, {FunctionTerm{1.0, std::move(center), n, p}});
  }
  static ModelFunction cylindrical(int n, int k, Profile p, Point center = {}) {
    if (k >= n) throw InvalidInput("cylindrical coordinate count must satisfy k < n");
    if (center.empty()) center = origin(n);
    return ModelFunction(n, {FunctionTerm{1.0, std::move(center), k, p}});
  }

  int dim() const { return n_; }
  const std::vector<FunctionTerm>& terms() const { return terms_; }

  double evaluate(const Point& z) const {
    checkDim(z);
    double v = 0.0;
    for (const auto& t : terms_) {
      const double dist = distanceSquared(z, t.center, t.k);
      if (dist == 0.0 && t.profile.singularAtZero())
        return -std::numeric_limits<double>::infinity();
      v += t.coeff * t.profile.g(dist);
    }
    return v;
  }

  HermitianMatrix hessian(const Point& z) const {
    checkDim(z);
    HermitianMatrix h(n_);
    for (const auto& t : terms_) {
      const double dist = distanceSquared(z, t.center, t.k);
      if (dist == 0.0 && t.profile.singularAtZero())
        throw SingularPoint("Hessian requested on the pole set");
      const double gp = t.coeff * t.profile.gp(dist);
      const double gpp = t.coeff * t.profile.gpp(dist);
      for (int j = 0; j < t.k; ++j) {
        const Complex wj = z[j] - t.center[j];
        for (int k2 = j; k2 < t.k; ++k2) {
          const Complex wk = z[k2] - t.center[k2];
          Complex v = gpp * wk * std::conj(wj);
          if (j == k2) v += gp;
          h.set(j, k2, h.at(j, k2) + v);
        }
      }
    }
    return h;
  }

  // Gradient in the 2n real coordinates (x1, y1, ..., xn, yn).
  std::vector<double> realGradient(const Point& z) const {
    checkDim(z);
    std::vector<double> g(2 * static_cast<size_t>(n_), 0.0);
    for (const auto& t : terms_) {
      const double dist = distanceSquared(z, t.center, t.k);
      if (dist == 0.0 && t.profile.singularAtZero())
        throw SingularPoint("gradient requested on the pole set");
      const double gp = t.coeff * t.profile.gp(dist);
      for (int j = 0; j < t.k; ++j) {
        const Complex d = gp * std::conj(z[j] - t.center[j]);
        g[2 * j] += 2.0 * d.real();
        g[2 * j + 1] -= 2.0 * d.imag();
      }
    }
    return g;
  }

  bool isRadialAbout(const Point& a) const {
    for (const auto& t : terms_)
      if (!t.radial(n_) || t.center != a) return false;
    return true;
  }

  // Aggregate profile value sum coeff*g(t) — valid when isRadialAbout holds.
  double radialValue(double t) const {
    double v = 0.0;
    for (const auto& term : terms_) v += term.coeff * term.profile.g(t);
    return v;
  }

  // Centers of fully-radial singular terms (the point poles).
  std::vector<Point> poles() const {
    std::vector<Point> out;
    for (const auto& t : terms_)
      if (t.radial(n_) && t.profile.singularAtZero()) {
        bool seen = false;
        for (const auto& p : out) seen = seen || p == t.center;
        if (!seen) out.push_back(t.center);
      }
    return out;
  }

  bool hasCylindricalPole() const {
    for (const auto& t : terms_)
      if (!t.radial(n_) && t.profile.singularAtZero()) return true;
    return false;
  }

  bool operator==(const ModelFunction& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  // Canonical grammar text; parse(render(f)) == f.
  std::string render() const {
    if (terms_.size() == 1 && terms_[0].coeff == 1.0) return renderAtom(terms_[0]);
    std::string out = "sum(";
    for (size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += ",";
      out += detail::renderReal(terms_[i].coeff) + "*" + renderAtom(terms_[i]);
    }
    return out + ")";
  }

 private:
  void checkDim(const Point& z) const {
    if (static_cast<int>(z.size()) != n_) throw InvalidInput("point dimension mismatch");
  }

  std::string renderAtom(const FunctionTerm& t) const {
    const bool centered = !detail::isOrigin(t.center);
    std::string c = centered ? ",center=" + detail::renderPoint(t.center) : "";
    if (!t.radial(n_)) {
      if (t.profile.kind != Profile::Kind::Power)
        throw InvalidInput("unrenderable cylindrical profile");
      return "cyl(s=" + detail::renderReal(t.profile.s) + ",k=" + std::to_string(t.k) + c + ")";
    }
    switch (t.profile.kind) {
      case Profile::Kind::Power:
        return "radpow(s=" + detail::renderReal(t.profile.s) + c + ")";
      case Profile::Kind::Log:
        return centered ? "radlog(center=" + detail::renderPoint(t.center) + ")" : "radlog()";
      case Profile::Kind::Affine:
        return "aff(c0=" + detail::renderReal(t.profile.c0) +
               ",c1=" + detail::renderReal(t.profile.c1) + c + ")";
    }
    throw InvalidInput("unrenderable term");
  }

  int n_;
  std::vector<FunctionTerm> terms_;
};

// The weight function of the working order: phiTilde(z) = -(1/s0)|z|^{-2 s0}
// with s0 = n/m - 1, normalized so its m-fold Hessian measure has unit atom.
inline ModelFunction fundamentalSolution(const Setting& st, Point center = {}) {
  const double s0 = st.weightPower();
  if (center.empty()) center = origin(st.n);
  FunctionTerm t{1.0 / s0, std::move(center), st.n, Profile::power(s0)};
  return ModelFunction(st.n, {t});
}

// Combine functions with nonnegative weights into one flattened combination.
inline ModelFunction scaledSum(const std::vector<std::pair<double, ModelFunction>>& parts) {
  if (parts.empty()) throw InvalidInput("empty combination");
  const int n = parts.front().second.dim();
  std::vector<FunctionTerm> terms;
  for (const auto& [c, f] : parts) {
    if (c < 0.0) throw InvalidInput("negative coefficient in combination");
    if (f.dim() != n) throw InvalidInput("combination dimension mismatch");
    for (auto t : f.terms()) {
      t.coeff *= c;
      terms.push_back(std::move(t));
    }
  }
  return ModelFunction(n, std::move(terms));
}

}  // namespace mshlab

#endif
