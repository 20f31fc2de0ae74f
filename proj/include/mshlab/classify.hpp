#ifndef MSHLAB_CLASSIFY_HPP
#define MSHLAB_CLASSIFY_HPP

#include <cmath>
#include <cstdint>

#include "mshlab/hermitian.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/rng.hpp"

namespace mshlab {

// Classification against the order-m positivity cone: a smooth function is
// m-sh when sigma_k of its complex Hessian is >= 0 for k = 1..m.
// "Boundary" marks the radial power threshold s = n/m - 1 where sigma_m
// vanishes identically off the pole.
enum class MshClass { Msh, NotMsh, Boundary };

inline const char* mshClassName(MshClass c) {
  switch (c) {
    case MshClass::Msh:
      return "msh";
    case MshClass::NotMsh:
      return "not-msh";
    case MshClass::Boundary:
      return "boundary";
  }
  return "?";
}

namespace detail {

// Single-term closed-form thresholds. Radial power(s): m-sh iff
// s <= n/m - 1, boundary exactly at equality. Cylindrical power(s) on k
// coordinates: m-sh iff s <= k/m - 1 (the k-block spectrum is padded by
// zero eigenvalues, so equality keeps every sigma_j nonnegative).
inline MshClass classifyTerm(const FunctionTerm& t, int n, int m) {
  const double tol = 1e-12;
  if (t.profile.kind == Profile::Kind::Affine)
    return t.profile.c1 >= 0.0 ? MshClass::Msh : MshClass::NotMsh;
  if (t.profile.kind == Profile::Kind::Log) return MshClass::Msh;
  if (t.radial(n)) {
    const double thr = double(n) / m - 1.0;
    if (std::fabs(t.profile.s - thr) <= tol * std::max(1.0, thr)) return MshClass::Boundary;
    return t.profile.s < thr ? MshClass::Msh : MshClass::NotMsh;
  }
  const double thr = double(t.k) / m - 1.0;
  return t.profile.s <= thr + tol * std::max(1.0, std::fabs(thr)) ? MshClass::Msh
                                                                  : MshClass::NotMsh;
}

}  // namespace detail

// Closed-form single-term classification plus a deterministic sampling sweep
// for combinations: sigma_k(H) for k = 1..m at 10^4 off-pole points in the
// unit ball around the first center, tolerance -1e-9 relative to the Hessian
// scale.
inline MshClass mshClassify(const ModelFunction& f, int m) {
  const int n = f.dim();
  if (m < 1 || m >= n) throw InvalidInput("classification order must satisfy 1 <= m < n");
  if (f.terms().size() == 1) return detail::classifyTerm(f.terms()[0], n, m);

  CounterRng rng(20240915u, 1u);
  std::uint64_t ctr = 0;
  const Point& base = f.terms().front().center;
  bool anyNegative = false;
  for (int sample = 0; sample < 10000; ++sample) {
    Point z(n);
    for (int attempt = 0;; ++attempt) {
      double g0, g1;
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        rng.gaussianPair(ctr++, g0, g1);
        z[j] = Complex(g0, g1);
        norm2 += std::norm(z[j]);
      }
      const double radius = std::pow(rng.uniform(ctr++), 1.0 / (2.0 * n));
      const double scale = radius / std::sqrt(norm2);
      bool offPole = true;
      for (int j = 0; j < n; ++j) z[j] = base[j] + z[j] * scale;
      for (const auto& t : f.terms())
        if (t.profile.singularAtZero() && distanceSquared(z, t.center, t.k) < 1e-12)
          offPole = false;
      if (offPole || attempt > 50) break;
    }
    const HermitianMatrix h = f.hessian(z);
    const auto ev = eigenvalues(h).values;
    double scale = 1.0, pw = 1.0;
    for (double v : ev) scale = std::max(scale, std::fabs(v));
    for (int k = 1; k <= m; ++k) {
      pw *= scale;
      if (elementarySymmetric(ev, k) < -1e-9 * (1.0 + pw)) anyNegative = true;
    }
    if (anyNegative) break;
  }
  return anyNegative ? MshClass::NotMsh : MshClass::Msh;
}

// Largest order m (1 <= m < n) for which f classifies msh or boundary;
// 0 when not even subharmonic.
inline int mshMaxOrder(const ModelFunction& f) {
  for (int m = f.dim() - 1; m >= 1; --m)
    if (mshClassify(f, m) != MshClass::NotMsh) return m;
  return 0;
}

}  // namespace mshlab

#endif
