#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mshlab/catalog.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/parser.hpp"

using namespace mshlab;

namespace {

// Independent oracle: complex Hessian from central finite differences of
// evaluate in the underlying real coordinates,
//   H_jk = (1/4) [ u_{x_j x_k} + u_{y_j y_k} + i (u_{x_j y_k} - u_{y_j x_k}) ].
Complex fdHessianEntry(const ModelFunction& f, const Point& z, int j, int k, double h) {
  auto bump = [&](int coord, int part, double delta) {
    Point w = z;
    if (part == 0)
      w[coord] += Complex(delta, 0.0);
    else
      w[coord] += Complex(0.0, delta);
    return w;
  };
  auto second = [&](int ca, int pa, int cb, int pb) {
    if (ca == cb && pa == pb) {
      Point zp = bump(ca, pa, h), zm = bump(ca, pa, -h);
      return (f.evaluate(zp) - 2.0 * f.evaluate(z) + f.evaluate(zm)) / (h * h);
    }
    Point pp = bump(ca, pa, h), pm = bump(ca, pa, h), mp = bump(ca, pa, -h), mm = bump(ca, pa, -h);
    if (pb == 0) {
      pp[cb] += Complex(h, 0.0);
      pm[cb] += Complex(-h, 0.0);
      mp[cb] += Complex(h, 0.0);
      mm[cb] += Complex(-h, 0.0);
    } else {
      pp[cb] += Complex(0.0, h);
      pm[cb] += Complex(0.0, -h);
      mp[cb] += Complex(0.0, h);
      mm[cb] += Complex(0.0, -h);
    }
    return (f.evaluate(pp) - f.evaluate(pm) - f.evaluate(mp) + f.evaluate(mm)) / (4.0 * h * h);
  };
  const double xx = second(j, 0, k, 0);
  const double yy = second(j, 1, k, 1);
  const double xy = second(j, 0, k, 1);
  const double yx = second(j, 1, k, 0);
  return 0.25 * Complex(xx + yy, xy - yx);
}

Point randomOffPolePoint(const ModelFunction& f, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  const int n = f.dim();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = Complex(u(gen), u(gen));
    bool ok = true;
    for (const auto& t : f.terms())
      if (t.profile.singularAtZero() && distanceSquared(z, t.center, t.k) < 0.09) ok = false;
    if (ok) return z;
  }
  FAIL("could not sample an off-pole point");
  return origin(n);
}

void checkHessianAgainstFD(const ModelFunction& f, int points, unsigned seed) {
  std::mt19937 gen(seed);
  const double h = 1e-4;
  const int n = f.dim();
  for (int p = 0; p < points; ++p) {
    const Point z = randomOffPolePoint(f, gen);
    const HermitianMatrix hm = f.hessian(z);
    double scale = std::max(1.0, hm.frobeniusNorm());
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const Complex fd = fdHessianEntry(f, z, j, k, h);
        INFO("entry (" << j << "," << k << ") at point " << p);
        REQUIRE(std::abs(fd - hm.at(j, k)) <= 1e-5 * scale);
      }
  }
}

}  // namespace

TEST_CASE("closed-form complex Hessian matches finite differences on the catalog",
          "[model]") {
  Setting st32{3, 2};
  for (const auto& e : standardCatalog(st32)) {
    if (e.isCurrent) continue;
    INFO("entry " << e.name);
    checkHessianAgainstFD(catalogFunction(e, st32), 100, 12345u + unsigned(e.name.size()));
  }
  Setting st42{4, 2};
  const auto cat42 = standardCatalog(st42);
  checkHessianAgainstFD(catalogFunction(catalogEntry(cat42, "cylpole"), st42), 100, 777u);
}

TEST_CASE("trace identity: four times the Hessian trace is the real Laplacian",
          "[model]") {
  Setting st{3, 2};
  const auto cat = standardCatalog(st);
  const ModelFunction f = catalogFunction(catalogEntry(cat, "twopole"), st);
  std::mt19937 gen(99u);
  const double h = 1e-4;
  for (int p = 0; p < 20; ++p) {
    const Point z = randomOffPolePoint(f, gen);
    double lap = 0.0;
    for (int j = 0; j < f.dim(); ++j)
      for (int part = 0; part < 2; ++part) {
        Point zp = z, zm = z;
        const Complex d = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
        zp[j] += d;
        zm[j] -= d;
        lap += (f.evaluate(zp) - 2.0 * f.evaluate(z) + f.evaluate(zm)) / (h * h);
      }
    const auto spec = eigenvalues(f.hessian(z));
    const double trace = elementarySymmetric(spec.values, 1);
    REQUIRE(std::fabs(4.0 * trace - lap) <= 1e-4 * std::max(1.0, std::fabs(lap)));
  }
}

TEST_CASE("evaluate produces the expected closed-form values", "[model]") {
  Setting st{3, 2};
  const ModelFunction fund = fundamentalSolution(st);
  Point z = origin(3);
  z[0] = Complex(1.0, 0.0);
  REQUIRE(fund.evaluate(z) == Catch::Approx(-2.0));  // -(1/s0) t^{-s0}, s0 = 1/2, t = 1
  z[0] = Complex(0.5, 0.0);
  REQUIRE(fund.evaluate(z) == Catch::Approx(-2.0 / 0.5));
  REQUIRE(fund.evaluate(origin(3)) == -std::numeric_limits<double>::infinity());

  const ModelFunction quad = parseFunction("quad()", st);
  z[0] = Complex(1.0, 2.0);
  z[1] = Complex(0.0, -1.0);
  REQUIRE(quad.evaluate(z) == Catch::Approx(6.0));

  const ModelFunction lg = parseFunction("radlog()", st);
  REQUIRE(lg.evaluate(z) == Catch::Approx(std::log(6.0)));

  const ModelFunction af = parseFunction("aff(c0=-1,c1=0.5)", st);
  REQUIRE(af.evaluate(z) == Catch::Approx(-1.0 + 0.5 * 6.0));

  const ModelFunction cyl = ModelFunction::cylindrical(3, 2, Profile::power(0.5));
  Point w = origin(3);
  w[0] = Complex(3.0, 0.0);
  w[1] = Complex(0.0, 4.0);
  w[2] = Complex(100.0, -3.0);  // last coordinate must not matter
  REQUIRE(cyl.evaluate(w) == Catch::Approx(-std::pow(25.0, -0.5)));
}

TEST_CASE("weight-function Hessian has the frozen eigenvalue pair at unit radius",
          "[model]") {
  // n = 2, m = 1: s0 = 1, phiTilde = -t^{-1}; at |z| = 1 the eigenvalues are
  // {gp + t gpp, gp} = {-1, 1}.
  Setting st{2, 1};
  const ModelFunction f = fundamentalSolution(st);
  Point z = origin(2);
  z[0] = Complex(std::sqrt(0.5), 0.0);
  z[1] = Complex(0.0, -std::sqrt(0.5));
  const auto eig = eigenvalues(f.hessian(z)).values;
  REQUIRE(eig.size() == 2);
  REQUIRE(eig[0] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(eig[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("realGradient matches finite differences", "[model]") {
  Setting st{3, 2};
  const auto cat = standardCatalog(st);
  const ModelFunction f = catalogFunction(catalogEntry(cat, "twopole2"), st);
  std::mt19937 gen(4242u);
  const double h = 1e-6;
  for (int p = 0; p < 20; ++p) {
    const Point z = randomOffPolePoint(f, gen);
    const auto g = f.realGradient(z);
    for (int j = 0; j < f.dim(); ++j)
      for (int part = 0; part < 2; ++part) {
        Point zp = z, zm = z;
        const Complex d = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
        zp[j] += d;
        zm[j] -= d;
        const double fd = (f.evaluate(zp) - f.evaluate(zm)) / (2.0 * h);
        REQUIRE(g[2 * j + part] == Catch::Approx(fd).margin(1e-5 * std::max(1.0, std::fabs(fd))));
      }
  }
}

TEST_CASE("pole bookkeeping", "[model]") {
  Setting st{3, 2};
  const auto cat = standardCatalog(st);
  const ModelFunction two = catalogFunction(catalogEntry(cat, "twopole"), st);
  REQUIRE(two.poles().size() == 2);
  REQUIRE_FALSE(two.hasCylindricalPole());

  const ModelFunction b = catalogFunction(catalogEntry(cat, "bounded"), st);
  REQUIRE(b.poles().empty());

  Setting st42{4, 2};
  const auto cat42 = standardCatalog(st42);
  const ModelFunction cyl = catalogFunction(catalogEntry(cat42, "cylpole"), st42);
  REQUIRE(cyl.poles().empty());
  REQUIRE(cyl.hasCylindricalPole());

  REQUIRE_THROWS_AS(two.hessian(origin(3)), SingularPoint);
  REQUIRE_THROWS_AS(two.realGradient(origin(3)), SingularPoint);
}

TEST_CASE("scaledSum flattens and validates", "[model]") {
  Setting st{3, 2};
  const ModelFunction f = fundamentalSolution(st);
  Point c = origin(3);
  c[1] = Complex(0.0, 0.25);
  const ModelFunction g = fundamentalSolution(st, c);
  const ModelFunction s = scaledSum({{2.0, f}, {0.5, g}});
  REQUIRE(s.terms().size() == 2);
  REQUIRE(s.terms()[0].coeff == Catch::Approx(2.0 / st.weightPower()));
  REQUIRE(s.terms()[1].coeff == Catch::Approx(0.5 / st.weightPower()));
  Point z = origin(3);
  z[0] = Complex(0.3, 0.1);
  REQUIRE(s.evaluate(z) == Catch::Approx(2.0 * f.evaluate(z) + 0.5 * g.evaluate(z)));
  REQUIRE_THROWS_AS(scaledSum({{-1.0, f}}), InvalidInput);
}

TEST_CASE("constructor validation", "[model]") {
  REQUIRE_THROWS_AS(ModelFunction(3, {}), InvalidInput);
  FunctionTerm bad{1.0, origin(2), 2, Profile::logProfile()};
  REQUIRE_THROWS_AS(ModelFunction(3, {bad}), InvalidInput);  // center dim mismatch
  FunctionTerm badK{1.0, origin(3), 4, Profile::logProfile()};
  REQUIRE_THROWS_AS(ModelFunction(3, {badK}), InvalidInput);
  FunctionTerm neg{-1.0, origin(3), 3, Profile::logProfile()};
  REQUIRE_THROWS_AS(ModelFunction(3, {neg}), InvalidInput);
  REQUIRE_THROWS_AS(Profile::power(0.0), InvalidInput);
  REQUIRE_THROWS_AS(ModelFunction::cylindrical(3, 3, Profile::power(1.0)), InvalidInput);
}
