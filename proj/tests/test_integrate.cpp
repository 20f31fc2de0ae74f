#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mshlab/catalog.hpp"
#include "mshlab/integrate.hpp"
#include "mshlab/parser.hpp"

using namespace mshlab;

namespace {

MCConfig smallMC() {
  MCConfig cfg;
  cfg.samplesPerShell = 4000;
  cfg.shells = 8;
  return cfg;
}

MCConfig mediumMC() {
  MCConfig cfg;
  cfg.samplesPerShell = 20000;
  cfg.shells = 16;
  return cfg;
}

SimpleCurrent cur(const std::string& spec, const Setting& st) {
  return parseCurrentSpec(spec, st);
}

}  // namespace

TEST_CASE("calibration identity: mass of the quadratic Hessian ball is r^{2n}",
          "[integrate]") {
  // Oracle: with the locked normalization, mass(ddc|z|^2, B_r) = r^{2n}.
  for (const Setting st : {Setting{2, 1}, Setting{3, 2}, Setting{4, 3}}) {
    const SimpleCurrent cal = cur("cur(coef=1,ddc=quad()^(1))", st);
    for (double r : {0.3, 1.0, 1.7}) {
      const Estimate e = ballCurrentMass(cal, st, origin(st.n), r, smallMC());
      REQUIRE(e.method == Method::RadialQuadrature);
      REQUIRE(e.value == Catch::Approx(std::pow(r, 2.0 * st.n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("calibration mass is translation invariant (zero-variance Monte Carlo)",
          "[integrate]") {
  Setting st{3, 2};
  const SimpleCurrent cal = cur("cur(coef=1,ddc=quad()^(1))", st);
  Point a = origin(3);
  a[0] = Complex(0.4, -0.2);
  a[2] = Complex(0.0, 1.1);
  const double r = 0.8;
  const Estimate e = ballCurrentMass(cal, st, a, r, smallMC());
  REQUIRE(e.method == Method::MonteCarlo);
  REQUIRE(e.value == Catch::Approx(std::pow(r, 6.0)).epsilon(1e-9));
  // constant integrand: the spread is pure floating-point roundoff
  REQUIRE(e.stderrOfMean <= 1e-8);

  // deterministic reproducibility, independent of worker count
  MCConfig c1 = smallMC();
  c1.parallelism = 1;
  MCConfig c3 = smallMC();
  c3.parallelism = 3;
  const SimpleCurrent mild = cur("cur(coef=aff(c0=-1,c1=0.5),ddc=fund()^(m-1))", st);
  MCConfig f1 = c1, f3 = c3;
  f1.forceMonteCarlo = f3.forceMonteCarlo = true;
  const Estimate m1 = ballCurrentMass(mild, st, origin(3), r, f1);
  const Estimate m3 = ballCurrentMass(mild, st, origin(3), r, f3);
  REQUIRE(m1.value == m3.value);
  REQUIRE(m1.stderrOfMean == m3.stderrOfMean);
}

TEST_CASE("canonical Hessian current has unit normalized mass", "[integrate]") {
  // Oracle: mass(ddc phiTilde ^ beta^{n-1}, B_r) = r^{2n(m-1)/m} exactly.
  for (const Setting st : {Setting{3, 2}, Setting{4, 3}}) {
    const SimpleCurrent t = cur("cur(coef=1,ddc=fund()^(1))", st);
    for (double r : {0.2, 0.9}) {
      const double expect = std::pow(r, 2.0 * st.n * (st.m - 1) / st.m);
      REQUIRE(ballCurrentMass(t, st, origin(st.n), r, smallMC()).value ==
              Catch::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("log-pole Hessian current mass is r^{2(n-1)}", "[integrate]") {
  Setting st{3, 2};
  const SimpleCurrent t = cur("cur(coef=1,ddc=radlog()^(1))", st);
  for (double r : {0.4, 1.3})
    REQUIRE(ballCurrentMass(t, st, origin(3), r, smallMC()).value ==
            Catch::Approx(std::pow(r, 4.0)).epsilon(1e-9));
}

TEST_CASE("extremal current mass is -(n/(n-m)) r^2", "[integrate]") {
  // Oracle: the weighted integrand is exactly constant, so the ball mass of
  // phiTilde (ddc phiTilde)^{m-1} wedge beta^{n-m} equals -(n/(n-m)) r^2.
  for (const Setting st : {Setting{3, 2}, Setting{4, 2}, Setting{4, 3}}) {
    const SimpleCurrent t0 = cur("cur(coef=fund(),ddc=fund()^(m-1))", st);
    const double c = -double(st.n) / (st.n - st.m);
    for (double r : {0.35, 1.1})
      REQUIRE(ballCurrentMass(t0, st, origin(st.n), r, smallMC()).value ==
              Catch::Approx(c * r * r).epsilon(1e-8));
  }
}

TEST_CASE("bounded-coefficient current mass has the two-power closed form",
          "[integrate]") {
  // Oracle: M(t) = t^{n/m} gives mass = -r^{2n/m} + c1 (n/m)/(n/m+1) r^{2(n/m+1)}.
  Setting st{3, 2};
  const SimpleCurrent mild = cur("cur(coef=aff(c0=-1,c1=0.5),ddc=fund()^(m-1))", st);
  for (double r : {0.5, 0.9}) {
    const double expect = -std::pow(r, 3.0) + 0.3 * std::pow(r, 5.0);
    REQUIRE(ballCurrentMass(mild, st, origin(3), r, smallMC()).value ==
            Catch::Approx(expect).epsilon(1e-9));
  }
  Setting st43{4, 3};
  const SimpleCurrent mild43 = cur("cur(coef=aff(c0=-1,c1=0.5),ddc=fund()^(m-1))", st43);
  const double r = 0.7;
  const double expect = -std::pow(r, 8.0 / 3.0) + (2.0 / 7.0) * std::pow(r, 14.0 / 3.0);
  REQUIRE(ballCurrentMass(mild43, st43, origin(4), r, smallMC()).value ==
          Catch::Approx(expect).epsilon(1e-9));
}

TEST_CASE("full wedge powers carry unit atoms", "[integrate]") {
  // Oracle: (ddc phiTilde)^m wedge beta^{n-m} and (ddc log|z|^2)^n are unit
  // Dirac masses at the pole in this normalization.
  for (const Setting st : {Setting{3, 2}, Setting{4, 3}}) {
    const SimpleCurrent t = cur("cur(coef=1,ddc=fund()^(" + std::to_string(st.m) + "))", st);
    REQUIRE(ballCurrentMass(t, st, origin(st.n), 0.37, smallMC()).value ==
            Catch::Approx(1.0).margin(1e-9));
  }
  Setting st{3, 2};
  const SimpleCurrent lt = cur("cur(coef=1,ddc=radlog()^(3))", st);
  REQUIRE(ballCurrentMass(lt, st, origin(3), 0.6, smallMC()).value ==
          Catch::Approx(1.0).margin(1e-9));

  // atom against a bounded coefficient picks up the coefficient value
  const SimpleCurrent ct = cur("cur(coef=aff(c0=-1,c1=1),ddc=fund()^(2))", st);
  REQUIRE(ballCurrentMass(ct, st, origin(3), 0.5, smallMC()).value ==
          Catch::Approx(-1.0).margin(1e-9));

  // and the weight hook: an atom at the center weighs w0
  RadialWeight w;
  w.w = [](double rho) { return rho * rho; };
  w.w0 = 5.0;
  const SimpleCurrent at = cur("cur(coef=1,ddc=fund()^(2))", st);
  REQUIRE(ballCurrentMass(at, st, origin(3), 0.5, smallMC(), &w).value ==
          Catch::Approx(5.0).margin(1e-9));
}

TEST_CASE("three-factor current mass with singular coefficient", "[integrate]") {
  // Oracle: coef = -t^{-0.15}, M(t) = t^{3/2}: mass = -(10/9) r^{2.7}.
  Setting st{3, 2};
  const SimpleCurrent j3 = cur(
      "cur(coef=radpow(s=0.14999999999999999),ddc=fund()^(m-1),beta=1)", st);
  for (double r : {0.45, 1.2})
    REQUIRE(ballCurrentMass(j3, st, origin(3), r, smallMC()).value ==
            Catch::Approx(-(10.0 / 9.0) * std::pow(r, 2.7)).epsilon(1e-8));
}

TEST_CASE("radial weights integrate against the mass profile", "[integrate]") {
  // Oracle: dM = (3/2) t^{1/2} dt for the canonical Hessian current at (3,2),
  // so weighting by rho^2 = t gives (3/2)/(5/2) r^5 = 0.6 r^5.
  Setting st{3, 2};
  const SimpleCurrent t = cur("cur(coef=1,ddc=fund()^(1))", st);
  RadialWeight w;
  w.w = [](double rho) { return rho * rho; };
  w.w0 = 0.0;
  const double r = 0.8;
  REQUIRE(ballCurrentMass(t, st, origin(3), r, smallMC(), &w).value ==
          Catch::Approx(0.6 * std::pow(r, 5.0)).epsilon(1e-9));
}

TEST_CASE("divergent masses are detected and thrown", "[integrate]") {
  Setting st{3, 2};
  REQUIRE_THROWS_AS(
      ballCurrentMass(cur("cur(coef=fund(),ddc=fund()^(2))", st), st, origin(3), 0.5,
                      smallMC()),
      DivergentIntegral);  // singular coefficient against an atom
  REQUIRE_THROWS_AS(
      ballCurrentMass(cur("cur(coef=radpow(s=2),ddc=fund()^(1))", st), st, origin(3), 0.5,
                      smallMC()),
      DivergentIntegral);  // weighted exponent 3/2 - 2 < 0
  REQUIRE_THROWS_AS(
      ballCurrentMass(cur("cur(coef=1,ddc=radpow(s=1.2)^(3))", st), st, origin(3), 0.5,
                      smallMC()),
      DivergentIntegral);  // factor exponent 3 - 3*2.2 < 0
}

TEST_CASE("Monte Carlo mass path agrees with the closed forms", "[integrate]") {
  Setting st{3, 2};
  MCConfig mc = mediumMC();
  mc.forceMonteCarlo = true;
  const double r = 0.9;

  const SimpleCurrent mild = cur("cur(coef=aff(c0=-1,c1=0.5),ddc=fund()^(m-1))", st);
  const double exact = -std::pow(r, 3.0) + 0.3 * std::pow(r, 5.0);
  const Estimate e = ballCurrentMass(mild, st, origin(3), r, mc);
  REQUIRE(e.method == Method::MonteCarlo);
  REQUIRE(e.stderrOfMean > 0.0);
  REQUIRE(std::fabs(e.value - exact) <= std::max(5.0 * e.stderrOfMean, 5e-3 * std::fabs(exact)));

  const SimpleCurrent j3 = cur(
      "cur(coef=radpow(s=0.14999999999999999),ddc=fund()^(m-1),beta=1)", st);
  const double exact3 = -(10.0 / 9.0) * std::pow(r, 2.7);
  const Estimate e3 = ballCurrentMass(j3, st, origin(3), r, mc);
  REQUIRE(std::fabs(e3.value - exact3) <=
          std::max(5.0 * e3.stderrOfMean, 2e-2 * std::fabs(exact3)));
}

TEST_CASE("annulus masses with the comparison kernel", "[integrate]") {
  Setting st{3, 2};
  // Oracle: radlog Hessian current with kernel power m-1 reduces to
  // M(t) = t^{1/2}, so the annulus mass is r2 - r1.
  const SimpleCurrent lt = cur("cur(coef=1,ddc=radlog()^(1))", st);
  const Estimate a1 = annulusCurrentMass(lt, st, origin(3), 0.3, 0.8, st.m - 1, smallMC());
  REQUIRE(a1.method == Method::RadialQuadrature);
  REQUIRE(a1.value == Catch::Approx(0.5).epsilon(1e-9));

  // Oracle: jensen3 with kernel power 0: annulus of -(10/9) t^{1.35}.
  const SimpleCurrent j3 = cur(
      "cur(coef=radpow(s=0.14999999999999999),ddc=fund()^(m-1),beta=1)", st);
  const double expect =
      -(10.0 / 9.0) * (std::pow(0.8, 2.7) - std::pow(0.3, 2.7));
  REQUIRE(annulusCurrentMass(j3, st, origin(3), 0.3, 0.8, 0, smallMC()).value ==
          Catch::Approx(expect).epsilon(1e-8));

  // Monte Carlo path against the closed form
  MCConfig mc = mediumMC();
  mc.forceMonteCarlo = true;
  const Estimate aMc = annulusCurrentMass(lt, st, origin(3), 0.3, 0.8, st.m - 1, mc);
  REQUIRE(aMc.method == Method::MonteCarlo);
  REQUIRE(std::fabs(aMc.value - 0.5) <= std::max(5.0 * aMc.stderrOfMean, 1e-2));

  REQUIRE_THROWS_AS(annulusCurrentMass(lt, st, origin(3), 0.8, 0.3, 1, smallMC()),
                    InvalidInput);
  REQUIRE_THROWS_AS(annulusCurrentMass(lt, st, origin(3), 0.3, 0.8, 5, smallMC()),
                    InvalidInput);  // degree overflow
}

TEST_CASE("sphere means: closed forms, quadrature, Monte Carlo", "[integrate]") {
  Setting st{3, 2};
  MCConfig cfg = smallMC();

  // radial about the center: the aggregate profile value
  const ModelFunction fund = fundamentalSolution(st);
  for (double r : {0.3, 1.4}) {
    const Estimate e = sphereMean(fund, origin(3), r, cfg);
    REQUIRE(e.method == Method::ClosedForm);
    REQUIRE(e.value == Catch::Approx(st.weight(r)).epsilon(1e-12));
  }

  // shifted affine term: mean of |z - b|^2 over S(a, r) is r^2 + |a - b|^2,
  // here with |b| = 0.5
  const ModelFunction aff = parseFunction(
      "aff(c0=-1,c1=2,center=0,0,0.3,-0.4,0,0)", st);
  const double r = 0.7;
  const Estimate ea = sphereMean(aff, origin(3), r, cfg);
  REQUIRE(ea.method == Method::RadialQuadrature);
  REQUIRE(ea.value == Catch::Approx(-1.0 + 2.0 * (r * r + 0.25)).epsilon(1e-10));

  // aligned cylindrical: Beta(k, n-k) moment; for (n,k,s) = (3,2,1/2):
  // E[(r^2 B)^{-1/2}] = r^{-1} Gamma(1.5)Gamma(3)/(Gamma(2)Gamma(2.5)) = (4/3)/r
  const ModelFunction cyl = parseFunction("cyl(s=0.5,k=2)", st);
  const Estimate ec = sphereMean(cyl, origin(3), r, cfg);
  REQUIRE(ec.method == Method::ClosedForm);
  REQUIRE(ec.value == Catch::Approx(-(4.0 / 3.0) / r).epsilon(1e-12));

  // Monte Carlo path agrees with the quadrature value on a shifted pole
  const ModelFunction shifted = parseFunction(
      "radpow(s=0.5,center=0.3,0,0,0,0,0)", st);
  const Estimate eq = sphereMean(shifted, origin(3), 0.7, cfg);
  MCConfig mc = mediumMC();
  mc.forceMonteCarlo = true;
  const Estimate em = sphereMean(shifted, origin(3), 0.7, mc);
  REQUIRE(em.method == Method::MonteCarlo);
  REQUIRE(std::fabs(em.value - eq.value) <= std::max(5.0 * em.stderrOfMean, 1e-3));
}

TEST_CASE("ball means: closed forms, quadrature, Monte Carlo", "[integrate]") {
  Setting st{3, 2};
  MCConfig cfg = smallMC();
  const double r = 0.8;

  // radial closed forms at n = 3
  REQUIRE(ballMean(fundamentalSolution(st), origin(3), r, cfg).value ==
          Catch::Approx(-2.4 / r).epsilon(1e-12));
  REQUIRE(ballMean(parseFunction("radlog()", st), origin(3), r, cfg).value ==
          Catch::Approx(std::log(r * r) - 1.0 / 3.0).epsilon(1e-12));
  REQUIRE(ballMean(parseFunction("quad()", st), origin(3), r, cfg).value ==
          Catch::Approx(0.75 * r * r).epsilon(1e-12));

  // aligned cylindrical Beta(k, n-k+1) moment: (3,2,1/2) gives 1.6 / r
  const Estimate ec = ballMean(parseFunction("cyl(s=0.5,k=2)", st), origin(3), r, cfg);
  REQUIRE(ec.method == Method::ClosedForm);
  REQUIRE(ec.value == Catch::Approx(-1.6 / r).epsilon(1e-12));

  // shifted affine: mean of |z-b|^2 over B(a,r) = |a-b|^2 + n r^2/(n+1)
  const ModelFunction aff = parseFunction("aff(c0=0,c1=1,center=0,0,0.3,-0.4,0,0)", st);
  const Estimate ea = ballMean(aff, origin(3), r, cfg);
  REQUIRE(ea.method == Method::RadialQuadrature);
  REQUIRE(ea.value == Catch::Approx(0.25 + 0.75 * r * r).epsilon(1e-9));

  // Monte Carlo vs closed form on the singular radial profile
  MCConfig mc = mediumMC();
  mc.forceMonteCarlo = true;
  const Estimate em = ballMean(fundamentalSolution(st), origin(3), r, mc);
  REQUIRE(em.method == Method::MonteCarlo);
  REQUIRE(std::fabs(em.value - (-2.4 / r)) <=
          std::max(5.0 * em.stderrOfMean, 2e-2 * 2.4 / r));

  // divergence pre-checks
  REQUIRE_THROWS_AS(ballMean(parseFunction("radpow(s=3)", st), origin(3), r, cfg),
                    DivergentIntegral);
  REQUIRE_THROWS_AS(ballMean(parseFunction("cyl(s=2,k=2)", st), origin(3), r, cfg),
                    DivergentIntegral);
}

TEST_CASE("ball suprema", "[integrate]") {
  Setting st{3, 2};
  const double r = 0.6;

  // radial increasing: attained on the outer boundary
  const Estimate e0 = ballSup(fundamentalSolution(st), origin(3), r);
  REQUIRE(e0.method == Method::ClosedForm);
  REQUIRE(e0.value == Catch::Approx(st.weight(r)).epsilon(1e-10));

  // off-center ball: sup at distance d + r from the pole
  Point a = origin(3);
  a[0] = Complex(0.5, 0.0);
  const Estimate e1 = ballSup(fundamentalSolution(st), a, r);
  REQUIRE(e1.value == Catch::Approx(st.weight(0.5 + r)).epsilon(1e-10));

  // decreasing affine profile: sup at the center of symmetry
  const Estimate e2 = ballSup(ModelFunction::radial(3, Profile::affine(1.0, -2.0)),
                              origin(3), r);
  REQUIRE(e2.value == Catch::Approx(1.0).epsilon(1e-10));

  // two poles: sup of phiTilde(z) + 2 phiTilde(z - 0.5 e1) on B(0, 0.2) is at
  // z = -0.2 e1: -2/0.2 - 2*2/0.7 = -110/7
  const auto cat = standardCatalog(st);
  const ModelFunction two = catalogFunction(catalogEntry(cat, "twopole"), st);
  const Estimate e3 = ballSup(two, origin(3), 0.2);
  REQUIRE(e3.method == Method::AscentLowerBound);
  REQUIRE(e3.value <= -110.0 / 7.0 + 1e-9);
  REQUIRE(e3.value >= -110.0 / 7.0 - 1e-6);
}

TEST_CASE("sphere means are unitary invariant", "[integrate]") {
  // rotate the first two coordinates; the cylindrical pole set is preserved,
  // so the Monte Carlo means must agree within their errors
  Setting st{3, 2};
  const ModelFunction cyl = parseFunction("cyl(s=0.5,k=2)", st);
  Point a = origin(3);
  a[0] = Complex(0.1, 0.0);
  a[1] = Complex(0.0, 0.2);
  const double phi = 0.7, c = std::cos(phi), s = std::sin(phi);
  Point aRot = a;
  aRot[0] = c * a[0] - s * a[1];
  aRot[1] = s * a[0] + c * a[1];
  MCConfig mc = mediumMC();
  const Estimate m1 = sphereMean(cyl, a, 0.5, mc);
  const Estimate m2 = sphereMean(cyl, aRot, 0.5, mc);
  REQUIRE(m1.method == Method::MonteCarlo);
  REQUIRE(std::fabs(m1.value - m2.value) <=
          5.0 * (m1.stderrOfMean + m2.stderrOfMean) + 1e-6);
}
