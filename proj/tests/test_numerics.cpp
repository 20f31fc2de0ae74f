#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mshlab/fit.hpp"
#include "mshlab/rng.hpp"
#include "mshlab/special.hpp"

using namespace mshlab;
using Catch::Approx;

TEST_CASE("gauss-legendre rule basics", "[numerics]") {
  auto q = legendreRule(16);
  double wsum = 0.0, nsum = 0.0;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    wsum += q.weights[i];
    nsum += q.nodes[i];
  }
  CHECK(wsum == Approx(2.0).epsilon(1e-14));
  CHECK(nsum == Approx(0.0).margin(1e-14));

  CHECK(integrateGL([](double x) { return x * x * x * x * x; }, 0.0, 1.0, 16) ==
        Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(integratePanels([](double x) { return std::sin(x); }, 0.0, kPi, 4, 16) ==
        Approx(2.0).epsilon(1e-13));
  CHECK(integrateGL([](double x) { return std::exp(x); }, -1.0, 2.0, 64) ==
        Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("regularized incomplete beta", "[numerics]") {
  CHECK(regularizedIncompleteBeta(1.0, 1.0, 0.37) == Approx(0.37).epsilon(1e-13));
  CHECK(regularizedIncompleteBeta(1.0, 3.0, 0.2) ==
        Approx(1.0 - std::pow(0.8, 3)).epsilon(1e-13));
  CHECK(regularizedIncompleteBeta(2.5, 1.0, 0.6) == Approx(std::pow(0.6, 2.5)).epsilon(1e-13));
  CHECK(regularizedIncompleteBeta(2.0, 2.0, 0.5) == Approx(0.5).epsilon(1e-13));
  // I_{1/4}(2,3) = 67/256.
  CHECK(regularizedIncompleteBeta(2.0, 3.0, 0.25) == Approx(67.0 / 256.0).epsilon(1e-12));
  // Reflection.
  CHECK(regularizedIncompleteBeta(3.2, 1.7, 0.85) ==
        Approx(1.0 - regularizedIncompleteBeta(1.7, 3.2, 0.15)).epsilon(1e-12));
  CHECK(regularizedIncompleteBeta(2.0, 2.0, 0.0) == 0.0);
  CHECK(regularizedIncompleteBeta(2.0, 2.0, 1.0) == 1.0);
  CHECK_THROWS_AS(regularizedIncompleteBeta(0.0, 1.0, 0.5), InvalidInput);
}

TEST_CASE("digamma values", "[numerics]") {
  const double gamma = 0.5772156649015329;
  CHECK(digamma(1.0) == Approx(-gamma).epsilon(1e-12));
  CHECK(digamma(2.0) == Approx(1.0 - gamma).epsilon(1e-12));
  CHECK(digamma(0.5) == Approx(-gamma - 2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(digamma(7.5) == Approx(digamma(6.5) + 1.0 / 6.5).epsilon(1e-12));
  CHECK_THROWS_AS(digamma(0.0), InvalidInput);
}

TEST_CASE("linear and log-log fits", "[numerics]") {
  std::vector<double> xs{1, 2, 3, 4, 5}, ys;
  for (double x : xs) ys.push_back(4.0 - 2.5 * x);
  auto f = linearFit(xs, ys);
  CHECK(f.slope == Approx(-2.5).epsilon(1e-13));
  CHECK(f.intercept == Approx(4.0).epsilon(1e-12));
  CHECK(f.rSquared == Approx(1.0).epsilon(1e-12));

  std::vector<double> px = geomGrid(0.1, 10.0, 12), py;
  for (double x : px) py.push_back(5.0 * std::pow(x, 3.0));
  auto g = logLogFit(px, py);
  CHECK(g.slope == Approx(3.0).epsilon(1e-12));
  CHECK(std::exp(g.intercept) == Approx(5.0).epsilon(1e-11));
}

TEST_CASE("geometric grid endpoints", "[numerics]") {
  auto g = geomGrid(0.01, 1.0, 9);
  CHECK(g.size() == 9);
  CHECK(g.front() == 0.01);
  CHECK(g.back() == 1.0);
  CHECK(g[4] == Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(geomGrid(-1.0, 1.0, 5), InvalidInput);
}

TEST_CASE("power law recovery", "[numerics]") {
  auto rs = geomGrid(0.01, 1.0, 24);
  std::vector<double> vs;
  for (double r : rs) vs.push_back(2.0 + 3.0 * std::pow(r, 1.5));
  auto fit = powerLawFit(rs, vs);
  CHECK(fit.exponent == Approx(1.5).margin(1e-4));
  CHECK(fit.offset == Approx(2.0).margin(1e-6));
  CHECK(fit.coefficient == Approx(3.0).margin(1e-4));
  CHECK(fit.rmse < 1e-8);
}

TEST_CASE("counter rng determinism and moments", "[numerics]") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  CHECK(a.bits(123) == b.bits(123));
  CHECK(a.bits(123) != c.bits(123));
  CHECK(a.uniform(0) >= 0.0);
  CHECK(a.uniform(0) < 1.0);

  double sum = 0.0, sumSq = 0.0;
  const int pairs = 50000;
  for (int i = 0; i < pairs; ++i) {
    double g0, g1;
    a.gaussianPair(i, g0, g1);
    sum += g0 + g1;
    sumSq += g0 * g0 + g1 * g1;
  }
  const double n = 2.0 * pairs;
  CHECK(sum / n == Approx(0.0).margin(0.01));
  CHECK(sumSq / n == Approx(1.0).margin(0.02));
}

TEST_CASE("parallel chunk merge is worker-count independent", "[numerics]") {
  auto chunkFn = [](int chunk) {
    CounterRng rng(99, static_cast<std::uint64_t>(chunk));
    ChunkStats s;
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform(i);
      s.sum += u;
      s.sumSq += u * u;
      ++s.count;
    }
    return s;
  };
  auto serial = runChunks(8, chunkFn, 1);
  auto parallel = runChunks(8, chunkFn, 4);
  for (int i = 0; i < 8; ++i) {
    CHECK(serial[i].sum == parallel[i].sum);
    CHECK(serial[i].sumSq == parallel[i].sumSq);
  }
  auto ms = mergeChunks(serial);
  auto mp = mergeChunks(parallel);
  CHECK(ms.mean == mp.mean);
  CHECK(ms.stderrOfMean == mp.stderrOfMean);
  CHECK(ms.mean == Approx(0.5).margin(0.02));
}

TEST_CASE("mc config validation", "[numerics]") {
  MCConfig cfg;
  cfg.validate();
  cfg.rngScheme = "bogus";
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.rngScheme = "counter-splitmix-v1";
  cfg.shells = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
