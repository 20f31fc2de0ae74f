#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "mshlab/hermitian.hpp"

using namespace mshlab;
using Catch::Approx;

namespace {

// Hessian of a radial profile g(|z|^2): H = g' I + g'' z z^*, whose spectrum
// is {g' with multiplicity n-1, g' + t g''} at t = |z|^2.
HermitianMatrix radialHessian(const std::vector<Complex>& z, double gp, double gpp) {
  const int n = static_cast<int>(z.size());
  HermitianMatrix h(n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      Complex v = gpp * z[k] * std::conj(z[j]);
      if (j == k) v += gp;
      h.set(j, k, v);
    }
  return h;
}

HermitianMatrix randomHermitian(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  HermitianMatrix h(n);
  for (int j = 0; j < n; ++j) {
    h.set(j, j, dist(gen));
    for (int k = j + 1; k < n; ++k) h.set(j, k, Complex(dist(gen), dist(gen)));
  }
  return h;
}

}  // namespace

TEST_CASE("identity and diagonal spectra", "[hermitian]") {
  auto id = HermitianMatrix::identity(4);
  for (double v : eigenvalues(id).values) CHECK(v == Approx(1.0).margin(1e-14));

  HermitianMatrix d(3);
  d.set(0, 0, 2.5);
  d.set(1, 1, -1.0);
  d.set(2, 2, 0.25);
  auto ev = eigenvalues(d).values;
  CHECK(ev[0] == Approx(-1.0));
  CHECK(ev[1] == Approx(0.25));
  CHECK(ev[2] == Approx(2.5));
}

TEST_CASE("two by two complex pivots", "[hermitian]") {
  HermitianMatrix a(2, {Complex(0), Complex(1), Complex(1), Complex(0)});
  auto ea = eigenvalues(a).values;
  CHECK(ea[0] == Approx(-1.0));
  CHECK(ea[1] == Approx(1.0));

  HermitianMatrix b(2, {Complex(1), Complex(0, 1), Complex(0, -1), Complex(1)});
  auto eb = eigenvalues(b).values;
  CHECK(eb[0] == Approx(0.0).margin(1e-13));
  CHECK(eb[1] == Approx(2.0));
}

TEST_CASE("spectral invariants on random input", "[hermitian]") {
  for (unsigned seed : {11u, 12u, 13u}) {
    auto h = randomHermitian(6, seed);
    auto ev = eigenvalues(h).values;
    double sum = 0.0, sumSq = 0.0;
    for (double v : ev) {
      sum += v;
      sumSq += v * v;
    }
    CHECK(sum == Approx(h.trace()).margin(1e-11));
    const double fro = h.frobeniusNorm();
    CHECK(sumSq == Approx(fro * fro).margin(1e-11));

    auto shifted = h + 0.75 * HermitianMatrix::identity(6);
    auto evs = eigenvalues(shifted).values;
    for (size_t i = 0; i < ev.size(); ++i) CHECK(evs[i] == Approx(ev[i] + 0.75).margin(1e-11));
  }
}

TEST_CASE("radial profile spectrum", "[hermitian]") {
  // g(t) = -t^{-s}: g' = s t^{-s-1}, g'' = -s(s+1) t^{-s-2};
  // eigenvalues {s t^{-s-1} (n-1 times), -s^2 t^{-s-1}}.
  const std::vector<Complex> z{{0.3, 0.4}, {-0.5, 0.2}, {0.1, -0.7}};
  double t = 0.0;
  for (auto& v : z) t += std::norm(v);
  const double s = 0.7;
  const double gp = s * std::pow(t, -s - 1.0);
  const double gpp = -s * (s + 1.0) * std::pow(t, -s - 2.0);
  auto ev = eigenvalues(radialHessian(z, gp, gpp)).values;
  CHECK(ev[0] == Approx(-s * s * std::pow(t, -s - 1.0)).epsilon(1e-12));
  CHECK(ev[1] == Approx(gp).epsilon(1e-12));
  CHECK(ev[2] == Approx(gp).epsilon(1e-12));
}

TEST_CASE("weight hessian spectrum at unit radius", "[hermitian]") {
  // n = 2, profile -1/t at t = 1: eigenvalues are {-1, 1}.
  const std::vector<Complex> z{{1.0, 0.0}, {0.0, 0.0}};
  auto ev = eigenvalues(radialHessian(z, 1.0, -2.0)).values;
  CHECK(ev[0] == Approx(-1.0));
  CHECK(ev[1] == Approx(1.0));
}

TEST_CASE("non-hermitian input is rejected", "[hermitian]") {
  CHECK_THROWS_AS(HermitianMatrix(2, {Complex(1), Complex(2), Complex(3), Complex(1)}),
                  InvalidInput);
  CHECK_THROWS_AS(HermitianMatrix(2, {Complex(0, 1), Complex(0), Complex(0), Complex(1)}),
                  InvalidInput);  // imaginary diagonal
}

TEST_CASE("sigma_k on a known spectrum", "[hermitian]") {
  HermitianMatrix d(3);
  d.set(0, 0, 1.0);
  d.set(1, 1, 2.0);
  d.set(2, 2, 3.0);
  CHECK(sigmaK(d, 1) == Approx(6.0));
  CHECK(sigmaK(d, 2) == Approx(11.0));
  CHECK(sigmaK(d, 3) == Approx(6.0));
  CHECK_THROWS_AS(sigmaK(d, 0), InvalidInput);
  CHECK_THROWS_AS(sigmaK(d, 4), InvalidInput);
}

TEST_CASE("sigma_k vanishes at the critical power", "[hermitian]") {
  // Spectrum of -t^{-s} has sigma_k = 0 exactly at s = (n-k)/k.
  const int n = 3, k = 2;
  const double s = double(n - k) / k;
  const std::vector<Complex> z{{0.2, -0.3}, {0.6, 0.1}, {-0.4, 0.5}};
  double t = 0.0;
  for (auto& v : z) t += std::norm(v);
  const double gp = s * std::pow(t, -s - 1.0);
  const double gpp = -s * (s + 1.0) * std::pow(t, -s - 2.0);
  auto h = radialHessian(z, gp, gpp);
  CHECK(sigmaK(h, k) == Approx(0.0).margin(1e-10 * gp * gp));
  CHECK(sigmaK(h, 1) > 0.0);
}

TEST_CASE("mixed discriminant basic identities", "[hermitian]") {
  const int n = 3;
  auto a = randomHermitian(n, 21u);
  auto b = randomHermitian(n, 22u);
  auto c = randomHermitian(n, 23u);
  auto id = HermitianMatrix::identity(n);

  // D(A,...,A) = det A = product of eigenvalues.
  double det = 1.0;
  for (double v : eigenvalues(a).values) det *= v;
  CHECK(mixedDiscriminant({a, a, a}) == Approx(det).margin(1e-11));

  CHECK(mixedDiscriminant({id, id, id}) == Approx(1.0));
  CHECK(mixedDiscriminant({a, id, id}) == Approx(a.trace() / n).margin(1e-12));

  // Symmetry in the arguments.
  const double dabc = mixedDiscriminant({a, b, c});
  CHECK(mixedDiscriminant({b, c, a}) == Approx(dabc).margin(1e-12));
  CHECK(mixedDiscriminant({c, a, b}) == Approx(dabc).margin(1e-12));

  // Linearity in the first slot.
  auto combo = 2.0 * a + (-0.5) * b;
  CHECK(mixedDiscriminant({combo, b, c}) ==
        Approx(2.0 * dabc - 0.5 * mixedDiscriminant({b, b, c})).margin(1e-11));
}

TEST_CASE("mixed discriminant with multiplicities", "[hermitian]") {
  const int n = 4;
  auto a = randomHermitian(n, 31u);
  auto b = randomHermitian(n, 32u);
  auto id = HermitianMatrix::identity(n);

  // Fast paths agree with the subset polarization.
  CHECK(mixedDiscriminantPowers({{a, 1}}, n - 1) ==
        Approx(mixedDiscriminant({a, id, id, id})).margin(1e-12));
  CHECK(mixedDiscriminantPowers({{a, 1}, {b, 1}}, n - 2) ==
        Approx(mixedDiscriminant({a, b, id, id})).margin(1e-12));
  CHECK(mixedDiscriminantPowers({{a, 2}}, n - 2) ==
        Approx(mixedDiscriminant({a, a, id, id})).margin(1e-12));
  CHECK(mixedDiscriminantPowers({{a, 2}, {b, 2}}, 0) ==
        Approx(mixedDiscriminant({a, a, b, b})).margin(1e-11));
  CHECK(mixedDiscriminantPowers({{a, 3}, {b, 1}}, 0) ==
        Approx(mixedDiscriminant({a, a, a, b})).margin(1e-11));

  // D(A x k, I x (n-k)) = sigma_k(A) / binom(n,k).
  const double binom[5] = {1, 4, 6, 4, 1};
  for (int k = 1; k <= n; ++k)
    CHECK(mixedDiscriminantPowers({{a, k}}, n - k) ==
          Approx(sigmaK(a, k) / binom[k]).margin(1e-11));

  CHECK(mixedDiscriminantPowers({}, n) == Approx(1.0));
  CHECK_THROWS_AS(mixedDiscriminantPowers({{a, 2}}, n - 1), InvalidInput);
}

TEST_CASE("determinant edge cases", "[hermitian]") {
  // Singular: rank one.
  std::vector<Complex> m{Complex(1), Complex(2), Complex(2), Complex(4)};
  CHECK(std::abs(determinant(m, 2)) == Approx(0.0).margin(1e-14));

  std::vector<Complex> c{Complex(0, 1), Complex(0), Complex(0), Complex(0, 1)};
  auto d = determinant(c, 2);
  CHECK(d.real() == Approx(-1.0));
  CHECK(d.imag() == Approx(0.0).margin(1e-14));
}
