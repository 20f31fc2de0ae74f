#ifndef MSHLAB_HERMITIAN_HPP
#define MSHLAB_HERMITIAN_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mshlab/errors.hpp"

namespace mshlab {

using Complex = std::complex<double>;

// Dense Hermitian matrix, row-major. Construction from raw entries
// symmetrizes (A + A*)/2 and rejects inputs whose asymmetry exceeds
// 1e-12 relative to the largest entry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim) {
    if (dim < 1) throw InvalidInput("matrix dimension must be positive");
  }

  HermitianMatrix(int dim, const std::vector<Complex>& entries) : HermitianMatrix(dim) {
    if (entries.size() != e_.size())
      throw InvalidInput("entry count does not match dimension");
    double scale = 0.0;
    for (const auto& v : entries) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        const Complex a = entries[idx(j, k)];
        const Complex b = std::conj(entries[idx(k, j)]);
        worst = std::max(worst, std::abs(a - b));
        e_[idx(j, k)] = 0.5 * (a + b);
      }
    if (worst > 1e-12 * std::max(scale, 1e-300) && worst > 1e-300)
      throw InvalidInput("matrix is not Hermitian: asymmetry " + std::to_string(worst));
  }

  static HermitianMatrix identity(int dim) {
    HermitianMatrix h(dim);
    for (int j = 0; j < dim; ++j) h.set(j, j, 1.0);
    return h;
  }

  int dim() const { return dim_; }
  Complex at(int j, int k) const { return e_[idx(j, k)]; }
  // Sets both (j,k) and its mirror so the matrix stays Hermitian.
  void set(int j, int k, Complex v) {
    e_[idx(j, k)] = v;
    e_[idx(k, j)] = std::conj(v);
  }

  double trace() const {
    double t = 0.0;
    for (int j = 0; j < dim_; ++j) t += e_[idx(j, j)].real();
    return t;
  }

  double frobeniusNorm() const {
    double s = 0.0;
    for (const auto& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  HermitianMatrix& operator*=(double c) {
    for (auto& v : e_) v *= c;
    return *this;
  }
  friend HermitianMatrix operator*(double c, HermitianMatrix h) {
    h *= c;
    return h;
  }
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    a += b;
    return a;
  }

 private:
  size_t idx(int j, int k) const { return static_cast<size_t>(j) * dim_ + k; }
  int dim_;
  std::vector<Complex> e_;
};

// Real eigenvalues sorted ascending.
struct Spectrum {
  std::vector<double> values;
};

namespace detail {

// One complex Jacobi rotation zeroing A_pq, p < q. The 2x2 pivot block
// [[a, g],[conj(g), b]] is diagonalized by the unitary
// V = [[c, -s u],[s conj(u), c]] with u = g/|g| and tan(theta) chosen as the
// smaller root of t^2 - ((b-a)/|g|) t - 1 = 0.
inline void jacobiRotate(std::vector<Complex>& a, int dim, int p, int q) {
  auto idx = [dim](int j, int k) { return static_cast<size_t>(j) * dim + k; };
  const Complex g = a[idx(p, q)];
  const double r = std::abs(g);
  if (r == 0.0) return;
  const Complex u = g / r;
  const double app = a[idx(p, p)].real();
  const double aqq = a[idx(q, q)].real();
  const double tau = (aqq - app) / (2.0 * r);
  double t;
  if (tau == 0.0)
    t = 1.0;
  else if (tau > 0.0)
    t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const double newApp = app * c * c + 2.0 * r * c * s + aqq * s * s;
  const double newAqq = app * s * s - 2.0 * r * c * s + aqq * c * c;
  a[idx(p, p)] = newApp;
  a[idx(q, q)] = newAqq;
  a[idx(p, q)] = 0.0;
  a[idx(q, p)] = 0.0;
  for (int j = 0; j < dim; ++j) {
    if (j == p || j == q) continue;
    const Complex ajp = a[idx(j, p)];
    const Complex ajq = a[idx(j, q)];
    const Complex njp = c * ajp + s * std::conj(u) * ajq;
    const Complex njq = -s * u * ajp + c * ajq;
    a[idx(j, p)] = njp;
    a[idx(p, j)] = std::conj(njp);
    a[idx(j, q)] = njq;
    a[idx(q, j)] = std::conj(njq);
  }
}

}  // namespace detail

// Cyclic Jacobi iteration: row-major sweeps over the upper triangle, rotating
// every pivot above the running threshold, until the largest off-diagonal
// magnitude drops below 1e-13 times the largest diagonal magnitude.
inline Spectrum eigenvalues(const HermitianMatrix& h) {
  const int dim = h.dim();
  std::vector<Complex> a(static_cast<size_t>(dim) * dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) a[static_cast<size_t>(j) * dim + k] = h.at(j, k);

  auto idx = [dim](int j, int k) { return static_cast<size_t>(j) * dim + k; };
  const int maxSweeps = 100;
  for (int sweep = 0; sweep < maxSweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int j = 0; j < dim; ++j) {
      diag = std::max(diag, std::abs(a[idx(j, j)]));
      for (int k = j + 1; k < dim; ++k) off = std::max(off, std::abs(a[idx(j, k)]));
    }
    if (off <= 1e-13 * std::max(diag, 1e-300)) break;
    for (int p = 0; p < dim - 1; ++p)
      for (int q = p + 1; q < dim; ++q) detail::jacobiRotate(a, dim, p, q);
  }

  Spectrum s;
  s.values.resize(dim);
  for (int j = 0; j < dim; ++j) s.values[j] = a[idx(j, j)].real();
  std::sort(s.values.begin(), s.values.end());
  return s;
}

// Elementary symmetric polynomial e_k of the given values, via the stable
// coefficient recurrence of prod (x + lambda_i).
inline double elementarySymmetric(const std::vector<double>& values, int k) {
  const int n = static_cast<int>(values.size());
  if (k < 0 || k > n) throw InvalidInput("elementary symmetric index out of range");
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += values[i] * e[j - 1];
  return e[k];
}

// sigma_k(H) = e_k of the eigenvalue spectrum, 1 <= k <= dim.
inline double sigmaK(const HermitianMatrix& h, int k) {
  if (k < 1 || k > h.dim()) throw InvalidInput("sigma_k order must satisfy 1 <= k <= dim");
  return elementarySymmetric(eigenvalues(h).values, k);
}

// Determinant of a general complex square matrix by LU with partial pivoting.
inline Complex determinant(std::vector<Complex> a, int dim) {
  Complex det = 1.0;
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    double best = std::abs(a[static_cast<size_t>(col) * dim + col]);
    for (int j = col + 1; j < dim; ++j) {
      const double v = std::abs(a[static_cast<size_t>(j) * dim + col]);
      if (v > best) {
        best = v;
        piv = j;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int k = 0; k < dim; ++k)
        std::swap(a[static_cast<size_t>(piv) * dim + k], a[static_cast<size_t>(col) * dim + k]);
      det = -det;
    }
    const Complex d = a[static_cast<size_t>(col) * dim + col];
    det *= d;
    for (int j = col + 1; j < dim; ++j) {
      const Complex f = a[static_cast<size_t>(j) * dim + col] / d;
      if (f == Complex(0.0)) continue;
      for (int k = col; k < dim; ++k)
        a[static_cast<size_t>(j) * dim + k] -= f * a[static_cast<size_t>(col) * dim + k];
    }
  }
  return det;
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
  return b;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

inline double traceProduct(const HermitianMatrix& a, const HermitianMatrix& b) {
  double t = 0.0;
  for (int j = 0; j < a.dim(); ++j)
    for (int k = 0; k < a.dim(); ++k) t += (a.at(j, k) * b.at(k, j)).real();
  return t;
}

}  // namespace detail

// Mixed discriminant D(A_1,...,A_n) of exactly n Hermitian n x n matrices,
// normalized so D(A,...,A) = det A. Computed by polarization:
//   D = (1/n!) sum_{S subset [n]} (-1)^{n-|S|} det( sum_{i in S} A_i ).
inline double mixedDiscriminant(const std::vector<HermitianMatrix>& mats) {
  const int n = static_cast<int>(mats.size());
  if (n == 0) throw InvalidInput("mixed discriminant needs at least one matrix");
  for (const auto& m : mats)
    if (m.dim() != n)
      throw InvalidInput("mixed discriminant requires exactly n matrices of dimension n");
  if (n > 20) throw InvalidInput("mixed discriminant dimension too large");

  double total = 0.0;
  const std::uint32_t full = 1u << n;
  std::vector<Complex> sum(static_cast<size_t>(n) * n);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::fill(sum.begin(), sum.end(), Complex(0.0));
    int bits = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        ++bits;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            sum[static_cast<size_t>(j) * n + k] += mats[i].at(j, k);
      }
    const double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
    total += sign * determinant(sum, n).real();
  }
  return total / detail::factorial(n);
}

// Mixed discriminant with multiplicities: D(A_1 x k_1, ..., A_l x k_l, I x kI)
// where sum k_i + kI = n. Collapses the polarization sum over identical
// copies, so the cost is prod (k_i + 1) determinants instead of 2^n.
// Fast closed forms handle q = sum k_i <= 2.
inline double mixedDiscriminantPowers(const std::vector<std::pair<HermitianMatrix, int>>& factors,
                                      int identityCount) {
  int q = 0;
  int dim = identityCount > 0 ? 0 : -1;
  for (const auto& [mat, k] : factors) {
    if (k < 0) throw InvalidInput("negative multiplicity");
    q += k;
    dim = mat.dim();
  }
  if (dim <= 0) {
    if (identityCount <= 0) throw InvalidInput("empty mixed discriminant");
    return 1.0;  // D(I,...,I)
  }
  const int n = dim;
  if (q + identityCount != n)
    throw InvalidInput("multiplicities plus identity slots must equal the dimension");

  if (q == 0) return 1.0;
  if (q == 1) {
    for (const auto& [mat, k] : factors)
      if (k == 1) return mat.trace() / n;
  }
  if (q == 2 && n >= 2) {
    const HermitianMatrix* a = nullptr;
    const HermitianMatrix* b = nullptr;
    for (const auto& [mat, k] : factors) {
      if (k == 0) continue;
      if (k == 2) { a = &mat; b = &mat; }
      if (k == 1) (a ? b : a) = &mat;
    }
    return (a->trace() * b->trace() - detail::traceProduct(*a, *b)) / (double(n) * (n - 1));
  }

  // General multiplicity-collapsed polarization. Each factor is normalized
  // to unit Frobenius norm first (exact by multilinearity): otherwise the
  // polarization determinants live on the scale ||A||^n while the result can
  // be orders of magnitude smaller, and the cancellation error explodes.
  std::vector<int> caps;
  std::vector<HermitianMatrix> mats;
  double rescale = 1.0;
  for (const auto& [mat, k] : factors)
    if (k > 0) {
      const double s = mat.frobeniusNorm();
      if (s == 0.0) return 0.0;  // a zero slot annihilates the discriminant
      caps.push_back(k);
      mats.push_back((1.0 / s) * mat);
      for (int c = 0; c < k; ++c) rescale *= s;
    }
  caps.push_back(identityCount);
  const int slots = static_cast<int>(caps.size());

  double total = 0.0;
  std::vector<int> j(slots, 0);
  std::vector<Complex> sum(static_cast<size_t>(n) * n);
  while (true) {
    int bits = 0;
    double comb = 1.0;
    for (int i = 0; i < slots; ++i) {
      bits += j[i];
      comb *= detail::binomial(caps[i], j[i]);
    }
    if (bits > 0) {
      std::fill(sum.begin(), sum.end(), Complex(0.0));
      for (int i = 0; i + 1 < slots; ++i)
        if (j[i] > 0)
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
              sum[static_cast<size_t>(r) * n + c] += double(j[i]) * mats[i].at(r, c);
      if (j[slots - 1] > 0)
        for (int r = 0; r < n; ++r) sum[static_cast<size_t>(r) * n + r] += double(j[slots - 1]);
      const double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
      total += sign * comb * determinant(sum, n).real();
    }
    int carry = 0;
    while (carry < slots) {
      if (++j[carry] <= caps[carry]) break;
      j[carry] = 0;
      ++carry;
    }
    if (carry == slots) break;
  }
  return total / detail::factorial(n) * rescale;
}

}  // namespace mshlab

#endif
