#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <new>
#include <numeric>
#include <string>
#include <vector>

#include "monrank/error.hpp"
#include "monrank/matrix.hpp"
#include "monrank/sign_vector.hpp"

namespace monrank {

/// Matrix with every entry exactly +1 or -1.
class SignMatrix {
 public:
  SignMatrix() = default;
  explicit SignMatrix(RealMatrix values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.rows(); ++i)
      for (std::size_t j = 0; j < values_.cols(); ++j) {
        const double v = values_(i, j);
        if (v != 1.0 && v != -1.0) {
          throw DomainError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not +1 or -1");
        }
      }
  }

  /// Rows are the given zero-free sign vectors.
  static SignMatrix from_rows(const SignVectorSet& s) {
    RealMatrix m(s.size(), s.ground_size());
    for (std::size_t r = 0; r < s.size(); ++r)
      for (std::size_t c = 0; c < s.ground_size(); ++c) {
        const Sign v = s[r][c];
        if (v == Sign::Zero) throw DomainError("sign vector " + s[r].to_string() + " has a zero entry");
        m(r, c) = v == Sign::Plus ? 1.0 : -1.0;
      }
    return SignMatrix(std::move(m));
  }

  /// Columns are the given zero-free sign vectors.
  static SignMatrix from_columns(const SignVectorSet& s) { return SignMatrix(from_rows(s).values_.transpose()); }

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const RealMatrix& values() const { return values_; }

  SignVector row(std::size_t i) const {
    SignVector v(cols());
    for (std::size_t j = 0; j < cols(); ++j) v.set(j, values_(i, j) > 0 ? Sign::Plus : Sign::Minus);
    return v;
  }

 private:
  RealMatrix values_;
};

namespace detail {

// Gram matrix of the smaller side: M^T M if cols <= rows, else M M^T.
inline RealMatrix small_gram(const RealMatrix& m) {
  const bool by_cols = m.cols() <= m.rows();
  const std::size_t k = by_cols ? m.cols() : m.rows();
  const std::size_t len = by_cols ? m.rows() : m.cols();
  RealMatrix g(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      double s = 0;
      for (std::size_t t = 0; t < len; ++t) s += by_cols ? m(t, a) * m(t, b) : m(a, t) * m(b, t);
      g(a, b) = g(b, a) = s;
    }
  return g;
}

// Deterministic pseudo-random vector in (-1, 1).
inline std::vector<double> lcg_vector(std::size_t k, std::uint64_t seed) {
  std::vector<double> v(k);
  std::uint64_t x = seed;
  for (auto& e : v) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    e = static_cast<double>(x >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
  }
  return v;
}

inline double normalize(std::vector<double>& v) {
  double n = 0;
  for (double e : v) n += e * e;
  n = std::sqrt(n);
  if (n > 0)
    for (double& e : v) e /= n;
  return n;
}

inline void sym_multiply(const RealMatrix& g, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t k = g.rows();
  for (std::size_t a = 0; a < k; ++a) {
    double s = 0;
    for (std::size_t b = 0; b < k; ++b) s += g(a, b) * x[b];
    y[a] = s;
  }
}

}  // namespace detail

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration from `v` (updated in place to the final iterate). Stops when
/// successive Rayleigh quotients agree to `rel_tol`.
inline double power_iteration(const RealMatrix& g, std::vector<double>& v, double rel_tol = 1e-12,
                              std::size_t max_iter = 100000) {
  const std::size_t k = g.rows();
  if (k == 0) return 0.0;
  if (detail::normalize(v) == 0) return 0.0;
  std::vector<double> w(k);
  double prev = -1.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    detail::sym_multiply(g, v, w);
    double rq = 0;
    for (std::size_t a = 0; a < k; ++a) rq += v[a] * w[a];
    if (detail::normalize(w) == 0) return 0.0;
    v.swap(w);
    if (prev >= 0 && std::abs(rq - prev) <= rel_tol * std::max(std::abs(rq), 1e-300)) return rq;
    prev = rq;
  }
  return prev;
}

/// Largest eigenvalue of a symmetric matrix: Householder reduction to
/// tridiagonal form, then Sturm-sequence bisection.
inline double symmetric_max_eigenvalue(RealMatrix g) {
  const std::size_t k = g.rows();
  if (k == 0) return 0.0;
  std::vector<double> u(k), p(k);
  for (std::size_t c = 0; c + 2 < k; ++c) {
    double alpha = 0;
    for (std::size_t r = c + 1; r < k; ++r) alpha += g(r, c) * g(r, c);
    alpha = std::sqrt(alpha);
    if (alpha == 0) continue;
    if (g(c + 1, c) > 0) alpha = -alpha;
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t r = c + 1; r < k; ++r) u[r] = g(r, c);
    u[c + 1] -= alpha;
    double h = 0;
    for (std::size_t r = c + 1; r < k; ++r) h += u[r] * u[r];
    if (h == 0) continue;
    // g <- (I - 2uu'/h) g (I - 2uu'/h)
    for (std::size_t r = 0; r < k; ++r) {
      double s = 0;
      for (std::size_t q = c + 1; q < k; ++q) s += g(r, q) * u[q];
      p[r] = 2 * s / h;
    }
    double up = 0;
    for (std::size_t r = c + 1; r < k; ++r) up += u[r] * p[r];
    const double kf = up / h;
    for (std::size_t r = 0; r < k; ++r) p[r] -= kf * u[r];
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t q = 0; q < k; ++q) g(r, q) -= u[r] * p[q] + p[r] * u[q];
  }
  std::vector<double> diag(k), off(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) diag[r] = g(r, r);
  for (std::size_t r = 1; r < k; ++r) off[r] = g(r, r - 1);
  double lo = diag[0], hi = diag[0];
  for (std::size_t r = 0; r < k; ++r) {
    const double rad = std::abs(off[r]) + (r + 1 < k ? std::abs(off[r + 1]) : 0.0);
    lo = std::min(lo, diag[r] - rad);
    hi = std::max(hi, diag[r] + rad);
  }
  // number of eigenvalues strictly below x
  auto below = [&](double x) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t r = 0; r < k; ++r) {
      q = diag[r] - x - (r == 0 ? 0.0 : off[r] * off[r] / q);
      if (q == 0) q = -1e-300;
      if (q < 0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(std::abs(hi), std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below(mid) == k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline constexpr std::size_t kExactNormMaxGram = 512;

/// Largest singular value: exact eigenvalue of the smaller Gram matrix up to
/// kExactNormMaxGram, otherwise power iteration from the normalized all-ones
/// vector and from a fixed pseudo-random start.
inline double spectral_norm(const RealMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const RealMatrix g = detail::small_gram(m);
  const std::size_t k = g.rows();
  if (k <= kExactNormMaxGram) return std::sqrt(std::max(symmetric_max_eigenvalue(g), 0.0));
  std::vector<double> ones(k, 1.0);
  double lambda = power_iteration(g, ones);
  std::vector<double> mixed = detail::lcg_vector(k, 0x9e3779b97f4a7c15ULL);
  lambda = std::max(lambda, power_iteration(g, mixed));
  return std::sqrt(std::max(lambda, 0.0));
}

inline double spectral_norm(const SignMatrix& m) { return spectral_norm(m.values()); }

/// All min(m, n) singular values in descending order, by one-sided Jacobi
/// rotations on the columns (the transpose is used when A is wide).
inline std::vector<double> singular_values(const RealMatrix& a, std::size_t max_sweeps = 60) {
  RealMatrix u = a.cols() > a.rows() ? a.transpose() : a;
  const std::size_t m = u.rows();
  const std::size_t n = u.cols();
  constexpr double eps = 1e-15;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

/// Forster's sign-rank lower bound sqrt(m n) / ||M||.
inline double forster_bound(const SignMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return std::sqrt(static_cast<double>(m.rows()) * static_cast<double>(m.cols())) / spectral_norm(m);
}

inline constexpr std::size_t kMaxHadamardOrder = 20;

/// Sylvester's 2^n x 2^n Hadamard matrix: H_0 = (1), H_{k+1} = [[H, H], [H, -H]].
inline SignMatrix hadamard(std::size_t n) {
  if (n > kMaxHadamardOrder) {
    throw ResourceError("Hadamard order " + std::to_string(n) + " exceeds the limit " + std::to_string(kMaxHadamardOrder));
  }
  const std::size_t size = std::size_t{1} << n;
  try {
    RealMatrix h(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) h(i, j) = (std::popcount(i & j) % 2) ? -1.0 : 1.0;
    return SignMatrix(std::move(h));
  } catch (const std::bad_alloc&) {
    throw ResourceError("not enough memory for a Hadamard matrix of order " + std::to_string(n));
  }
}

/// Rows of H_n and their negations as a sign-vector set over ground size 2^n.
inline SignVectorSet hadamard_rows_pm(std::size_t n) {
  const SignMatrix h = hadamard(n);
  std::vector<SignVector> rows;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    rows.push_back(h.row(i));
    rows.push_back(-h.row(i));
  }
  return SignVectorSet(h.cols(), std::move(rows));
}

/// m x |S| matrix whose j-th column orders the rows with a minus in the j-th
/// vector of S first (ties by row index) and fills in 1..m in that order, so
/// that each member of S is a threshold tope of the result.
inline RealMatrix encode_signs_as_matrix(const SignVectorSet& s) {
  const std::size_t m = s.ground_size();
  RealMatrix a(m, s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const SignVector& x = s[j];
    if (!x.is_zero_free()) throw DomainError("sign vector " + x.to_string() + " has a zero entry");
    double next = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (x[i] == Sign::Minus) a(i, j) = next++;
    for (std::size_t i = 0; i < m; ++i)
      if (x[i] == Sign::Plus) a(i, j) = next++;
  }
  return a;
}

}  // namespace monrank
