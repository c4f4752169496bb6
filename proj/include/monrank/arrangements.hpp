#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monrank/error.hpp"
#include "monrank/matrix.hpp"
#include "monrank/omatroid.hpp"
#include "monrank/parallel.hpp"
#include "monrank/sign_vector.hpp"
#include "monrank/simplex.hpp"

namespace monrank {

using Point = std::vector<double>;

namespace detail {

// Determinant by Gaussian elimination with partial pivoting.
inline double determinant(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Calls f(subset) for every k-subset of [n], subsets as sorted index lists.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Determinant of the (d+1) x (d+1) matrix of homogenized points idx.
inline double homogenized_det(const std::vector<Point>& pts, const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> m;
  for (auto i : idx) {
    Point row = pts[i];
    row.push_back(1.0);
    m.push_back(std::move(row));
  }
  return determinant(std::move(m));
}

}  // namespace detail

inline constexpr double kGeneralPositionTol = 1e-9;
inline constexpr std::size_t kMaxArrangementSize = 20;

/// m points in R^d.
struct PointArrangement {
  std::size_t dimension = 0;
  std::vector<Point> points;
  bool general_position = false;  // verified when set through set_general_position()

  PointArrangement() = default;
  PointArrangement(std::size_t d, std::vector<Point> pts) : dimension(d), points(std::move(pts)) {
    for (const auto& p : points) {
      if (p.size() != dimension) throw DimensionError("point of dimension " + std::to_string(p.size()) + " in R^" + std::to_string(dimension));
      for (double v : p)
        if (!std::isfinite(v)) throw DomainError("point coordinates must be finite");
    }
  }

  /// Rows of a matrix as points.
  static PointArrangement from_matrix(const RealMatrix& m) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Point p(m.cols());
      for (std::size_t j = 0; j < m.cols(); ++j) p[j] = m(i, j);
      pts.push_back(std::move(p));
    }
    return PointArrangement(m.cols(), std::move(pts));
  }

  std::size_t size() const { return points.size(); }

  /// Indices (0-based) of the first d+1 points that are affinely dependent, if any.
  std::optional<std::vector<std::size_t>> first_dependent_subset(double tol = kGeneralPositionTol) const {
    std::optional<std::vector<std::size_t>> bad;
    const std::size_t k = std::min(size(), dimension + 1);
    detail::for_each_subset(size(), k, [&](const std::vector<std::size_t>& idx) {
      if (bad) return;
      double det;
      if (k == dimension + 1) {
        det = detail::homogenized_det(points, idx);
      } else {
        // fewer points than d+1: independent iff the difference vectors have full rank
        std::vector<std::vector<double>> gram(k - 1, std::vector<double>(k - 1));
        for (std::size_t a = 1; a < k; ++a)
          for (std::size_t b = 1; b < k; ++b) {
            double s = 0;
            for (std::size_t c = 0; c < dimension; ++c)
              s += (points[idx[a]][c] - points[idx[0]][c]) * (points[idx[b]][c] - points[idx[0]][c]);
            gram[a - 1][b - 1] = s;
          }
        det = k > 1 ? detail::determinant(gram) : 1.0;
      }
      if (std::abs(det) <= tol) bad = idx;
    });
    return bad;
  }

  void set_general_position() {
    if (auto bad = first_dependent_subset()) {
      std::string msg = "points {";
      for (std::size_t k = 0; k < bad->size(); ++k) msg += (k ? "," : "") + std::to_string((*bad)[k] + 1);
      throw GeneralPositionError(msg + "} are affinely dependent");
    }
    general_position = true;
  }
};

/// n nonzero normal vectors in R^d.
struct HyperplaneArrangement {
  std::size_t dimension = 0;
  std::vector<Point> normals;

  HyperplaneArrangement() = default;
  HyperplaneArrangement(std::size_t d, std::vector<Point> ns) : dimension(d), normals(std::move(ns)) {
    for (const auto& h : normals) {
      if (h.size() != dimension) throw DimensionError("normal of dimension " + std::to_string(h.size()) + " in R^" + std::to_string(dimension));
      bool nonzero = false;
      for (double v : h) {
        if (!std::isfinite(v)) throw DomainError("normal coordinates must be finite");
        nonzero = nonzero || v != 0;
      }
      if (!nonzero) throw DomainError("zero normal vector");
    }
  }

  static HyperplaneArrangement from_matrix(const RealMatrix& m) {
    return HyperplaneArrangement(m.cols(), PointArrangement::from_matrix(m).points);
  }

  std::size_t size() const { return normals.size(); }
};

/// Strictly increasing map applied to one column.
struct MonotoneDistortion {
  enum class Kind { Identity, ExpScale, PowerOdd, PiecewiseLinear };
  Kind kind = Kind::Identity;
  double alpha = 1.0;      // ExpScale: x -> exp(x / alpha)
  int power = 1;           // PowerOdd: x -> x^power
  std::vector<double> xs;  // PiecewiseLinear breakpoints, extended linearly past both ends
  std::vector<double> ys;

  static MonotoneDistortion identity() { return {}; }
  static MonotoneDistortion exp_scale(double alpha) {
    MonotoneDistortion f;
    f.kind = Kind::ExpScale;
    f.alpha = alpha;
    f.validate();
    return f;
  }
  static MonotoneDistortion power_odd(int k) {
    MonotoneDistortion f;
    f.kind = Kind::PowerOdd;
    f.power = k;
    f.validate();
    return f;
  }
  static MonotoneDistortion piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
    MonotoneDistortion f;
    f.kind = Kind::PiecewiseLinear;
    f.xs = std::move(xs);
    f.ys = std::move(ys);
    f.validate();
    return f;
  }

  void validate() const {
    switch (kind) {
      case Kind::Identity:
        return;
      case Kind::ExpScale:
        if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("exp-scale needs alpha > 0");
        return;
      case Kind::PowerOdd:
        if (power < 1 || power % 2 == 0) throw DomainError("power-odd needs an odd exponent >= 1");
        return;
      case Kind::PiecewiseLinear:
        if (xs.size() < 2 || xs.size() != ys.size()) throw DomainError("piecewise-linear needs at least two breakpoints");
        for (std::size_t k = 1; k < xs.size(); ++k)
          if (!(xs[k] > xs[k - 1]) || !(ys[k] > ys[k - 1])) throw DomainError("piecewise-linear breakpoints must strictly increase");
        return;
    }
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Identity:
        return x;
      case Kind::ExpScale:
        return std::exp(x / alpha);
      case Kind::PowerOdd: {
        double r = 1;
        for (int k = 0; k < power; ++k) r *= x;
        return r;
      }
      case Kind::PiecewiseLinear: {
        const std::size_t last = xs.size() - 1;
        std::size_t seg;
        if (x <= xs[0]) {
          seg = 0;
        } else if (x >= xs[last]) {
          seg = last - 1;
        } else {
          seg = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
        }
        const double slope = (ys[seg + 1] - ys[seg]) / (xs[seg + 1] - xs[seg]);
        return ys[seg] + slope * (x - xs[seg]);
      }
    }
    return x;
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::Identity:
        return "identity";
      case Kind::ExpScale:
        return "exp-scale";
      case Kind::PowerOdd:
        return "power-odd";
      case Kind::PiecewiseLinear:
        return "piecewise-linear";
    }
    return "identity";
  }
};

/// A_ij = f_j(p_i . h_j).
inline RealMatrix realize_matrix(const PointArrangement& p, const HyperplaneArrangement& h,
                                 const std::vector<MonotoneDistortion>& f) {
  if (p.dimension != h.dimension) throw DomainError("points live in R^" + std::to_string(p.dimension) + " but normals in R^" + std::to_string(h.dimension));
  if (f.size() != h.size()) throw DomainError("need one distortion per column");
  RealMatrix a(p.size(), h.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) a(i, j) = f[j](detail::dot(p.points[i], h.normals[j]));
  return a;
}

/// Output of random_representation.
struct Representation {
  PointArrangement points;
  HyperplaneArrangement normals;
  std::vector<MonotoneDistortion> distortions;
  RealMatrix matrix;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;
};

/// Which distortion families random_representation draws from.
enum class DistortionChoice { Random, Identity, ExpScale, PowerOdd, PiecewiseLinear };

inline DistortionChoice parse_distortion_choice(const std::string& name) {
  if (name == "random") return DistortionChoice::Random;
  if (name == "identity") return DistortionChoice::Identity;
  if (name == "exp" || name == "exp-scale") return DistortionChoice::ExpScale;
  if (name == "power" || name == "power-odd") return DistortionChoice::PowerOdd;
  if (name == "pwl" || name == "piecewise-linear") return DistortionChoice::PiecewiseLinear;
  throw DomainError("unknown distortion '" + name + "'");
}

namespace detail {

inline MonotoneDistortion random_distortion(std::mt19937_64& rng, DistortionChoice choice, double scale) {
  std::uniform_int_distribution<int> family(0, 3);
  int kind = 0;
  switch (choice) {
    case DistortionChoice::Random:
      kind = family(rng);
      break;
    case DistortionChoice::Identity:
      kind = 0;
      break;
    case DistortionChoice::ExpScale:
      kind = 1;
      break;
    case DistortionChoice::PowerOdd:
      kind = 2;
      break;
    case DistortionChoice::PiecewiseLinear:
      kind = 3;
      break;
  }
  switch (kind) {
    case 1:
      return MonotoneDistortion::exp_scale(std::uniform_real_distribution<double>(2.0, 20.0)(rng));
    case 2: {
      const int powers[] = {1, 3, 5};
      return MonotoneDistortion::power_odd(powers[std::uniform_int_distribution<int>(0, 2)(rng)]);
    }
    case 3: {
      const int k = std::uniform_int_distribution<int>(3, 6)(rng);
      std::uniform_real_distribution<double> where(-3.0 * scale, 3.0 * scale);
      std::uniform_real_distribution<double> slope(0.1, 5.0);
      std::vector<double> xs(static_cast<std::size_t>(k));
      for (auto& x : xs) x = where(rng);
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) xs[i] = xs[i - 1] + 1e-3;
      std::vector<double> ys(xs.size());
      ys[0] = where(rng);
      for (std::size_t i = 1; i < xs.size(); ++i) ys[i] = ys[i - 1] + slope(rng) * (xs[i] - xs[i - 1]);
      return MonotoneDistortion::piecewise_linear(std::move(xs), std::move(ys));
    }
    default:
      return MonotoneDistortion::identity();
  }
}

inline std::vector<Point> normal_points(std::mt19937_64& rng, std::size_t count, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> pts(count, Point(d));
  for (auto& p : pts)
    for (auto& v : p) v = g(rng);
  return pts;
}

inline double min_column_gap(const RealMatrix& a, std::size_t j) {
  auto col = a.column(j);
  std::sort(col.begin(), col.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < col.size(); ++i) gap = std::min(gap, col[i] - col[i - 1]);
  return gap;
}

}  // namespace detail

inline constexpr std::size_t kMaxRepresentationAttempts = 1000;
inline constexpr double kMinInnerProductGap = 1e-6;

/// Random rank-d representation: standard normal points and normals, one
/// random distortion per column, resampled until the inner products are
/// separated by at least kMinInnerProductGap within every column and the
/// distorted matrix keeps the same strict column orders.
inline Representation random_representation(std::size_t m, std::size_t n, std::size_t d, std::uint64_t seed,
                                             DistortionChoice choice = DistortionChoice::Random) {
  if (m < 1 || n < 1 || d < 1) throw DomainError("random representation needs m, n, d >= 1");
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 1; attempt <= kMaxRepresentationAttempts; ++attempt) {
    PointArrangement p(d, detail::normal_points(rng, m, d));
    HyperplaneArrangement h(d, detail::normal_points(rng, n, d));
    std::vector<MonotoneDistortion> f;
    for (std::size_t j = 0; j < n; ++j) f.push_back(detail::random_distortion(rng, choice, std::sqrt(static_cast<double>(d))));
    const RealMatrix b = realize_matrix(p, h, std::vector<MonotoneDistortion>(n));
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) ok = m < 2 || detail::min_column_gap(b, j) > kMinInnerProductGap;
    if (!ok) continue;
    RealMatrix a = realize_matrix(p, h, f);
    if (!check_generic(a).generic()) continue;
    if (column_permutations(a) != column_permutations(b)) continue;
    return {std::move(p), std::move(h), std::move(f), std::move(a), seed, attempt};
  }
  throw DomainError("could not draw a generic representation within " + std::to_string(kMaxRepresentationAttempts) + " attempts");
}

/// Standard normal points in R^d, resampled until every d+1 of them are
/// affinely independent (|det| > kGeneralPositionTol on homogenized minors).
inline PointArrangement random_general_position_points(std::size_t m, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < kMaxRepresentationAttempts; ++attempt) {
    PointArrangement p(d, detail::normal_points(rng, m, d));
    if (!p.first_dependent_subset()) {
      p.general_position = true;
      return p;
    }
  }
  throw DomainError("could not draw points in general position");
}

inline HyperplaneArrangement random_normals(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return HyperplaneArrangement(d, detail::normal_points(rng, n, d));
}

namespace detail {

inline std::string planar_degeneracy(const std::vector<Point>& pts, double rel_tol) {
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (pts[i][0] == pts[j][0] && pts[i][1] == pts[j][1]) {
        return "points " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide";
      }
  std::vector<std::pair<std::size_t, std::size_t>> segs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) segs.emplace_back(i, j);
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (std::size_t t = s + 1; t < segs.size(); ++t) {
      const auto [a, b] = segs[s];
      const auto [c, e] = segs[t];
      const double ux = pts[b][0] - pts[a][0], uy = pts[b][1] - pts[a][1];
      const double vx = pts[e][0] - pts[c][0], vy = pts[e][1] - pts[c][1];
      const double cross = ux * vy - uy * vx;
      if (std::abs(cross) > rel_tol * std::hypot(ux, uy) * std::hypot(vx, vy)) continue;
      std::vector<std::size_t> shared{a, b, c, e};
      std::sort(shared.begin(), shared.end());
      shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
      if (shared.size() == 3) {
        return "points " + std::to_string(shared[0] + 1) + ", " + std::to_string(shared[1] + 1) + ", " +
               std::to_string(shared[2] + 1) + " are collinear";
      }
      return "segments " + std::to_string(a + 1) + "-" + std::to_string(b + 1) + " and " + std::to_string(c + 1) + "-" +
             std::to_string(e + 1) + " are parallel";
    }
  return {};
}

}  // namespace detail

inline constexpr double kParallelTol = 1e-9;

/// Random planar points with no three collinear and no two connecting
/// segments parallel.
inline PointArrangement random_simple_planar_points(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; attempt < kMaxRepresentationAttempts; ++attempt) {
    PointArrangement p(2, detail::normal_points(rng, m, 2));
    if (detail::planar_degeneracy(p.points, 1e-6).empty() && !p.first_dependent_subset()) {
      p.general_position = true;
      return p;
    }
  }
  throw DomainError("could not draw a simple planar configuration");
}

namespace detail {

inline bool lp_margin_positive(const std::vector<std::vector<double>>& rows, std::size_t vars) {
  // rows: constraint coefficients on the free variables; each row reads
  // coeffs . v >= t. Free variables are split into +/- parts bounded by 1.
  const std::size_t total = 2 * vars + 1;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& r : rows) {
    std::vector<double> row(total, 0.0);
    for (std::size_t k = 0; k < vars; ++k) {
      row[k] = -r[k];
      row[vars + k] = r[k];
    }
    row[total - 1] = 1.0;
    a.push_back(std::move(row));
    b.push_back(0.0);
  }
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> row(total, 0.0);
    row[k] = 1.0;
    a.push_back(std::move(row));
    b.push_back(1.0);
  }
  std::vector<double> c(total, 0.0);
  c[total - 1] = 1.0;
  return simplex_max(a, b, c).value > 1e-7;
}

template <typename Feasible>
SignVectorSet enumerate_topes(std::size_t size, unsigned threads, Feasible&& feasible) {
  if (size > kMaxArrangementSize) throw ResourceError("tope enumeration limited to " + std::to_string(kMaxArrangementSize) + " elements");
  if (size == 0) return SignVectorSet(0);
  const std::size_t half = std::size_t{1} << (size - 1);
  std::vector<char> ok(half, 0);
  parallel_for(half, threads, [&](std::size_t code) {
    SignVector s(size);
    s.set(0, Sign::Plus);
    for (std::size_t i = 1; i < size; ++i) s.set(i, ((code >> (i - 1)) & 1u) ? Sign::Minus : Sign::Plus);
    ok[code] = feasible(s);
  });
  std::vector<SignVector> out;
  for (std::size_t code = 0; code < half; ++code) {
    if (!ok[code]) continue;
    SignVector s(size);
    s.set(0, Sign::Plus);
    for (std::size_t i = 1; i < size; ++i) s.set(i, ((code >> (i - 1)) & 1u) ? Sign::Minus : Sign::Plus);
    out.push_back(-s);
    out.push_back(std::move(s));
  }
  SignVectorSet set(size, std::move(out));
  set.flag_negation_closed();
  return set;
}

}  // namespace detail

/// Sign vectors of the bipartitions of P cut out by affine hyperplanes: each
/// candidate is decided by maximizing t subject to s_i (p_i . h - theta) >= t
/// with |h|, |theta| <= 1 componentwise, accepted when t > 1e-7.
inline SignVectorSet point_topes(const PointArrangement& p, unsigned threads = 1) {
  const std::size_t d = p.dimension;
  return detail::enumerate_topes(p.size(), threads, [&](const SignVector& s) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double sg = s[i] == Sign::Plus ? 1.0 : -1.0;
      std::vector<double> r(d + 1);
      for (std::size_t k = 0; k < d; ++k) r[k] = sg * p.points[i][k];
      r[d] = -sg;
      rows.push_back(std::move(r));
    }
    return detail::lp_margin_positive(rows, d + 1);
  });
}

/// Sign vectors of the open cells of the central arrangement with normals H.
inline SignVectorSet hyperplane_topes(const HyperplaneArrangement& h, unsigned threads = 1) {
  const std::size_t d = h.dimension;
  return detail::enumerate_topes(h.size(), threads, [&](const SignVector& s) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double sg = s[i] == Sign::Plus ? 1.0 : -1.0;
      std::vector<double> r(d);
      for (std::size_t k = 0; k < d; ++k) r[k] = sg * h.normals[i][k];
      rows.push_back(std::move(r));
    }
    return detail::lp_margin_positive(rows, d);
  });
}

/// Minimal Radon partitions: for every d+2 points, the signs of the affine
/// dependence (cofactors of the homogenized coordinate matrix), both ways.
inline CircuitCandidateSet point_circuits(const PointArrangement& p) {
  const std::size_t d = p.dimension;
  const std::size_t m = p.size();
  if (m > kMaxArrangementSize) throw ResourceError("point circuits limited to " + std::to_string(kMaxArrangementSize) + " points");
  std::vector<SignVector> out;
  detail::for_each_subset(m, d + 2, [&](const std::vector<std::size_t>& idx) {
    SignVector x(m);
    for (std::size_t drop = 0; drop < idx.size(); ++drop) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (k != drop) rest.push_back(idx[k]);
      const double cof = ((drop % 2) ? -1.0 : 1.0) * detail::homogenized_det(p.points, rest);
      if (std::abs(cof) <= kGeneralPositionTol) {
        std::string msg = "points {";
        for (std::size_t k = 0; k < rest.size(); ++k) msg += (k ? "," : "") + std::to_string(rest[k] + 1);
        throw GeneralPositionError(msg + "} are affinely dependent");
      }
      x.set(idx[drop], cof > 0 ? Sign::Plus : Sign::Minus);
    }
    out.push_back(-x);
    out.push_back(std::move(x));
  });
  SignVectorSet set(m, std::move(out));
  set.flag_negation_closed();
  return CircuitCandidateSet(std::move(set), d + 1);
}

/// Circular sequence of permutations.
class AllowableSequence {
 public:
  AllowableSequence() = default;
  explicit AllowableSequence(std::vector<Permutation> perms) : perms_(std::move(perms)) {
    for (const auto& p : perms_)
      if (!perms_.empty() && p.size() != perms_.front().size()) throw DimensionError("permutations of different lengths");
  }

  std::size_t size() const { return perms_.size(); }
  std::size_t elements() const { return perms_.empty() ? 0 : perms_.front().size(); }
  const std::vector<Permutation>& permutations() const { return perms_; }
  const Permutation& operator[](std::size_t k) const { return perms_[k]; }

  /// Rotation starting at the smallest permutation, oriented so that its
  /// successor is smaller than its predecessor.
  AllowableSequence canonical() const {
    if (perms_.size() < 2) return *this;
    const std::size_t len = perms_.size();
    const std::size_t start = static_cast<std::size_t>(std::min_element(perms_.begin(), perms_.end()) - perms_.begin());
    const auto& next = perms_[(start + 1) % len];
    const auto& prev = perms_[(start + len - 1) % len];
    std::vector<Permutation> out;
    out.reserve(len);
    const bool forward = !(prev < next);
    for (std::size_t k = 0; k < len; ++k) out.push_back(perms_[forward ? (start + k) % len : (start + len - k) % len]);
    return AllowableSequence(std::move(out));
  }

  friend bool operator==(const AllowableSequence& a, const AllowableSequence& b) {
    return a.canonical().perms_ == b.canonical().perms_;
  }

 private:
  std::vector<Permutation> perms_;
};

/// One permutation per line, 1-based images separated by spaces.
inline AllowableSequence read_allowable(std::istream& in) {
  std::vector<Permutation> perms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      perms.push_back(Permutation::parse(line.substr(first)));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (perms.back().size() != perms.front().size()) throw FormatError("line " + std::to_string(lineno) + ": permutation length differs");
  }
  return AllowableSequence(std::move(perms));
}

/// Same format, with commas also accepted as separators ("123,213,231").
inline AllowableSequence parse_allowable(std::string_view text) {
  std::string lines(text);
  std::replace(lines.begin(), lines.end(), ',', '\n');
  std::istringstream in(lines);
  return read_allowable(in);
}

inline void write_allowable(std::ostream& out, const AllowableSequence& s) {
  for (const auto& p : s.permutations()) out << p.to_spaced_string() << '\n';
}

struct ValidationReport {
  bool valid = true;
  bool simple = false;
  int condition = 0;  // 1, 2 or 3 for the first failed condition
  std::size_t position = 0;
  std::string message;
};

namespace detail {

// Blocks [begin, end) whose reversal turns a into b, or nullopt if the step
// is not a reversal of disjoint substrings (or changes nothing).
inline std::optional<std::vector<std::pair<std::size_t, std::size_t>>> reversal_blocks(const Permutation& a, const Permutation& b) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  const std::size_t m = a.size();
  const auto pos = a.positions();
  std::size_t i = 0;
  while (i < m) {
    if (a[i] == b[i]) {
      ++i;
      continue;
    }
    const std::size_t j = pos[b[i]];
    if (j <= i) return std::nullopt;
    for (std::size_t k = 0; k <= j - i; ++k)
      if (b[i + k] != a[j - k]) return std::nullopt;
    blocks.emplace_back(i, j + 1);
    i = j + 1;
  }
  if (blocks.empty()) return std::nullopt;
  return blocks;
}

}  // namespace detail

/// Checks the three conditions on a circular sequence: (1) closure under
/// reversal, (2) each step reverses one or more disjoint substrings,
/// (3) even length with every pair reversed exactly once in each window of
/// half the length, and pi_{k+L/2} the reverse of pi_k. Also reports whether
/// every step is a single adjacent transposition.
inline ValidationReport validate_allowable(const AllowableSequence& s) {
  ValidationReport r;
  auto fail = [&](int cond, std::size_t pos, std::string msg) {
    r.valid = false;
    r.simple = false;
    r.condition = cond;
    r.position = pos;
    r.message = std::move(msg);
    return r;
  };
  const std::size_t len = s.size();
  const std::size_t m = s.elements();
  if (len == 0) return fail(3, 0, "empty sequence");

  std::vector<Permutation> sorted = s.permutations();
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < len; ++k) {
    if (!std::binary_search(sorted.begin(), sorted.end(), s[k].reversed())) {
      return fail(1, k, "reverse of " + s[k].to_string() + " is missing");
    }
  }

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> steps(len);
  bool simple = true;
  for (std::size_t k = 0; k < len; ++k) {
    const auto& a = s[k];
    const auto& b = s[(k + 1) % len];
    auto blocks = detail::reversal_blocks(a, b);
    if (!blocks) return fail(2, k, a.to_string() + " -> " + b.to_string() + " is not a reversal of disjoint substrings");
    simple = simple && blocks->size() == 1 && (*blocks)[0].second - (*blocks)[0].first == 2;
    steps[k] = std::move(*blocks);
  }

  if (len % 2) return fail(3, 0, "odd length " + std::to_string(len));
  const std::size_t half = len / 2;
  // flips[pair][k]: 1 if step k reverses that pair.
  const std::size_t pairs = m * (m - 1) / 2;
  auto pair_id = [m](std::size_t x, std::size_t y) {
    if (x > y) std::swap(x, y);
    return x * m - x * (x + 1) / 2 + (y - x - 1);
  };
  std::vector<std::vector<std::uint32_t>> prefix(pairs, std::vector<std::uint32_t>(2 * len + 1, 0));
  for (std::size_t k = 0; k < 2 * len; ++k) {
    for (std::size_t p = 0; p < pairs; ++p) prefix[p][k + 1] = prefix[p][k];
    const auto& a = s[k % len];
    for (auto [b0, b1] : steps[k % len])
      for (std::size_t x = b0; x < b1; ++x)
        for (std::size_t y = x + 1; y < b1; ++y) ++prefix[pair_id(a[x], a[y])][k + 1];
  }
  for (std::size_t k = 0; k < len; ++k)
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = x + 1; y < m; ++y) {
        const auto& pre = prefix[pair_id(x, y)];
        const auto count = pre[k + half] - pre[k];
        if (count != 1) {
          return fail(3, k, "pair {" + std::to_string(x + 1) + "," + std::to_string(y + 1) + "} reversed " +
                                std::to_string(count) + " times in the half period starting at position " + std::to_string(k + 1));
        }
      }
  for (std::size_t k = 0; k < len; ++k) {
    if (s[(k + half) % len] != s[k].reversed()) {
      return fail(3, k, "position " + std::to_string(k + 1 + half) + " is not the reverse of position " + std::to_string(k + 1));
    }
  }
  r.simple = simple;
  return r;
}

/// m x k matrix whose column j holds 1..m in the order of the j-th permutation.
inline RealMatrix matrix_from_permutations(const std::vector<Permutation>& perms) {
  const std::size_t m = perms.empty() ? 0 : perms.front().size();
  RealMatrix a(m, perms.size());
  for (std::size_t j = 0; j < perms.size(); ++j) {
    if (perms[j].size() != m) throw DimensionError("permutations of different lengths");
    for (std::size_t r = 0; r < m; ++r) a(perms[j][r], j) = static_cast<double>(r + 1);
  }
  return a;
}

/// As matrix_from_permutations, after checking that S is allowable.
inline RealMatrix matrix_from_allowable(const AllowableSequence& s) {
  const auto report = validate_allowable(s);
  if (!report.valid) throw DomainError("not an allowable sequence: " + report.message);
  return matrix_from_permutations(s.permutations());
}

/// Permutations p . h in increasing order as the unit vector h turns once
/// around the circle, one between each pair of consecutive critical
/// directions (those perpendicular to a connecting segment). Returned in
/// canonical form. When require_simple is set, parallel segments and
/// collinear triples are rejected with GeneralPositionError.
inline AllowableSequence sweep_permutations(const PointArrangement& p, bool require_simple = true) {
  if (p.dimension != 2) throw DomainError("sweep permutations need points in the plane");
  const std::size_t m = p.size();
  const std::string degenerate = detail::planar_degeneracy(p.points, kParallelTol);
  if (!degenerate.empty() && (require_simple || degenerate.find("coincide") != std::string::npos)) {
    throw GeneralPositionError(degenerate);
  }
  if (m < 2) return AllowableSequence({Permutation::identity(m)});
  const double two_pi = 2 * std::numbers::pi;
  std::vector<double> angles;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double base = std::atan2(p.points[j][1] - p.points[i][1], p.points[j][0] - p.points[i][0]) + std::numbers::pi / 2;
      for (double a : {base, base + std::numbers::pi}) angles.push_back(std::fmod(std::fmod(a, two_pi) + two_pi, two_pi));
    }
  std::sort(angles.begin(), angles.end());
  std::vector<double> distinct;
  for (double a : angles)
    if (distinct.empty() || a - distinct.back() > 1e-12) distinct.push_back(a);
  if (distinct.size() > 1 && distinct.front() + two_pi - distinct.back() <= 1e-12) distinct.pop_back();

  std::vector<Permutation> perms;
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    const double lo = distinct[k];
    const double hi = k + 1 < distinct.size() ? distinct[k + 1] : distinct[0] + two_pi;
    const double mid = 0.5 * (lo + hi);
    const Point h{std::cos(mid), std::sin(mid)};
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return detail::dot(p.points[a], h) < detail::dot(p.points[b], h); });
    perms.emplace_back(std::move(order));
  }
  return AllowableSequence(std::move(perms)).canonical();
}

}  // namespace monrank
