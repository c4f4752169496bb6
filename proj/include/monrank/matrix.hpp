#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "monrank/error.hpp"

namespace monrank {

/// Dense row-major m x n matrix of finite reals.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("matrix data size does not match shape");
    for (double v : data_) {
      if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
    }
  }

  static RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(m * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw DimensionError("ragged initializer");
      data.insert(data.end(), r.begin(), r.end());
    }
    return RealMatrix(m, n, std::move(data));
  }

  static RealMatrix identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  RealMatrix transpose() const {
    RealMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// Ordering of [m]: entry r is the (0-based) element placed r-th.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (auto v : order_) {
      if (v >= order_.size() || seen[v]) throw DomainError("not a permutation of [" + std::to_string(order_.size()) + "]");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t m) {
    std::vector<std::size_t> o(m);
    std::iota(o.begin(), o.end(), std::size_t{0});
    return Permutation(std::move(o));
  }

  /// Parses 1-based images, e.g. "3 2 1 4" or "3214" (the latter only for m <= 9).
  static Permutation parse(std::string_view text) {
    std::vector<std::size_t> o;
    const bool spaced = text.find_first_of(" \t,") != std::string_view::npos;
    if (spaced) {
      std::size_t i = 0;
      while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',' || text[i] == '\r')) ++i;
        if (i >= text.size()) break;
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
        if (ec != std::errc() || v == 0) throw FormatError("invalid permutation entry in '" + std::string(text) + "'");
        o.push_back(v - 1);
        i = static_cast<std::size_t>(p - text.data());
      }
    } else {
      for (char c : text) {
        if (c < '1' || c > '9') throw FormatError("invalid permutation entry in '" + std::string(text) + "'");
        o.push_back(static_cast<std::size_t>(c - '1'));
      }
    }
    try {
      return Permutation(std::move(o));
    } catch (const DomainError& e) {
      throw FormatError(std::string(e.what()) + ": '" + std::string(text) + "'");
    }
  }

  std::size_t size() const { return order_.size(); }
  std::size_t operator[](std::size_t r) const { return order_[r]; }
  const std::vector<std::size_t>& order() const { return order_; }

  /// position()[e] is the rank at which element e appears.
  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> pos(order_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) pos[order_[r]] = r;
    return pos;
  }

  Permutation reversed() const { return Permutation(std::vector<std::size_t>(order_.rbegin(), order_.rend())); }

  /// Compact form "3214" when every image is a single digit, else space separated.
  std::string to_string() const {
    std::string s;
    const bool compact = order_.size() <= 9;
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (!compact && r) s += ' ';
      s += std::to_string(order_[r] + 1);
    }
    return s;
  }

  std::string to_spaced_string() const {
    std::string s;
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (r) s += ' ';
      s += std::to_string(order_[r] + 1);
    }
    return s;
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> order_;
};

/// One pair of entries in the same column within tolerance of each other.
struct Tie {
  std::size_t column;
  std::size_t row_a;  // row_a < row_b, 0-based
  std::size_t row_b;
  friend auto operator<=>(const Tie&, const Tie&) = default;
};

struct TieReport {
  std::vector<Tie> ties;
  bool generic() const { return ties.empty(); }
};

/// Every (column, row pair) whose entries differ by at most tol.
inline TieReport check_generic(const RealMatrix& a, double tol = 0.0) {
  TieReport report;
  std::vector<std::size_t> idx(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, j) < a(y, j); });
    for (std::size_t p = 0; p < idx.size(); ++p) {
      for (std::size_t q = p + 1; q < idx.size() && a(idx[q], j) - a(idx[p], j) <= tol; ++q) {
        report.ties.push_back({j, std::min(idx[p], idx[q]), std::max(idx[p], idx[q])});
      }
    }
  }
  std::sort(report.ties.begin(), report.ties.end());
  return report;
}

namespace detail {

inline std::string tie_message(std::size_t column, const std::vector<std::size_t>& rows) {
  std::string msg = "column " + std::to_string(column + 1) + " has tied entries in rows {";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k) msg += ',';
    msg += std::to_string(rows[k] + 1);
  }
  return msg + "}";
}

}  // namespace detail

/// Rows of column j in increasing order of their entries.
inline Permutation column_permutation(const RealMatrix& a, std::size_t j) {
  if (j >= a.cols()) throw IndexError("column " + std::to_string(j) + " out of range");
  std::vector<std::size_t> idx(a.rows());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, j) < a(y, j); });
  for (std::size_t r = 0; r + 1 < idx.size(); ++r) {
    if (a(idx[r], j) == a(idx[r + 1], j)) {
      std::vector<std::size_t> rows;
      for (std::size_t s = 0; s < idx.size(); ++s)
        if (a(idx[s], j) == a(idx[r], j)) rows.push_back(idx[s]);
      std::sort(rows.begin(), rows.end());
      throw GenericityError(detail::tie_message(j, rows));
    }
  }
  return Permutation(std::move(idx));
}

inline std::vector<Permutation> column_permutations(const RealMatrix& a) {
  std::vector<Permutation> out;
  out.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out.push_back(column_permutation(a, j));
  return out;
}

/// Throws GenericityError naming the first tied column if A is not generic.
inline void require_generic(const RealMatrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j) (void)column_permutation(a, j);
}

/// Breaks exact ties deterministically: within a column, tied entries are
/// nudged upward in increasing row order by a step smaller than half of the
/// column's smallest positive gap, so no existing strict order changes.
inline RealMatrix perturb_ties(const RealMatrix& a) {
  RealMatrix out = a;
  std::vector<std::size_t> idx(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, j) < a(y, j); });
    double min_gap = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      scale = std::max(scale, std::abs(a(idx[r], j)));
      if (r + 1 < idx.size()) {
        const double g = a(idx[r + 1], j) - a(idx[r], j);
        if (g > 0) min_gap = std::min(min_gap, g);
      }
    }
    const double room = std::isfinite(min_gap) ? min_gap / 2 : 1e-6 * scale;
    std::size_t r = 0;
    while (r < idx.size()) {
      std::size_t s = r;
      while (s + 1 < idx.size() && a(idx[s + 1], j) == a(idx[r], j)) ++s;
      const std::size_t group = s - r + 1;
      if (group > 1) {
        const double step = room / static_cast<double>(group);
        for (std::size_t k = 0; k < group; ++k) out(idx[r + k], j) = a(idx[r + k], j) + step * static_cast<double>(k);
      }
      r = s + 1;
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

/// Parses comma-separated numeric rows. A first row with no numeric field is
/// taken as a header and skipped; blank lines are ignored; LF or CRLF.
inline RealMatrix parse_matrix(std::istream& in) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first_row = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_commas(line);
    if (first_row) {
      first_row = false;
      double dummy = 0;
      const bool any_numeric =
          std::any_of(fields.begin(), fields.end(), [&](auto f) { return detail::parse_double(f, dummy); });
      if (!any_numeric) continue;
    }
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " fields, found " +
                        std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0;
      if (!detail::parse_double(fields[c], v) || !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                          ": cannot parse '" + std::string(detail::trim(fields[c])) + "' as a finite number");
      }
      data.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("no numeric rows in input");
  return RealMatrix(rows, cols, std::move(data));
}

inline RealMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matrix(in);
}

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline void write_matrix_csv(std::ostream& out, const RealMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

}  // namespace monrank
