#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "monrank/error.hpp"

namespace monrank {

struct LpResult {
  enum class Status { Optimal, Unbounded } status = Status::Optimal;
  double value = 0.0;
  std::vector<double> x;
};

/// maximize c.x subject to A x <= b, x >= 0, for b >= 0 (so x = 0 is a
/// feasible starting vertex). Dense tableau with Bland's rule.
inline LpResult simplex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                            const std::vector<double>& c, double eps = 1e-12) {
  const std::size_t rows = a.size();
  const std::size_t vars = c.size();
  if (b.size() != rows) throw DimensionError("constraint count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (a[r].size() != vars) throw DimensionError("constraint row width mismatch");
    if (b[r] < 0) throw DomainError("right-hand side must be nonnegative");
  }
  const std::size_t width = vars + rows + 1;
  std::vector<double> t((rows + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t v = 0; v < vars; ++v) at(r, v) = a[r][v];
    at(r, vars + r) = 1.0;
    at(r, width - 1) = b[r];
    basis[r] = vars + r;
  }
  for (std::size_t v = 0; v < vars; ++v) at(rows, v) = -c[v];

  LpResult result;
  while (true) {
    std::size_t enter = width;
    for (std::size_t col = 0; col + 1 < width; ++col) {
      if (at(rows, col) < -eps) {
        enter = col;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (at(r, enter) > eps) {
        const double ratio = at(r, width - 1) / at(r, enter);
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) {
      result.status = LpResult::Status::Unbounded;
      result.value = std::numeric_limits<double>::infinity();
      return result;
    }
    const double pivot = at(leave, enter);
    for (std::size_t col = 0; col < width; ++col) at(leave, col) /= pivot;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0) continue;
      for (std::size_t col = 0; col < width; ++col) at(r, col) -= f * at(leave, col);
    }
    basis[leave] = enter;
  }
  result.value = at(rows, width - 1);
  result.x.assign(vars, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < vars) result.x[basis[r]] = at(r, width - 1);
  return result;
}

}  // namespace monrank
