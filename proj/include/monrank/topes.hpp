#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monrank/matrix.hpp"
#include "monrank/sign_vector.hpp"

namespace monrank {

/// sigma_j(theta): sign(a_ij - theta) over the rows of column j.
/// Throws GenericityError if theta equals an entry of the column.
inline SignVector threshold_vector(const RealMatrix& a, std::size_t j, double theta) {
  if (j >= a.cols()) throw IndexError("column " + std::to_string(j) + " out of range");
  SignVector v(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double d = a(i, j) - theta;
    if (d == 0) throw GenericityError("threshold equals entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    v.set(i, d > 0 ? Sign::Plus : Sign::Minus);
  }
  return v;
}

/// Sign vectors of every threshold of every column, with their negations.
/// A threshold strictly between the r-th and (r+1)-th smallest entries of a
/// column (or below / above all of them) gives minus on exactly the r
/// smallest rows, so the vectors are built from ranks and never from
/// floating-point midpoints.
inline SignVectorSet threshold_topes(const RealMatrix& a) {
  if (a.rows() == 0) throw DimensionError("matrix has no rows");
  const auto perms = column_permutations(a);
  const std::size_t m = a.rows();
  std::vector<SignVector> out;
  out.reserve(2 * a.cols() * (m + 1));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto& pi = perms[j];
    SignVector v = SignVector::all(m, Sign::Plus);
    for (std::size_t r = 0; r <= m; ++r) {
      if (r > 0) v.set(pi[r - 1], Sign::Minus);
      out.push_back(v);
      out.push_back(-v);
    }
  }
  SignVectorSet s(m, std::move(out));
  s.flag_negation_closed();
  return s;
}

/// sigma_ik: sign(a_ij - a_kj) over the columns.
inline SignVector difference_vector(const RealMatrix& a, std::size_t i, std::size_t k) {
  if (i >= a.rows() || k >= a.rows()) throw IndexError("row index out of range");
  SignVector v(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double d = a(i, j) - a(k, j);
    if (d == 0) {
      throw GenericityError("column " + std::to_string(j + 1) + " has tied entries in rows {" + std::to_string(std::min(i, k) + 1) +
                            "," + std::to_string(std::max(i, k) + 1) + "}");
    }
    v.set(j, d > 0 ? Sign::Plus : Sign::Minus);
  }
  return v;
}

/// {sigma_ik : i != k}. Empty (over ground size n) when A has a single row.
inline SignVectorSet difference_topes(const RealMatrix& a) {
  std::vector<SignVector> out;
  out.reserve(a.rows() * (a.rows() - (a.rows() ? 1 : 0)));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = i + 1; k < a.rows(); ++k) {
      auto v = difference_vector(a, i, k);
      out.push_back(-v);
      out.push_back(std::move(v));
    }
  SignVectorSet s(a.cols(), std::move(out));
  s.flag_negation_closed();
  return s;
}

/// Rebuilds column orders from the difference topes: row i precedes row k in
/// column j when some sigma_ik is negative at j. Needs the row count since
/// the tope set does not carry row labels.
inline std::vector<Permutation> permutations_from_differences(const RealMatrix& a) {
  std::vector<Permutation> out;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<std::size_t> below(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.rows(); ++k)
        if (i != k && difference_vector(a, i, k)[j] == Sign::Plus) ++below[i];
    std::vector<std::size_t> order(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) order[below[i]] = i;
    out.emplace_back(std::move(order));
  }
  return out;
}

}  // namespace monrank
