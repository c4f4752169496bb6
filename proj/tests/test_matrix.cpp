#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace monrank;

TEST(RealMatrix, ShapeAndAccess) {
  auto a = RealMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a.cols(), 3u);
  EXPECT_EQ(a(1, 2), 6);
  EXPECT_EQ(a.transpose()(2, 1), 6);
  EXPECT_EQ(a.column(1), (std::vector<double>{2, 5}));
  EXPECT_THROW(RealMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_THROW(RealMatrix(1, 1, std::vector<double>{NAN}), DomainError);
}

TEST(RealMatrix, Multiply) {
  auto a = RealMatrix::from_rows({{1, 2}, {3, 4}});
  auto b = RealMatrix::from_rows({{0, 1}, {1, 0}});
  EXPECT_EQ(multiply(a, b), RealMatrix::from_rows({{2, 1}, {4, 3}}));
  EXPECT_EQ(multiply(a, RealMatrix::identity(2)), a);
  EXPECT_THROW(multiply(a, RealMatrix(3, 1)), DimensionError);
}

TEST(Permutation, ParseAndPrint) {
  auto p = Permutation::parse("3214");
  EXPECT_EQ(p.order(), (std::vector<std::size_t>{2, 1, 0, 3}));
  EXPECT_EQ(p.to_string(), "3214");
  EXPECT_EQ(Permutation::parse("3 2 1 4"), p);
  EXPECT_EQ(p.reversed().to_string(), "4123");
  EXPECT_EQ(p.positions(), (std::vector<std::size_t>{2, 1, 0, 3}));
  EXPECT_THROW(Permutation::parse("3314"), FormatError);
  EXPECT_THROW(Permutation::parse("30"), FormatError);
  auto big = Permutation::parse("10 9 8 7 6 5 4 3 2 1");
  EXPECT_EQ(big.to_string(), "10 9 8 7 6 5 4 3 2 1");
}

TEST(Genericity, ColumnPermutationSortsRows) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = oracle::random_matrix(rng, 6, 4);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      auto p = column_permutation(a, j);
      for (std::size_t r = 0; r + 1 < p.size(); ++r) ASSERT_LT(a(p[r], j), a(p[r + 1], j));
    }
  }
}

TEST(Genericity, TiesAreNamed) {
  auto a = RealMatrix::from_rows({{1, 2}, {1, 3}, {4, 3}});
  auto report = check_generic(a);
  ASSERT_EQ(report.ties.size(), 2u);
  EXPECT_EQ(report.ties[0].column, 0u);
  EXPECT_EQ(report.ties[0].row_a, 0u);
  EXPECT_EQ(report.ties[0].row_b, 1u);
  EXPECT_EQ(report.ties[1].column, 1u);
  try {
    require_generic(a);
    FAIL() << "expected GenericityError";
  } catch (const GenericityError& e) {
    EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("{1,2}"), std::string::npos);
  }
}

TEST(Genericity, PerturbationKeepsStrictOrder) {
  auto a = RealMatrix::from_rows({{1, 2}, {1, 3}, {4, 3}, {0, 2}});
  auto b = perturb_ties(a);
  EXPECT_TRUE(check_generic(b).generic());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t x = 0; x < a.rows(); ++x)
      for (std::size_t y = 0; y < a.rows(); ++y)
        if (a(x, j) < a(y, j)) {
          EXPECT_LT(b(x, j), b(y, j));
        }
}

TEST(MatrixIo, ParsesHeaderAndCrlf) {
  auto a = parse_matrix("a,b\r\n1, 2\r\n\r\n-3.5,+4e1\r\n");
  EXPECT_EQ(a, RealMatrix::from_rows({{1, 2}, {-3.5, 40}}));
  auto b = parse_matrix("1,2\n3,4\n");
  EXPECT_EQ(b.rows(), 2u);
}

TEST(MatrixIo, ReportsLineAndColumn) {
  try {
    parse_matrix("1,2\n3,x\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, column 2"), std::string::npos);
  }
  EXPECT_THROW(parse_matrix("1,2\n3\n"), FormatError);
  EXPECT_THROW(parse_matrix(""), FormatError);
  EXPECT_THROW(parse_matrix("1,inf\n"), FormatError);
}

TEST(MatrixIo, CsvRoundTripIsExact) {
  std::mt19937_64 rng(9);
  auto a = oracle::random_matrix(rng, 5, 4);
  std::ostringstream out;
  write_matrix_csv(out, a);
  EXPECT_EQ(parse_matrix(out.str()), a);
}
