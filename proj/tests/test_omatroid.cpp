#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace monrank;

namespace {

SignVector sv(std::string_view s) { return SignVector::from_string(s); }

SignVectorSet load_signs(const std::string& name) {
  std::ifstream in(std::string(MONRANK_DATA_DIR) + "/" + name);
  return read_sign_vector_set(in);
}

SignVectorSet a4_thresh() {
  return threshold_topes(RealMatrix::from_rows(
      {{12, 13, 3, 10, 6}, {13, 14, 4, 9, 5}, {3, 4, 15, 11, 1}, {10, 9, 11, 8, 2}, {6, 5, 1, 2, 7}}));
}

// C1-C4 straight from the definitions, on strings.
bool oracle_axioms(const std::set<std::string>& c) {
  for (const auto& x : c) {
    if (x.find_first_not_of('0') == std::string::npos) return false;
    if (!c.count(oracle::negate(x))) return false;
  }
  for (const auto& x : c)
    for (const auto& y : c) {
      if (x == y || x == oracle::negate(y)) continue;
      bool subset = true;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != '0' && y[i] == '0') subset = false;
      if (subset) return false;
    }
  for (const auto& x : c)
    for (const auto& y : c) {
      if (x == oracle::negate(y)) continue;
      for (auto e : oracle::separator(x, y)) {
        bool found = false;
        for (const auto& z : c) {
          bool ok = z[e] == '0';
          for (std::size_t i = 0; i < z.size() && ok; ++i) {
            if (z[i] == '+' && x[i] != '+' && y[i] != '+') ok = false;
            if (z[i] == '-' && x[i] != '-' && y[i] != '-') ok = false;
          }
          if (ok) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
  return true;
}

// Every way of choosing one potential pair per (d+1)-support.
bool oracle_uniform_completion(const SignVectorSet& closed, std::size_t d) {
  const std::size_t n = closed.ground_size();
  auto pc = potential_circuits(closed, d);
  std::map<std::string, std::vector<std::string>> by_support;
  for (const auto& x : pc) {
    auto s = x.to_string();
    std::string key;
    for (char ch : s) key += ch == '0' ? '0' : '1';
    if (s[s.find_first_not_of('0')] == '+') by_support[key].push_back(s);
  }
  std::size_t supports = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    if (static_cast<std::size_t>(std::popcount(mask)) == d + 1) ++supports;
  if (by_support.size() != supports) return false;
  std::vector<std::vector<std::string>> choices;
  for (auto& [k, v] : by_support) choices.push_back(v);
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    std::set<std::string> c;
    for (std::size_t k = 0; k < choices.size(); ++k) {
      c.insert(choices[k][idx[k]]);
      c.insert(oracle::negate(choices[k][idx[k]]));
    }
    if (oracle_axioms(c)) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

}  // namespace

TEST(CircuitAxioms, AcceptsPointCircuits) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = random_general_position_points(6, 2, seed);
    EXPECT_TRUE(check_circuit_axioms(point_circuits(p)).ok);
  }
}

TEST(CircuitAxioms, ReportsEachAxiom) {
  auto c1 = check_circuit_axioms(CircuitCandidateSet(SignVectorSet::from_strings({"000"})));
  EXPECT_EQ(c1.violation->axiom, "C1");
  auto c2 = check_circuit_axioms(CircuitCandidateSet(SignVectorSet::from_strings({"+-0"})));
  EXPECT_EQ(c2.violation->axiom, "C2");
  auto c3 = check_circuit_axioms(CircuitCandidateSet(SignVectorSet::from_strings({"+-0", "-+0", "+00", "-00"})));
  EXPECT_EQ(c3.violation->axiom, "C3");
  auto c4 = check_circuit_axioms(CircuitCandidateSet(SignVectorSet::from_strings({"+-0", "-+0", "0+-", "0-+"})));
  EXPECT_FALSE(c4.ok);
  EXPECT_EQ(c4.violation->axiom, "C4");
}

TEST(CircuitAxioms, MatchesDefinitionOracle) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> n_pick(3, 5);
    const std::size_t n = n_pick(rng);
    std::vector<SignVector> v;
    std::set<std::string> strings;
    std::uniform_int_distribution<int> count(1, 4);
    for (int k = count(rng); k > 0; --k) {
      auto s = oracle::random_signs(rng, n);
      if (s.find_first_not_of('0') == std::string::npos) continue;
      strings.insert(s);
      strings.insert(oracle::negate(s));
    }
    for (const auto& s : strings) v.push_back(sv(s));
    CircuitCandidateSet cs(SignVectorSet(n, v));
    ASSERT_EQ(check_circuit_axioms(cs).ok, oracle_axioms(strings)) << trial;
  }
}

TEST(CircuitCandidates, UniformRankValidation) {
  EXPECT_THROW(CircuitCandidateSet(SignVectorSet::from_strings({"+-+", "-+-"}), 1), DomainError);
  EXPECT_THROW(CircuitCandidateSet(SignVectorSet::from_strings({"+-0", "++0"}), 1), DomainError);
  EXPECT_NO_THROW(CircuitCandidateSet(SignVectorSet::from_strings({"+-0", "-+0"}), 1));
}

TEST(PotentialCircuits, RadonStrictExample) {
  auto expected = SignVectorSet::from_strings(
      {"+--+0", "-++-0", "+--0-", "-++0+", "+-0+-", "-+0-+", "+0+-+", "-0-+-", "0++-+", "0--+-"});
  auto pc = potential_circuits(a4_thresh(), 3);
  EXPECT_EQ(pc, expected);
  std::map<IndexSet, int> per_support;
  for (const auto& x : pc) ++per_support[x.support()];
  EXPECT_EQ(per_support.size(), 5u);
  for (auto& [s, k] : per_support) EXPECT_EQ(k, 2);
}

TEST(PotentialCircuits, FullCubeHasNone) {
  std::vector<SignVector> all;
  for (std::uint32_t m = 0; m < 16; ++m) {
    std::string s;
    for (int i = 0; i < 4; ++i) s += (m >> i & 1) ? '+' : '-';
    all.push_back(sv(s));
  }
  SignVectorSet cube(4, all);
  for (std::size_t d = 1; d <= 3; ++d) EXPECT_TRUE(potential_circuits(cube, d).empty());
}

TEST(PotentialCircuits, OrthogonalToInput) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = oracle::random_matrix(rng, 5, 3);
    auto t = threshold_topes(a);
    for (std::size_t d = 1; d <= 4; ++d)
      for (const auto& c : potential_circuits(t, d)) {
        ASSERT_EQ(c.support_size(), d + 1);
        for (const auto& x : t) ASSERT_TRUE(orthogonal(c, x));
      }
  }
}

TEST(UniformCompletion, RadonStrictExampleFailsC4) {
  auto r = uniform_completion(a4_thresh(), 3);
  EXPECT_FALSE(r.feasible);
  ASSERT_TRUE(r.violation);
  EXPECT_EQ(r.violation->describe(), "C4: X=+--0-, Y=-+0-+, e=5");
  auto ok = uniform_completion(a4_thresh(), 4);
  EXPECT_TRUE(ok.feasible);
}

TEST(UniformCompletion, SevenFamilyIsFeasible) {
  auto r = uniform_completion(load_signs("sig7.txt").with_negations(), 2);
  ASSERT_TRUE(r.feasible);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(check_circuit_axioms(*r.witness).ok);
  for (const auto& c : r.witness->circuits)
    for (const auto& x : load_signs("sig7.txt")) EXPECT_TRUE(orthogonal(c, x));
}

TEST(UniformCompletion, RankViolationWhenSupportIsShattered) {
  std::vector<SignVector> all;
  for (std::uint32_t m = 0; m < 8; ++m) {
    std::string s;
    for (int i = 0; i < 3; ++i) s += (m >> i & 1) ? '+' : '-';
    all.push_back(sv(s + "+"));
  }
  auto r = uniform_completion(SignVectorSet(4, all).with_negations(), 2);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.violation->axiom, "RANK");
}

TEST(UniformCompletion, MatchesBruteForce) {
  std::mt19937_64 rng(71);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> n_pick(3, 5), c_pick(1, 5);
    const std::size_t n = n_pick(rng);
    std::vector<SignVector> v;
    for (std::size_t k = c_pick(rng); k > 0; --k) v.push_back(sv(oracle::random_signs(rng, n, false)));
    auto s = SignVectorSet(n, v).with_negations();
    for (std::size_t d = 1; d + 1 <= n && d <= 3; ++d) {
      ASSERT_EQ(uniform_completion(s, d).feasible, oracle_uniform_completion(s, d)) << s.size() << " d=" << d;
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(UniformCompletion, Guards) {
  CompletionOptions small;
  small.max_n = 4;
  auto s = SignVectorSet::from_strings({"+++++", "-----"});
  EXPECT_THROW(uniform_completion(s, 2, small), ResourceError);
  small.max_n = 10;
  small.max_d = 1;
  EXPECT_THROW(uniform_completion(s, 2, small), ResourceError);
  EXPECT_THROW(uniform_completion(s, 5), DomainError);
  EXPECT_THROW(uniform_completion(SignVectorSet::from_strings({"+0+"}), 1), DomainError);
}

TEST(UniformCompletion, NodeLimitTimesOut) {
  CompletionOptions tight;
  tight.max_nodes = 1;
  auto r = uniform_completion(a4_thresh(), 3, tight);
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(r.timed_out || r.violation);
}

TEST(OmRank, Examples) {
  EXPECT_EQ(om_rank_lower_bound(load_signs("sig7.txt"), 4).rank, 2u);
  EXPECT_EQ(om_rank_lower_bound(load_signs("sig52.txt"), 4).rank, 3u);
  auto a4 = om_rank_lower_bound(a4_thresh(), 5);
  EXPECT_EQ(a4.rank, 4u);
  ASSERT_FALSE(a4.attempts.empty());
  EXPECT_EQ(a4.attempts.front().d, 3u);
  EXPECT_FALSE(a4.attempts.front().feasible);
  auto capped = om_rank_lower_bound(a4_thresh(), 3);
  EXPECT_TRUE(capped.exceeds);
  EXPECT_EQ(capped.rank, 4u);
}

TEST(OmRank, NeverBelowVcDimension) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<SignVector> v;
    for (int k = 0; k < 4; ++k) v.push_back(sv(oracle::random_signs(rng, 5, false)));
    SignVectorSet s(5, v);
    auto r = om_rank_lower_bound(s, 5);
    EXPECT_FALSE(r.exceeds);
    EXPECT_GE(r.rank, vc_dimension(s.with_negations()));
    EXPECT_LE(r.rank, 5u);
  }
}

TEST(Rank2, ExampleFamilies) {
  EXPECT_TRUE(is_rank2_topes(load_signs("sig7.txt")));
  EXPECT_FALSE(is_rank2_topes(load_signs("sig52.txt")));
  EXPECT_TRUE(is_rank2_topes(SignVectorSet(3)));
  EXPECT_THROW(is_rank2_topes(SignVectorSet::from_strings({"+0"})), DomainError);
}

TEST(Rank2, AgreesWithCompletionOnSmallFamilies) {
  for (std::size_t n = 3; n <= 4; ++n)
    for (const auto& f : oracle::closed_families(n, 10)) {
      auto s = oracle::to_set(n, f);
      ASSERT_EQ(is_rank2_topes(s), uniform_completion(s, 2).feasible);
    }
}

TEST(Rank2, MatrixTopesOfPlanarRepresentations) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto rep = random_representation(6, 5, 2, seed, DistortionChoice::Random);
    EXPECT_TRUE(is_rank2_topes(difference_topes(rep.matrix)));
  }
}
