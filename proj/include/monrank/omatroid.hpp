#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "monrank/error.hpp"
#include "monrank/matrix.hpp"
#include "monrank/sign_vector.hpp"
#include "monrank/topes.hpp"
#include "monrank/vcdim.hpp"

namespace monrank {

/// Candidate circuit family. When uniform_rank is set every member has
/// support size rank + 1 and each support carries at most one +/- pair.
struct CircuitCandidateSet {
  std::size_t ground_size = 0;
  SignVectorSet circuits;
  std::optional<std::size_t> uniform_rank;

  CircuitCandidateSet() = default;
  CircuitCandidateSet(SignVectorSet c, std::optional<std::size_t> rank = std::nullopt)
      : ground_size(c.ground_size()), circuits(std::move(c)), uniform_rank(rank) {
    if (uniform_rank) {
      std::vector<SignVector> seen_support;
      for (const auto& x : circuits) {
        if (x.support_size() != *uniform_rank + 1) throw DomainError("circuit " + x.to_string() + " has the wrong support size");
      }
      for (std::size_t a = 0; a < circuits.size(); ++a)
        for (std::size_t b = a + 1; b < circuits.size(); ++b)
          if (circuits[a].support() == circuits[b].support() && circuits[a] != -circuits[b]) {
            throw DomainError("support of " + circuits[a].to_string() + " carries more than one circuit pair");
          }
    }
  }
};

/// One failed instance of a circuit axiom. e is 0-based; Y and e are unset
/// where the axiom does not involve them.
struct AxiomViolation {
  std::string axiom;  // "C1".."C4", or "RANK" for a support with no candidate
  SignVector x;
  std::optional<SignVector> y;
  std::optional<std::size_t> e;

  std::string describe() const {
    std::string s = axiom + ": X=" + x.to_string();
    if (y) s += ", Y=" + y->to_string();
    if (e) s += ", e=" + std::to_string(*e + 1);
    return s;
  }
};

struct AxiomReport {
  bool ok = true;
  std::optional<AxiomViolation> violation;
};

namespace detail {

inline constexpr std::size_t kMaskedGround = 64;

struct Masks {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  std::uint64_t supp() const { return pos | neg; }
};

inline Masks masks_of(const SignVector& x) { return {x.positive_mask(), x.negative_mask()}; }

inline SignVector vector_of(std::size_t n, Masks m) {
  SignVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((m.pos >> i) & 1u) v.set(i, Sign::Plus);
    if ((m.neg >> i) & 1u) v.set(i, Sign::Minus);
  }
  return v;
}

// Z conforms to (P, N) exactly or after negation.
inline bool conforms_up_to_sign(Masks z, std::uint64_t p, std::uint64_t n) {
  return ((z.pos & ~p) == 0 && (z.neg & ~n) == 0) || ((z.neg & ~p) == 0 && (z.pos & ~n) == 0);
}

inline bool conforms(Masks z, std::uint64_t p, std::uint64_t n) { return (z.pos & ~p) == 0 && (z.neg & ~n) == 0; }

}  // namespace detail

/// Checks C1-C4 on a candidate family over at most 64 elements.
///
/// C1-C3 report the first offending member in set order. For C4 (checked for
/// X != -Y and every e in sep(X, Y), which covers both X+ & Y- and X- & Y+)
/// the reported witness minimizes, in order: the region (supp X u supp Y) \ e
/// read as a bitmask, the rank of X in set order, the rank of Y, then e.
inline AxiomReport check_circuit_axioms(const CircuitCandidateSet& cs) {
  const SignVectorSet& c = cs.circuits;
  const std::size_t n = c.ground_size();
  if (n > detail::kMaskedGround) throw ResourceError("circuit axiom check supports at most 64 elements");
  AxiomReport report;
  auto fail = [&](std::string axiom, const SignVector& x, std::optional<SignVector> y = std::nullopt,
                  std::optional<std::size_t> e = std::nullopt) {
    report.ok = false;
    report.violation = AxiomViolation{std::move(axiom), x, std::move(y), e};
    return report;
  };
  for (const auto& x : c)
    if (x.is_zero()) return fail("C1", x);
  for (const auto& x : c)
    if (!c.contains(-x)) return fail("C2", x);

  std::vector<detail::Masks> m;
  m.reserve(c.size());
  for (const auto& x : c) m.push_back(detail::masks_of(x));
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) {
      if (a == b) continue;
      const bool subset = (m[a].supp() & ~m[b].supp()) == 0;
      const bool opposite = m[a].pos == m[b].neg && m[a].neg == m[b].pos;
      if (subset && !opposite) return fail("C3", c[a], c[b]);
    }

  using Key = std::tuple<std::uint64_t, std::size_t, std::size_t, std::size_t>;
  std::optional<Key> best;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = 0; b < m.size(); ++b) {
      const bool opposite = m[a].pos == m[b].neg && m[a].neg == m[b].pos;
      if (opposite) continue;
      std::uint64_t sep = (m[a].pos & m[b].neg) | (m[a].neg & m[b].pos);
      while (sep) {
        const std::size_t e = static_cast<std::size_t>(std::countr_zero(sep));
        sep &= sep - 1;
        const std::uint64_t bit = std::uint64_t{1} << e;
        const std::uint64_t p = (m[a].pos | m[b].pos) & ~bit;
        const std::uint64_t nn = (m[a].neg | m[b].neg) & ~bit;
        const Key key{(m[a].supp() | m[b].supp()) & ~bit, a, b, e};
        if (best && key >= *best) continue;
        bool found = false;
        for (const auto& z : m) {
          if (detail::conforms(z, p, nn)) {
            found = true;
            break;
          }
        }
        if (!found) best = key;
      }
    }
  }
  if (best) {
    auto [region, a, b, e] = *best;
    return fail("C4", c[a], c[b], e);
  }
  return report;
}

/// Search limits for uniform completion. Environment variables
/// MONRANK_COMPLETION_MAX_N and MONRANK_COMPLETION_MAX_D override the
/// defaults; max_nodes = 0 means no node limit.
struct CompletionOptions {
  std::size_t max_n = 10;
  std::size_t max_d = 4;
  std::size_t max_nodes = 0;

  static CompletionOptions from_env() {
    CompletionOptions o;
    auto read = [](const char* name, std::size_t& out) {
      if (const char* v = std::getenv(name)) {
        char* end = nullptr;
        const unsigned long long x = std::strtoull(v, &end, 10);
        if (end != v && *end == '\0') out = static_cast<std::size_t>(x);
      }
    };
    read("MONRANK_COMPLETION_MAX_N", o.max_n);
    read("MONRANK_COMPLETION_MAX_D", o.max_d);
    return o;
  }
};

/// Hard ceiling on the ground set for the completion search, independent of
/// the configurable guard.
inline constexpr std::size_t kCompletionHardMaxN = 20;

struct CompletionResult {
  bool feasible = false;
  bool timed_out = false;
  std::size_t nodes = 0;
  std::optional<CircuitCandidateSet> witness;
  std::optional<AxiomViolation> violation;
};

namespace detail {

inline void require_sign_input(const SignVectorSet& s) {
  if (!s.is_zero_free()) throw DomainError("sign vectors must be zero-free");
}

// Bits of `mask` packed into the low positions, lowest first.
inline std::uint64_t extract_bits(std::uint64_t value, std::uint64_t mask) {
  std::uint64_t out = 0;
  std::size_t k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if (value & low) out |= std::uint64_t{1} << k;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

inline std::uint64_t deposit_bits(std::uint64_t packed, std::uint64_t mask) {
  std::uint64_t out = 0;
  std::size_t k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if ((packed >> k) & 1u) out |= low;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

// All k-subsets of [n] as masks, in colexicographic (increasing integer) order.
inline std::vector<std::uint64_t> colex_subsets(std::size_t n, std::size_t k) {
  std::vector<std::uint64_t> out;
  if (k > n) return out;
  if (k == 0) return {0};
  std::uint64_t s = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (s < limit) {
    out.push_back(s);
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

// Candidate circuits on `support`: zero-free patterns whose first element is
// +, with neither the pattern nor its negation among the restrictions of S.
inline std::vector<Masks> support_candidates(const std::vector<Masks>& sigma, std::uint64_t support) {
  const std::size_t k = static_cast<std::size_t>(std::popcount(support));
  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  std::vector<char> seen(std::size_t{1} << k, 0);
  for (const auto& y : sigma) seen[extract_bits(y.pos, support)] = 1;
  std::vector<Masks> out;
  for (std::uint64_t q = 0; q <= full; ++q) {
    if (!(q & 1u)) continue;
    if (seen[q] || seen[~q & full]) continue;
    const std::uint64_t pos = deposit_bits(q, support);
    out.push_back({pos, support & ~pos});
  }
  std::sort(out.begin(), out.end(), [](const Masks& a, const Masks& b) {
    return std::tie(a.pos, a.neg) < std::tie(b.pos, b.neg);
  });
  return out;
}

inline std::vector<Masks> closed_masks(const SignVectorSet& s) {
  std::vector<Masks> out;
  for (const auto& y : s.with_negations()) out.push_back(masks_of(y));
  return out;
}

}  // namespace detail

/// All sign vectors with support size d+1 orthogonal to every member of S.
inline SignVectorSet potential_circuits(const SignVectorSet& s, std::size_t d) {
  const std::size_t n = s.ground_size();
  detail::require_sign_input(s);
  if (d + 1 > n) throw DomainError("potential circuits need d + 1 <= n");
  if (n > detail::kMaskedGround) throw ResourceError("potential circuits support at most 64 elements");
  const auto sigma = detail::closed_masks(s);
  std::vector<SignVector> out;
  for (auto support : detail::colex_subsets(n, d + 1)) {
    for (const auto& c : detail::support_candidates(sigma, support)) {
      out.push_back(detail::vector_of(n, c));
      out.push_back(detail::vector_of(n, {c.neg, c.pos}));
    }
  }
  SignVectorSet result(n, std::move(out));
  result.flag_negation_closed();
  return result;
}

namespace detail {

class UniformSearch {
 public:
  UniformSearch(const SignVectorSet& s, std::size_t d, std::size_t max_nodes)
      : n_(s.ground_size()), d_(d), max_nodes_(max_nodes), sigma_(closed_masks(s)) {
    supports_ = colex_subsets(n_, d + 1);
    for (std::size_t i = 0; i < supports_.size(); ++i) index_of_support_[supports_[i]] = i;
    candidates_.reserve(supports_.size());
    for (auto sup : supports_) candidates_.push_back(support_candidates(sigma_, sup));
  }

  std::size_t empty_support() const {
    for (std::size_t i = 0; i < supports_.size(); ++i)
      if (candidates_[i].empty()) return i;
    return supports_.size();
  }

  const std::vector<std::uint64_t>& supports() const { return supports_; }
  const std::vector<std::vector<Masks>>& candidates() const { return candidates_; }

  bool run() {
    build_constraints();
    choice_.assign(supports_.size(), kUnassigned);
    return descend(0);
  }

  bool timed_out() const { return timed_out_; }
  std::size_t nodes() const { return nodes_; }
  Masks chosen(std::size_t s) const { return candidates_[s][choice_[s]]; }

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  struct Constraint {
    std::uint32_t s1;
    std::uint32_t s2;
    std::uint32_t e;
    std::uint32_t region_begin;
    std::uint32_t region_end;
  };

  void build_constraints() {
    const std::size_t count = supports_.size();
    by_support_.assign(count, {});
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        std::uint64_t common = supports_[a] & supports_[b];
        while (common) {
          const std::size_t e = static_cast<std::size_t>(std::countr_zero(common));
          common &= common - 1;
          const std::uint64_t region = (supports_[a] | supports_[b]) & ~(std::uint64_t{1} << e);
          Constraint c{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e),
                       static_cast<std::uint32_t>(region_supports_.size()), 0};
          for (auto sub : colex_subsets(static_cast<std::size_t>(std::popcount(region)), d_ + 1)) {
            region_supports_.push_back(static_cast<std::uint32_t>(index_of_support_.at(deposit_bits(sub, region))));
          }
          c.region_end = static_cast<std::uint32_t>(region_supports_.size());
          const std::size_t id = constraints_.size();
          constraints_.push_back(c);
          by_support_[a].push_back(id);
          by_support_[b].push_back(id);
          for (std::uint32_t r = c.region_begin; r < c.region_end; ++r) by_support_[region_supports_[r]].push_back(id);
        }
      }
    }
    for (auto& list : by_support_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  // False once the constraint can no longer be met by any completion of the
  // current partial assignment.
  bool viable(const Constraint& c) const {
    if (choice_[c.s1] == kUnassigned || choice_[c.s2] == kUnassigned) return true;
    const Masks x = candidates_[c.s1][choice_[c.s1]];
    Masks y = candidates_[c.s2][choice_[c.s2]];
    const std::uint64_t bit = std::uint64_t{1} << c.e;
    if (!(((x.pos & y.neg) | (x.neg & y.pos)) & bit)) std::swap(y.pos, y.neg);
    const std::uint64_t p = (x.pos | y.pos) & ~bit;
    const std::uint64_t nn = (x.neg | y.neg) & ~bit;
    for (std::uint32_t r = c.region_begin; r < c.region_end; ++r) {
      const std::size_t s = region_supports_[r];
      if (choice_[s] != kUnassigned) {
        if (conforms_up_to_sign(candidates_[s][choice_[s]], p, nn)) return true;
      } else {
        for (const auto& z : candidates_[s])
          if (conforms_up_to_sign(z, p, nn)) return true;
      }
    }
    return false;
  }

  bool descend(std::size_t s) {
    if (s == supports_.size()) return true;
    for (std::size_t k = 0; k < candidates_[s].size(); ++k) {
      if (max_nodes_ && nodes_ >= max_nodes_) {
        timed_out_ = true;
        return false;
      }
      ++nodes_;
      choice_[s] = k;
      bool ok = true;
      for (auto id : by_support_[s]) {
        if (!viable(constraints_[id])) {
          ok = false;
          break;
        }
      }
      if (ok && descend(s + 1)) return true;
      if (timed_out_) return false;
    }
    choice_[s] = kUnassigned;
    return false;
  }

  std::size_t n_;
  std::size_t d_;
  std::size_t max_nodes_;
  std::vector<Masks> sigma_;
  std::vector<std::uint64_t> supports_;
  std::unordered_map<std::uint64_t, std::size_t> index_of_support_;
  std::vector<std::vector<Masks>> candidates_;
  std::vector<Constraint> constraints_;
  std::vector<std::uint32_t> region_supports_;
  std::vector<std::vector<std::size_t>> by_support_;
  std::vector<std::size_t> choice_;
  std::size_t nodes_ = 0;
  bool timed_out_ = false;
};

inline CircuitCandidateSet selection_to_set(std::size_t n, std::size_t d, const std::vector<Masks>& chosen) {
  std::vector<SignVector> v;
  for (const auto& c : chosen) {
    v.push_back(vector_of(n, c));
    v.push_back(vector_of(n, {c.neg, c.pos}));
  }
  SignVectorSet set(n, std::move(v));
  set.flag_negation_closed();
  return CircuitCandidateSet(std::move(set), d);
}

}  // namespace detail

/// Searches for a uniform rank-d circuit family, one +/- pair per (d+1)-subset,
/// drawn from the potential circuits of S and satisfying C4. Supports are
/// fixed in colexicographic order and candidates in set order, so the first
/// feasible selection found is canonical.
///
/// On infeasibility the violation is either RANK (a support without any
/// potential circuit) or the C4 witness of the selection that takes the first
/// candidate on every support.
inline CompletionResult uniform_completion(const SignVectorSet& s, std::size_t d,
                                           const CompletionOptions& options = CompletionOptions::from_env()) {
  const std::size_t n = s.ground_size();
  detail::require_sign_input(s);
  if (d + 1 > n) throw DomainError("uniform completion needs d <= n - 1 (d=" + std::to_string(d) + ", n=" + std::to_string(n) + ")");
  if (n > options.max_n || n > kCompletionHardMaxN) {
    throw ResourceError("completion search limited to n <= " + std::to_string(std::min(options.max_n, kCompletionHardMaxN)) +
                        " (n=" + std::to_string(n) + ")");
  }
  if (d > options.max_d) {
    throw ResourceError("completion search limited to d <= " + std::to_string(options.max_d) + " (d=" + std::to_string(d) + ")");
  }
  CompletionResult result;
  detail::UniformSearch search(s, d, options.max_nodes);
  const std::size_t empty = search.empty_support();
  if (empty != search.supports().size()) {
    result.violation = AxiomViolation{"RANK", detail::vector_of(n, {search.supports()[empty], 0}), std::nullopt, std::nullopt};
    return result;
  }
  const bool found = search.run();
  result.nodes = search.nodes();
  result.timed_out = search.timed_out();
  if (found) {
    std::vector<detail::Masks> chosen;
    for (std::size_t i = 0; i < search.supports().size(); ++i) chosen.push_back(search.chosen(i));
    auto witness = detail::selection_to_set(n, d, chosen);
    const auto report = check_circuit_axioms(witness);
    for (const auto& c : witness.circuits)
      for (const auto& t : s)
        if (!orthogonal(c, t)) throw std::logic_error("completion witness is not orthogonal to the input");
    if (!report.ok) throw std::logic_error("completion witness fails " + report.violation->describe());
    result.feasible = true;
    result.witness = std::move(witness);
    return result;
  }
  if (!result.timed_out) {
    std::vector<detail::Masks> first;
    for (const auto& cands : search.candidates()) first.push_back(cands.front());
    result.violation = check_circuit_axioms(detail::selection_to_set(n, d, first)).violation;
  }
  return result;
}

/// One rank tried by om_rank_lower_bound.
struct CompletionAttempt {
  std::size_t d = 0;
  bool feasible = false;
  bool trivial = false;  // d >= n: the free oriented matroid works
  std::optional<AxiomViolation> violation;
};

struct OmRank {
  std::size_t rank = 0;
  bool exceeds = false;  // no rank <= d_max works; rank is then d_max + 1
  std::vector<CompletionAttempt> attempts;
};

/// Smallest d <= d_max admitting a uniform rank-d oriented matroid whose topes
/// contain S. The scan starts at the VC dimension of S (topes of a rank-d
/// oriented matroid shatter no d+1 elements); d = n is always feasible.
inline OmRank om_rank_lower_bound(const SignVectorSet& s, std::size_t d_max,
                                  const CompletionOptions& options = CompletionOptions::from_env()) {
  detail::require_sign_input(s);
  const SignVectorSet closed = s.with_negations();
  const std::size_t n = s.ground_size();
  OmRank out;
  for (std::size_t d = vc_dimension(closed); d <= d_max; ++d) {
    if (d >= n) {
      out.attempts.push_back({d, true, true, std::nullopt});
      out.rank = d;
      return out;
    }
    const auto r = uniform_completion(closed, d, options);
    if (r.timed_out) throw ResourceError("completion search hit its node limit at d=" + std::to_string(d));
    out.attempts.push_back({d, r.feasible, false, r.violation});
    if (r.feasible) {
      out.rank = d;
      return out;
    }
  }
  out.rank = d_max + 1;
  out.exceeds = true;
  return out;
}

struct MatrixOmRank {
  std::size_t rank = 0;
  bool exceeds = false;
  OmRank difference;
  OmRank threshold;
};

/// max(om rank of the difference topes, om rank of the threshold topes - 1).
/// The threshold side is searched up to d_max + 1 so both terms are decided
/// up to d_max.
inline MatrixOmRank om_completion_rank_of_matrix(const RealMatrix& a, std::size_t d_max,
                                                 const CompletionOptions& options = CompletionOptions::from_env()) {
  MatrixOmRank out;
  out.difference = om_rank_lower_bound(difference_topes(a), d_max, options);
  out.threshold = om_rank_lower_bound(threshold_topes(a), d_max + 1, options);
  out.rank = std::max(out.difference.rank, out.threshold.rank == 0 ? 0 : out.threshold.rank - 1);
  out.exceeds = out.difference.exceeds || out.threshold.exceeds;
  if (out.exceeds) out.rank = d_max + 1;
  return out;
}

/// Decides whether S lies in the topes of a rank-2 oriented matroid: sort the
/// closure of S under negation by distance to a fixed X*, grow a chain from X*
/// greedily, and accept iff every +/- pair reaches the chain. The closure is
/// never materialized; index i >= |S| stands for -S[i - |S|].
inline bool is_rank2_topes(const SignVectorSet& s) {
  detail::require_sign_input(s);
  const std::size_t count = s.size();
  if (count == 0) return true;
  const std::size_t n = s.ground_size();
  const std::size_t words = s[0].words();

  struct View {
    std::span<const std::uint64_t> pos, neg;
  };
  auto view = [&](std::size_t i) -> View {
    const SignVector& x = s[i < count ? i : i - count];
    if (i < count) return {x.positive_words(), x.negative_words()};
    return {x.negative_words(), x.positive_words()};
  };
  auto less = [&](std::size_t a, std::size_t b) {
    const View va = view(a), vb = view(b);
    for (std::size_t w = words; w-- > 0;)
      if (va.pos[w] != vb.pos[w]) return va.pos[w] < vb.pos[w];
    for (std::size_t w = words; w-- > 0;)
      if (va.neg[w] != vb.neg[w]) return va.neg[w] < vb.neg[w];
    return false;
  };
  // X* is the least member of the closure.
  std::size_t star_index = 0;
  for (std::size_t i = 1; i < 2 * count; ++i)
    if (less(i, star_index)) star_index = i;
  const View star = view(star_index);

  std::vector<std::vector<std::size_t>> buckets(n + 1);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t sep = 0;
    const View x = view(i);
    for (std::size_t w = 0; w < words; ++w) sep += std::popcount((x.pos[w] & star.neg[w]) | (x.neg[w] & star.pos[w]));
    buckets[sep].push_back(i);
    buckets[n - sep].push_back(i + count);
  }

  std::vector<char> in_chain(2 * count, 0);
  std::size_t last_index = star_index;
  in_chain[star_index] = 1;
  for (const auto& bucket : buckets) {
    for (std::size_t i : bucket) {
      if (i == star_index) continue;
      const View last = view(last_index);
      const View x = view(i);
      bool ok = true;
      for (std::size_t w = 0; w < words && ok; ++w) {
        const std::uint64_t sep_last_x = (last.pos[w] & x.neg[w]) | (last.neg[w] & x.pos[w]);
        const std::uint64_t sep_x_negstar = (x.pos[w] & star.pos[w]) | (x.neg[w] & star.neg[w]);
        const std::uint64_t sep_last_negstar = (last.pos[w] & star.pos[w]) | (last.neg[w] & star.neg[w]);
        ok = (sep_last_x | sep_x_negstar) == sep_last_negstar;
      }
      if (ok) {
        last_index = i;
        in_chain[i] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i)
    if (!in_chain[i] && !in_chain[i + count]) return false;
  return true;
}

}  // namespace monrank
