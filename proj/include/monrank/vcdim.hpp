#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "monrank/matrix.hpp"
#include "monrank/parallel.hpp"
#include "monrank/sign_vector.hpp"
#include "monrank/topes.hpp"

namespace monrank {

namespace detail {

inline bool bit_at(std::span<const std::uint64_t> words, std::size_t i) {
  return (words[i / 64] >> (i % 64)) & 1u;
}

// Counts distinct restrictions to tau, stopping once all 2^|tau| appear.
inline bool shatters_unchecked(const SignVectorSet& s, const IndexSet& tau) {
  const std::size_t k = tau.size();
  if (s.empty()) return false;
  if (k >= 63 || (std::uint64_t{1} << k) > s.size()) return false;
  const std::size_t need = std::size_t{1} << k;
  std::vector<char> seen(need, 0);
  std::size_t distinct = 0;
  for (const auto& x : s) {
    auto pos = x.positive_words();
    std::size_t pattern = 0;
    for (std::size_t b = 0; b < k; ++b)
      if (bit_at(pos, tau[b])) pattern |= std::size_t{1} << b;
    if (!seen[pattern]) {
      seen[pattern] = 1;
      if (++distinct == need) return true;
    }
  }
  return false;
}

inline void require_zero_free_on(const SignVectorSet& s, const IndexSet& tau) {
  for (const auto& x : s) {
    for (auto i : tau) {
      if (x[i] == Sign::Zero) throw DomainError("sign vector " + x.to_string() + " has a zero at " + std::to_string(i + 1));
    }
  }
}

}  // namespace detail

/// True iff the restrictions of S to tau (0-based, any order) take all 2^|tau| values.
inline bool shatters(const SignVectorSet& s, IndexSet tau) {
  for (auto i : tau) {
    if (i >= s.ground_size()) throw IndexError("index " + std::to_string(i) + " outside ground set of size " + std::to_string(s.ground_size()));
  }
  std::sort(tau.begin(), tau.end());
  if (std::adjacent_find(tau.begin(), tau.end()) != tau.end()) throw IndexError("repeated index in tau");
  detail::require_zero_free_on(s, tau);
  return detail::shatters_unchecked(s, tau);
}

struct VcResult {
  std::size_t dimension = 0;
  IndexSet witness;    // a shattered set of maximum size
  bool exact = true;   // false: the search hit its budget and dimension is only a lower bound
};

inline constexpr std::size_t kVcGreedySeeds = 64;

/// Work budget for vc_dimension_witness. Zero means unlimited.
struct VcBudget {
  std::size_t max_work = 0;   // pattern updates plus join steps
  std::size_t max_cells = 0;  // stored patterns (shattered sets x |S|)
};

/// Exact VC dimension by level-wise search: a k-set is tested only when
/// 2^k <= |S| and every (k-1)-subset is already known to be shattered.
/// Each shattered set keeps the restriction pattern of every member, so a
/// candidate extends its parent's patterns by one bit.
///
/// When the budget runs out the largest shattered set found so far is
/// extended greedily and returned with exact = false.
inline VcResult vc_dimension_witness(const SignVectorSet& s, unsigned threads = 1, VcBudget budget = {}) {
  if (!s.is_zero_free()) throw DomainError("VC dimension requires zero-free sign vectors");
  VcResult result;
  if (s.empty()) return result;
  const std::size_t n = s.ground_size();
  const std::size_t count = s.size();

  std::vector<std::vector<std::uint8_t>> plus(n, std::vector<std::uint8_t>(count));
  for (std::size_t v = 0; v < count; ++v) {
    auto pos = s[v].positive_words();
    for (std::size_t i = 0; i < n; ++i) plus[i][v] = detail::bit_at(pos, i) ? 1 : 0;
  }

  struct Entry {
    IndexSet set;
    std::vector<std::uint32_t> pattern;
  };
  auto shattered = [&](const std::vector<std::uint32_t>& pattern, std::size_t k) {
    const std::size_t need = std::size_t{1} << k;
    std::vector<char> seen(need, 0);
    std::size_t distinct = 0;
    for (auto p : pattern) {
      if (!seen[p]) {
        seen[p] = 1;
        if (++distinct == need) return true;
      }
    }
    return false;
  };
  auto extend = [&](const std::vector<std::uint32_t>& parent, std::size_t x, std::size_t k) {
    std::vector<std::uint32_t> pattern(parent);
    for (std::size_t v = 0; v < count; ++v) pattern[v] |= static_cast<std::uint32_t>(plus[x][v]) << (k - 1);
    return pattern;
  };
  auto by_set = [](const Entry& e, const IndexSet& t) { return e.set < t; };

  std::vector<Entry> level;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> pattern(plus[i].begin(), plus[i].end());
    if (count >= 2 && shattered(pattern, 1)) level.push_back({IndexSet{i}, std::move(pattern)});
  }
  std::size_t work = n * count;
  auto over = [&](std::size_t w, std::size_t cells) {
    return (budget.max_work && w > budget.max_work) || (budget.max_cells && cells > budget.max_cells);
  };

  while (!level.empty()) {
    result.dimension = level.front().set.size();
    result.witness = level.front().set;
    const std::size_t k = result.dimension + 1;
    if (k >= 32 || (std::uint64_t{1} << k) > count) break;

    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    IndexSet sub;
    for (std::size_t a = 0; a < level.size(); ++a) {
      const IndexSet& sa = level[a].set;
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const IndexSet& sb = level[b].set;
        if (!std::equal(sa.begin(), sa.end() - 1, sb.begin())) break;
        work += k;
        IndexSet c = sa;
        c.push_back(sb.back());
        bool all_subsets = true;
        sub.resize(c.size() - 1);
        for (std::size_t drop = 0; drop + 2 < c.size() && all_subsets; ++drop) {
          std::size_t w = 0;
          for (std::size_t q = 0; q < c.size(); ++q)
            if (q != drop) sub[w++] = c[q];
          auto it = std::lower_bound(level.begin(), level.end(), sub, by_set);
          all_subsets = it != level.end() && it->set == sub;
        }
        if (all_subsets) candidates.emplace_back(a, b);
      }
      if (over(work + candidates.size() * count, 0)) {
        result.exact = false;
        break;
      }
    }
    if (!result.exact) break;
    work += candidates.size() * count;

    std::vector<char> hit(candidates.size(), 0);
    parallel_for(candidates.size(), threads, [&](std::size_t c) {
      const auto [a, b] = candidates[c];
      hit[c] = shattered(extend(level[a].pattern, level[b].set.back(), k), k) ? 1 : 0;
    });
    std::size_t hits = 0;
    for (char h : hit) hits += static_cast<std::size_t>(h);
    if (over(0, hits * count)) {
      result.exact = false;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!hit[c]) continue;
        result.witness = level[candidates[c].first].set;
        result.witness.push_back(level[candidates[c].second].set.back());
        result.dimension = k;
        break;
      }
      break;
    }
    std::vector<Entry> next;
    next.reserve(hits);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!hit[c]) continue;
      const auto [a, b] = candidates[c];
      IndexSet set = level[a].set;
      set.push_back(level[b].set.back());
      next.push_back({std::move(set), extend(level[a].pattern, level[b].set.back(), k)});
    }
    level = std::move(next);
  }

  if (!result.exact) {
    auto greedy = [&](IndexSet w) {
      std::vector<std::uint32_t> pattern(count, 0);
      for (std::size_t q = 0; q < w.size(); ++q)
        for (std::size_t v = 0; v < count; ++v) pattern[v] |= static_cast<std::uint32_t>(plus[w[q]][v]) << q;
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t k = w.size() + 1;
        if (k >= 32 || (std::uint64_t{1} << k) > count) break;
        if (std::find(w.begin(), w.end(), x) != w.end()) continue;
        auto p = extend(pattern, x, k);
        if (shattered(p, k)) {
          w.push_back(x);
          pattern = std::move(p);
        }
      }
      std::sort(w.begin(), w.end());
      return w;
    };
    std::vector<IndexSet> seeds{result.witness};
    for (std::size_t i = 0; i < level.size() && seeds.size() < kVcGreedySeeds; i += std::max<std::size_t>(1, level.size() / kVcGreedySeeds))
      seeds.push_back(level[i].set);
    for (const auto& seed : seeds) {
      auto w = greedy(seed);
      if (w.size() > result.witness.size()) result.witness = std::move(w);
    }
    result.dimension = result.witness.size();
  }
  return result;
}

inline std::size_t vc_dimension(const SignVectorSet& s, unsigned threads = 1) {
  return vc_dimension_witness(s, threads).dimension;
}

/// VC dimension of the threshold topes, minus one.
inline std::size_t radon_rank(const RealMatrix& a, unsigned threads = 1) {
  return vc_dimension(threshold_topes(a), threads) - 1;
}

/// VC dimension of the difference topes.
inline std::size_t vc_rank(const RealMatrix& a, unsigned threads = 1) {
  return vc_dimension(difference_topes(a), threads);
}

}  // namespace monrank
