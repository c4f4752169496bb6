#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "monrank/matrix.hpp"
#include "monrank/omatroid.hpp"
#include "monrank/sign_vector.hpp"
#include "monrank/spectral.hpp"
#include "monrank/topes.hpp"
#include "monrank/vcdim.hpp"

namespace monrank {

/// Largest m*n for which the per-column threshold search runs.
inline constexpr std::size_t kThresholdSearchMaxCells = 4096;
inline constexpr std::size_t kThresholdSearchSweeps = 3;

/// Default VC search budget used by analyze (about a second and 128 MB).
inline constexpr VcBudget kAnalyzeVcBudget{500'000'000, 32'000'000};

struct ThresholdSelection {
  double bound = 0.0;
  std::vector<std::size_t> cut;  // per column: number of rows below the threshold
};

/// Forster bound of an m x n sub-matrix of the threshold topes holding one
/// threshold vector per column. Starts from the median cut of every column
/// and improves column by column (coordinate descent on the spectral norm of
/// the selection) for a few sweeps.
inline ThresholdSelection forster_threshold_search(const RealMatrix& a) {
  const auto perms = column_permutations(a);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ThresholdSelection best;
  if (m == 0 || n == 0) return best;

  auto vec = [&](std::size_t j, std::size_t cut) {
    std::vector<double> v(m, 1.0);
    for (std::size_t r = 0; r < cut; ++r) v[perms[j][r]] = -1.0;
    return v;
  };
  std::vector<std::size_t> cut(n, m / 2);
  RealMatrix gram(m, m);
  auto add = [&](const std::vector<double>& v, double w) {
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) gram(x, y) += w * v[x] * v[y];
  };
  for (std::size_t j = 0; j < n; ++j) add(vec(j, cut[j]), 1.0);
  double lambda = symmetric_max_eigenvalue(gram);

  for (std::size_t sweep = 0; sweep < kThresholdSearchSweeps; ++sweep) {
    bool improved = false;
    for (std::size_t j = 0; j < n; ++j) {
      const auto current = vec(j, cut[j]);
      add(current, -1.0);
      std::size_t best_cut = cut[j];
      double best_lambda = lambda;
      for (std::size_t c = 0; c < m; ++c) {
        if (c == cut[j]) continue;
        const auto v = vec(j, c);
        add(v, 1.0);
        const double l = symmetric_max_eigenvalue(gram);
        add(v, -1.0);
        if (l < best_lambda * (1 - 1e-9)) {
          best_lambda = l;
          best_cut = c;
        }
      }
      add(vec(j, best_cut), 1.0);
      if (best_cut != cut[j]) {
        improved = true;
        cut[j] = best_cut;
        lambda = best_lambda;
      }
    }
    if (!improved) break;
  }
  RealMatrix sel(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = vec(j, cut[j]);
    for (std::size_t i = 0; i < m; ++i) sel(i, j) = v[i];
  }
  best.bound = forster_bound(SignMatrix(std::move(sel)));
  best.cut = std::move(cut);
  return best;
}

/// Forster bound for the threshold side: the larger of the bound for the
/// full matrix whose columns are all threshold topes and, for small inputs,
/// the one-threshold-per-column search.
inline double forster_bound_thresh(const RealMatrix& a, const SignVectorSet& thresh) {
  double fb = forster_bound(SignMatrix::from_columns(thresh));
  if (a.rows() * a.cols() <= kThresholdSearchMaxCells) fb = std::max(fb, forster_threshold_search(a).bound);
  return fb;
}

/// Forster bound of the matrix whose rows are the difference topes.
inline double forster_bound_diff(const SignVectorSet& diff) {
  if (diff.empty()) return 0.0;
  return forster_bound(SignMatrix::from_rows(diff));
}

/// Smallest integer a real lower bound certifies, allowing for rounding in
/// the last digits of the computed value.
inline std::size_t certified_ceil(double x) {
  if (!(x > 0)) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

struct AnalyzeOptions {
  std::optional<std::size_t> complete_d_max;  // run the completion search up to this rank
  bool singular_values = false;
  bool include_topes = false;
  bool perturb_ties = false;
  unsigned threads = 1;
  VcBudget vc_budget = kAnalyzeVcBudget;
  CompletionOptions completion = CompletionOptions::from_env();
};

struct RankReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool generic = true;
  std::vector<Tie> ties;  // before perturbation
  bool perturbed = false;
  std::size_t radon_rank = 0;
  std::size_t vc_rank = 0;
  bool radon_rank_exact = true;  // false: a lower bound from a truncated search
  bool vc_rank_exact = true;
  double forster_bound_thresh = 0.0;
  double forster_bound_diff = 0.0;
  bool om_rank2_feasible = true;
  std::optional<MatrixOmRank> om_completion;
  std::optional<std::size_t> om_completion_d_max;
  std::size_t monotone_rank_lower_bound = 0;
  std::optional<std::vector<double>> singular_values;
  std::optional<SignVectorSet> threshold_topes;
  std::optional<SignVectorSet> difference_topes;
};

inline std::size_t expected_lower_bound(const RankReport& r) {
  std::size_t b = std::max(r.radon_rank, r.vc_rank);
  b = std::max(b, certified_ceil(r.forster_bound_diff));
  const std::size_t ft = certified_ceil(r.forster_bound_thresh);
  b = std::max(b, ft == 0 ? 0 : ft - 1);
  if (r.om_completion) b = std::max(b, r.om_completion->rank);
  return b;
}

inline bool report_consistent(const RankReport& r) { return r.monotone_rank_lower_bound == expected_lower_bound(r); }

/// Runs every bound on A. Throws GenericityError on tied column entries
/// unless perturb_ties is set.
inline RankReport analyze(const RealMatrix& input, const AnalyzeOptions& opt = {}) {
  RankReport r;
  r.rows = input.rows();
  r.cols = input.cols();
  r.ties = check_generic(input).ties;
  r.generic = r.ties.empty();
  RealMatrix a = input;
  if (!r.generic) {
    if (!opt.perturb_ties) require_generic(input);
    a = perturb_ties(input);
    r.perturbed = true;
    require_generic(a);
  }
  const SignVectorSet thresh = threshold_topes(a);
  const SignVectorSet diff = difference_topes(a);
  const VcResult vt = vc_dimension_witness(thresh, opt.threads, opt.vc_budget);
  const VcResult vd = vc_dimension_witness(diff, opt.threads, opt.vc_budget);
  r.radon_rank = vt.dimension == 0 ? 0 : vt.dimension - 1;
  r.radon_rank_exact = vt.exact;
  r.vc_rank = vd.dimension;
  r.vc_rank_exact = vd.exact;
  r.forster_bound_thresh = forster_bound_thresh(a, thresh);
  r.forster_bound_diff = forster_bound_diff(diff);
  r.om_rank2_feasible = is_rank2_topes(diff);
  if (opt.complete_d_max) {
    r.om_completion_d_max = opt.complete_d_max;
    r.om_completion = om_completion_rank_of_matrix(a, *opt.complete_d_max, opt.completion);
  }
  if (opt.singular_values) r.singular_values = singular_values(input);
  if (opt.include_topes) {
    r.threshold_topes = thresh;
    r.difference_topes = diff;
  }
  r.monotone_rank_lower_bound = expected_lower_bound(r);
  return r;
}

using Json = nlohmann::ordered_json;

inline Json to_json(const AxiomViolation& v) {
  Json j;
  j["axiom"] = v.axiom;
  j["X"] = v.x.to_string();
  j["Y"] = v.y ? Json(v.y->to_string()) : Json(nullptr);
  j["e"] = v.e ? Json(*v.e + 1) : Json(nullptr);
  return j;
}

inline Json to_json(const SignVectorSet& s) {
  Json arr = Json::array();
  for (const auto& x : s) arr.push_back(x.to_string());
  return arr;
}

inline Json to_json(const OmRank& o) {
  Json j;
  j["rank"] = o.rank;
  j["exceeds_d_max"] = o.exceeds;
  Json attempts = Json::array();
  for (const auto& a : o.attempts) {
    Json t;
    t["d"] = a.d;
    t["feasible"] = a.feasible;
    if (a.trivial) t["trivial"] = true;
    t["violation"] = a.violation ? to_json(*a.violation) : Json(nullptr);
    attempts.push_back(std::move(t));
  }
  j["attempts"] = std::move(attempts);
  return j;
}

inline Json to_json(const RankReport& r) {
  Json j;
  j["shape"] = {{"rows", r.rows}, {"cols", r.cols}};
  j["generic"] = r.generic;
  Json ties = Json::array();
  for (const auto& t : r.ties) ties.push_back({{"column", t.column + 1}, {"rows", {t.row_a + 1, t.row_b + 1}}});
  j["ties"] = std::move(ties);
  j["perturbed"] = r.perturbed;
  j["radon_rank"] = r.radon_rank;
  j["vc_rank"] = r.vc_rank;
  if (!r.radon_rank_exact || !r.vc_rank_exact)
    j["vc_search_truncated"] = {{"radon_rank", !r.radon_rank_exact}, {"vc_rank", !r.vc_rank_exact}};
  j["forster_bound_thresh"] = r.forster_bound_thresh;
  j["forster_bound_diff"] = r.forster_bound_diff;
  j["om_rank2_feasible"] = r.om_rank2_feasible;
  if (r.om_completion) {
    Json c;
    c["value"] = r.om_completion->rank;
    c["exceeds_d_max"] = r.om_completion->exceeds;
    c["d_max"] = *r.om_completion_d_max;
    c["difference"] = to_json(r.om_completion->difference);
    c["threshold"] = to_json(r.om_completion->threshold);
    j["om_completion_rank"] = std::move(c);
  } else {
    j["om_completion_rank"] = nullptr;
  }
  j["monotone_rank_lower_bound"] = r.monotone_rank_lower_bound;
  if (r.singular_values) j["singular_values"] = *r.singular_values;
  if (r.threshold_topes) {
    j["topes"] = {{"threshold", to_json(*r.threshold_topes)}, {"difference", to_json(*r.difference_topes)}};
  }
  return j;
}

}  // namespace monrank
