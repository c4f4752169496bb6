// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "monrank/monrank.hpp"

using namespace monrank;

namespace {

constexpr double kSpectrumTol = 0.01;
constexpr double kRankDeficientTol = 1e-9;
constexpr double kSpectrumSeconds = 1.0;
constexpr double kPipelineSeconds = 5.0;
constexpr double kHadamardRelTol = 1e-9;
constexpr double kHadamardSeconds = 10.0;
constexpr std::size_t kHadamardMaxN = 5;
constexpr std::size_t kRank2ExhaustiveMaxN = 4;
constexpr std::size_t kRank2ExhaustiveMaxSize = 10;
constexpr std::size_t kRank2RandomCases = 500;
constexpr std::size_t kScalingVectors = 10'000;
constexpr std::size_t kScalingLength = 1'000;
constexpr double kScalingSeconds = 5.0;
constexpr double kScalingDrift = 1.5;
constexpr int kScalingRepeats = 7;
constexpr std::size_t kRepresentationSeeds = 100;
constexpr std::size_t kMaxSide = 7;
constexpr double kForsterSlack = 1e-9;
constexpr std::size_t kDualitySets = 100;
constexpr std::size_t kSweepSets = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

RealMatrix a1() {
  return RealMatrix::from_rows({{3.67, 3.46, 1.01}, {1.17, 2.34, 0.57}, {1.23, 0.72, 1.51}, {5.74, 12.5, 0.51}});
}

RealMatrix b1() {
  return RealMatrix::from_rows({{13.01, 12.4, 0.08}, {1.6, 8.52, -5.56}, {2.06, -3.23, 4.14}, {17.48, 25.26, -6.74}});
}

RealMatrix a4() {
  return RealMatrix::from_rows({{12, 13, 3, 10, 6}, {13, 14, 4, 9, 5}, {3, 4, 15, 11, 1}, {10, 9, 11, 8, 2}, {6, 5, 1, 2, 7}});
}

std::string signs_of(std::uint64_t mask, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (mask >> i & 1) ? '+' : '-';
  return s;
}

Outcome spectra() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sb = singular_values(b1());
  const auto sa = singular_values(a1());
  const double elapsed = seconds_since(t0);
  const std::vector<double> want_a{14.86, 2.42, 0.88};
  o.check(sa.size() == 3 && sb.size() == 3, "expected three singular values");
  if (!o.pass) return o;
  for (std::size_t k = 0; k < 3; ++k)
    o.check(std::abs(sa[k] - want_a[k]) <= kSpectrumTol, "A1 value " + std::to_string(k + 1) + " is " + fmt(sa[k]));
  o.check(std::abs(sb[0] - 37.01) <= kSpectrumTol, "B1 value 1 is " + fmt(sb[0]));
  o.check(std::abs(sb[1] - 8.94) <= kSpectrumTol, "B1 value 2 is " + fmt(sb[1]));
  o.check(sb[2] <= kRankDeficientTol, "B1 value 3 is " + fmt(sb[2]) + ", not <= 1e-9; B1 as printed has full rank 3");
  o.check(elapsed < kSpectrumSeconds, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "A1 " + fmt(sa[0]) + " " + fmt(sa[1]) + " " + fmt(sa[2]) + ", B1 " + fmt(sb[0]) + " " + fmt(sb[1]) +
                         " " + fmt(sb[2]);
  return o;
}

Outcome tope_sets() {
  Outcome o;
  const auto thresh = SignVectorSet::from_strings(
      {"+--+", "-++-", "+-+-", "-+-+", "++++", "----", "++-+", "--+-", "+++-", "---+", "+-++", "-+--"});
  const auto diff = SignVectorSet::from_strings({"+++", "++-", "--+", "---", "-+-", "+-+"});
  o.check(threshold_topes(a1()) == thresh, "threshold topes differ");
  o.check(difference_topes(a1()) == diff, "difference topes differ");
  o.check(threshold_vector(a1(), 1, 3.0).to_string() == "+--+", "sigma_2(3) is " + threshold_vector(a1(), 1, 3.0).to_string());
  o.check(difference_vector(a1(), 0, 2).to_string() == "++-", "sigma_13 is " + difference_vector(a1(), 0, 2).to_string());
  if (o.pass) o.detail = "12 threshold, 6 difference topes";
  return o;
}

Outcome pipeline() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto a = a4();
  o.check(radon_rank(a) == 2, "radon rank " + std::to_string(radon_rank(a)));
  const auto thresh = threshold_topes(a);
  const auto expected = SignVectorSet::from_strings(
      {"+--+0", "-++-0", "+--0-", "-++0+", "+-0+-", "-+0-+", "+0+-+", "-0-+-", "0++-+", "0--+-"});
  const auto pc = potential_circuits(thresh, 3);
  o.check(pc == expected, "potential circuits differ");
  std::map<IndexSet, std::size_t> per_support;
  for (const auto& x : pc) ++per_support[x.support()];
  o.check(per_support.size() == 5, "supports covered: " + std::to_string(per_support.size()));
  for (const auto& [s, k] : per_support) o.check(k == 2, "a support carries " + std::to_string(k) + " circuits");
  const auto r = uniform_completion(thresh.with_negations(), 3);
  o.check(!r.feasible, "rank 3 completion feasible");
  o.check(r.violation && r.violation->describe() == "C4: X=+--0-, Y=-+0-+, e=5",
          "witness " + (r.violation ? r.violation->describe() : std::string("missing")));
  AnalyzeOptions opt;
  opt.complete_d_max = 3;
  const auto report = analyze(a, opt);
  o.check(report.monotone_rank_lower_bound >= 3, "bound " + std::to_string(report.monotone_rank_lower_bound));
  const double elapsed = seconds_since(t0);
  o.check(elapsed < kPipelineSeconds, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "bound " + std::to_string(report.monotone_rank_lower_bound) + " in " + fmt(elapsed) + " s";
  return o;
}

Outcome hadamard_forster() {
  Outcome o;
  double last_seconds = 0;
  std::string bounds;
  for (std::size_t n = 1; n <= kHadamardMaxN; ++n) {
    const auto t0 = Clock::now();
    const double root = std::sqrt(static_cast<double>(std::size_t{1} << n));
    const auto h = hadamard(n);
    const double norm = spectral_norm(h);
    o.check(std::abs(norm - root) <= kHadamardRelTol * root, "n=" + std::to_string(n) + " norm " + fmt(norm));
    const double fb = forster_bound(h);
    o.check(std::abs(fb - root) <= kHadamardRelTol * root, "n=" + std::to_string(n) + " forster " + fmt(fb));
    const auto rows = hadamard_rows_pm(n);
    const auto encoded = encode_signs_as_matrix(rows);
    o.check(rows.is_subset_of(threshold_topes(encoded)), "n=" + std::to_string(n) + " rows not threshold topes");
    const auto report = analyze(encoded);
    const std::size_t need = certified_ceil(root) - 1;
    o.check(report.monotone_rank_lower_bound >= need,
            "n=" + std::to_string(n) + " bound " + std::to_string(report.monotone_rank_lower_bound) + " < " +
                std::to_string(need));
    bounds += (n > 1 ? " " : "") + std::to_string(report.monotone_rank_lower_bound);
    last_seconds = seconds_since(t0);
  }
  o.check(last_seconds < kHadamardSeconds, "n=5 took " + fmt(last_seconds) + " s");
  if (o.pass) o.detail = "bounds " + bounds + ", n=5 in " + fmt(last_seconds) + " s";
  return o;
}

// All zero-free sign vector families on n elements closed under negation,
// with at most max_size members.
void for_each_closed_family(std::size_t n, std::size_t max_size, const std::function<void(const SignVectorSet&)>& f) {
  std::vector<std::uint64_t> reps;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (!(m >> (n - 1) & 1)) reps.push_back(m);
  const std::size_t k = reps.size();
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << k); ++pick) {
    if (2 * static_cast<std::size_t>(std::popcount(pick)) > max_size) continue;
    std::vector<SignVector> members;
    for (std::size_t i = 0; i < k; ++i)
      if (pick >> i & 1) {
        members.push_back(SignVector::from_string(signs_of(reps[i], n)));
        members.push_back(SignVector::from_string(signs_of(~reps[i], n)));
      }
    f(SignVectorSet(n, std::move(members)));
  }
}

// One pass over the input words; the memory-bound floor for any O(mn) method.
double time_scan(const SignVectorSet& s) {
  double best = 1e300;
  volatile std::size_t sink = 0;
  for (int rep = 0; rep < kScalingRepeats; ++rep) {
    const auto t0 = Clock::now();
    std::size_t acc = 0;
    for (const auto& x : s) {
      for (auto w : x.positive_words()) acc += static_cast<std::size_t>(std::popcount(w));
      for (auto w : x.negative_words()) acc += static_cast<std::size_t>(std::popcount(w));
    }
    sink = sink + acc;
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

double time_rank2(const SignVectorSet& s, bool& result) {
  double best = 1e300;
  for (int rep = 0; rep < kScalingRepeats; ++rep) {
    const auto t0 = Clock::now();
    result = is_rank2_topes(s);
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

SignVectorSet random_family(std::mt19937_64& rng, std::size_t count, std::size_t length) {
  std::vector<SignVector> v;
  v.reserve(count);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < count; ++i) {
    SignVector x(length);
    for (std::size_t j = 0; j < length; ++j) x.set(j, coin(rng) ? Sign::Plus : Sign::Minus);
    v.push_back(std::move(x));
  }
  return SignVectorSet(length, std::move(v));
}

Outcome rank2() {
  Outcome o;
  const auto sig7 = SignVectorSet::from_strings({"++-", "+++", "+-+", "--+", "---", "-+-"});
  const auto sig52 = SignVectorSet::from_strings({"++++", "++--", "-+-+", "----", "--++", "+-+-"});
  o.check(is_rank2_topes(sig7), "SIG7 rejected");
  o.check(!is_rank2_topes(sig52), "SIG52 accepted");
  std::size_t compared = 0, disagreements = 0;
  for (std::size_t n = 1; n <= kRank2ExhaustiveMaxN; ++n)
    for_each_closed_family(n, kRank2ExhaustiveMaxSize, [&](const SignVectorSet& s) {
      ++compared;
      const bool expect = n <= 2 ? true : uniform_completion(s, 2).feasible;
      if (is_rank2_topes(s) != expect) ++disagreements;
    });
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 16);
  for (std::size_t t = 0; t < kRank2RandomCases; ++t) {
    const auto s = random_family(rng, size(rng), 5).with_negations();
    ++compared;
    if (is_rank2_topes(s) != uniform_completion(s, 2).feasible) ++disagreements;
  }
  o.check(disagreements == 0, std::to_string(disagreements) + " disagreements out of " + std::to_string(compared));

  // Doubling rows or length must not raise the cost per pass over the input.
  std::mt19937_64 big(7);
  const auto base = random_family(big, kScalingVectors, kScalingLength);
  const auto taller = random_family(big, 2 * kScalingVectors, kScalingLength);
  const auto longer = random_family(big, kScalingVectors, 2 * kScalingLength);
  bool r_base = false, r_taller = false, r_longer = false;
  const double t_base = time_rank2(base, r_base);
  const double t_taller = time_rank2(taller, r_taller);
  const double t_longer = time_rank2(longer, r_longer);
  const double passes_base = t_base / std::max(time_scan(base), 1e-9);
  const double drift_m = t_taller / std::max(time_scan(taller), 1e-9) / passes_base;
  const double drift_n = t_longer / std::max(time_scan(longer), 1e-9) / passes_base;
  o.check(t_base < kScalingSeconds, "10^4 x 10^3 took " + fmt(t_base) + " s");
  o.check(drift_m <= kScalingDrift, "cost per input pass drifts by " + fmt(drift_m) + " when rows double");
  o.check(drift_n <= kScalingDrift,
          "cost per input pass drifts by " + fmt(drift_n) + " when length doubles");
  if (o.pass)
    o.detail = std::to_string(compared) + " families agree; 10^4 x 10^3 in " + fmt(t_base) + " s (" + fmt(passes_base) +
               " input passes); doubling rows x" + fmt(t_taller / t_base) + ", length x" + fmt(t_longer / t_base) +
               "; per-pass drift " + fmt(drift_m) + ", " + fmt(drift_n);
  return o;
}

Outcome geometric_soundness() {
  Outcome o;
  std::size_t runs = 0;
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::uint64_t seed = 0; seed < kRepresentationSeeds; ++seed) {
      std::mt19937_64 rng(1000 * d + seed);
      std::uniform_int_distribution<std::size_t> side(d + 1, kMaxSide);
      const std::size_t m = side(rng), n = side(rng);
      const auto rep = random_representation(m, n, d, seed, DistortionChoice::Random);
      const std::string tag = "d=" + std::to_string(d) + " seed=" + std::to_string(seed) + ": ";
      const auto thresh = threshold_topes(rep.matrix);
      const auto diff = difference_topes(rep.matrix);
      o.check(thresh.is_subset_of(point_topes(rep.points)), tag + "threshold topes outside point topes");
      o.check(diff.is_subset_of(hyperplane_topes(rep.normals)), tag + "difference topes outside hyperplane topes");
      o.check(radon_rank(rep.matrix) <= d, tag + "radon rank too large");
      o.check(vc_rank(rep.matrix) <= d, tag + "vc rank too large");
      o.check(forster_bound_thresh(rep.matrix, thresh) <= static_cast<double>(d + 1) + kForsterSlack,
              tag + "threshold forster bound too large");
      o.check(forster_bound_diff(diff) <= static_cast<double>(d) + kForsterSlack, tag + "difference forster bound too large");
      const auto om = om_completion_rank_of_matrix(rep.matrix, d);
      o.check(!om.exceeds && om.rank <= d, tag + "om completion rank too large");
      o.check(vc_dimension(point_topes(rep.points)) == d + 1, tag + "point tope vc dimension");
      o.check(vc_dimension(hyperplane_topes(rep.normals)) == d, tag + "hyperplane tope vc dimension");
      ++runs;
    }
  if (o.pass) o.detail = std::to_string(runs) + " representations";
  return o;
}

Outcome duality() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::uint64_t seed = 0; seed < kDualitySets; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const std::size_t m = d + 2 + seed % (kMaxSide - d - 1);
    const auto p = random_general_position_points(m, d, 5000 + seed);
    const auto circuits = point_circuits(p);
    const auto topes = point_topes(p);
    const std::string tag = "seed=" + std::to_string(seed) + ": ";
    o.check(check_circuit_axioms(circuits).ok, tag + "circuit axioms fail");
    for (const auto& c : circuits.circuits)
      for (const auto& t : topes) {
        ++pairs;
        o.check(orthogonal(c, t), tag + c.to_string() + " not orthogonal to " + t.to_string());
      }
  }
  if (o.pass) o.detail = std::to_string(pairs) + " circuit/tope pairs";
  return o;
}

Outcome allowable() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < kSweepSets; ++seed) {
    const std::size_t m = 3 + seed % (kMaxSide - 2);
    const auto seq = sweep_permutations(random_simple_planar_points(m, 9000 + seed));
    const std::string tag = "seed=" + std::to_string(seed) + ": ";
    const auto v = validate_allowable(seq);
    o.check(v.valid, tag + v.message);
    o.check(v.simple, tag + "not simple");
    o.check(seq.size() == m * (m - 1), tag + "length " + std::to_string(seq.size()));
    const auto a = matrix_from_allowable(seq);
    o.check(column_permutations(a) == seq.permutations(), tag + "column permutations do not round-trip");
    o.check(radon_rank(a) <= 2, tag + "radon rank " + std::to_string(radon_rank(a)));
  }
  if (o.pass) o.detail = std::to_string(kSweepSets) + " configurations";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"distortion example spectra", spectra},
      {"threshold and difference tope sets", tope_sets},
      {"radon-strict circuit pipeline", pipeline},
      {"hadamard and forster bounds", hadamard_forster},
      {"rank-2 recognizer", rank2},
      {"geometric soundness", geometric_soundness},
      {"circuit/tope duality", duality},
      {"allowable sequences", allowable},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
