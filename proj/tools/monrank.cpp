// monrank: lower bounds on the monotone rank of a real matrix, plus the
// generators and sign-vector tools used to check them.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "monrank/monrank.hpp"

namespace {

using monrank::Json;

enum ExitCode { kOk = 0, kOther = 1, kFormat = 2, kGenericity = 3, kResource = 4 };

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw monrank::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

monrank::RealMatrix load_matrix(const std::string& path) { return monrank::parse_matrix(slurp(path)); }

monrank::SignVectorSet load_signs(const std::string& path) {
  std::istringstream in(slurp(path));
  return monrank::read_sign_vector_set(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw monrank::Error("cannot write " + path);
  out << text;
}

Json points_json(const std::vector<monrank::Point>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

Json distortion_json(const monrank::MonotoneDistortion& f) {
  Json j;
  j["kind"] = f.kind_name();
  switch (f.kind) {
    case monrank::MonotoneDistortion::Kind::ExpScale:
      j["alpha"] = f.alpha;
      break;
    case monrank::MonotoneDistortion::Kind::PowerOdd:
      j["power"] = f.power;
      break;
    case monrank::MonotoneDistortion::Kind::PiecewiseLinear:
      j["xs"] = f.xs;
      j["ys"] = f.ys;
      break;
    case monrank::MonotoneDistortion::Kind::Identity:
      break;
  }
  return j;
}

Json completion_json(const monrank::CompletionResult& r, std::size_t d) {
  Json j;
  j["d"] = d;
  j["feasible"] = r.feasible;
  j["timed_out"] = r.timed_out;
  j["nodes"] = r.nodes;
  j["witness"] = r.witness ? monrank::to_json(r.witness->circuits) : Json(nullptr);
  j["violation"] = r.violation ? monrank::to_json(*r.violation) : Json(nullptr);
  return j;
}

Json error_json(const char* kind, const std::string& message) { return Json{{"error", kind}, {"message", message}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial lower bounds on the monotone rank of a real matrix"};
  app.require_subcommand(1);

  std::string input;
  std::size_t d_max = 0;
  bool svd = false, topes = false, perturb = false;
  unsigned threads = 1;
  auto* analyze = app.add_subcommand("analyze", "Report every lower bound for a CSV matrix");
  analyze->add_option("matrix", input, "CSV file, or - for stdin")->required();
  auto* complete_opt = analyze->add_option("--complete,--d-max", d_max, "Run the oriented matroid completion up to this rank");
  analyze->add_flag("--svd", svd, "Include singular values");
  analyze->add_flag("--topes", topes, "Include the threshold and difference topes");
  analyze->add_flag("--perturb-ties", perturb, "Break tied column entries instead of failing");
  analyze->add_option("--threads", threads, "Worker threads for the VC searches")->check(CLI::Range(1u, 256u));

  std::size_t gm = 0, gn = 0, gd = 0;
  std::uint64_t seed = 0;
  std::string distortion = "random", out_path, provenance_path;
  auto* generate = app.add_subcommand("generate", "Random matrix of monotone rank at most d");
  generate->add_option("--m", gm, "Rows")->required()->check(CLI::PositiveNumber);
  generate->add_option("--n", gn, "Columns")->required()->check(CLI::PositiveNumber);
  generate->add_option("--d", gd, "Dimension")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--distortion", distortion, "random, identity, exp, power or pwl");
  generate->add_option("--out", out_path, "Matrix CSV path (default stdout)");
  generate->add_option("--provenance", provenance_path, "Write points, normals, distortions and seed as JSON");

  std::size_t order = 0;
  bool pm_rows = false;
  auto* had = app.add_subcommand("hadamard", "Sylvester Hadamard matrix of size 2^n as CSV");
  had->add_option("n", order, "Order")->required();
  had->add_flag("--signs", pm_rows, "Print the rows and their negations as sign vectors instead");

  auto* encode = app.add_subcommand("encode", "Matrix whose threshold topes contain the given sign vectors");
  encode->add_option("signs", input, "Sign-vector file, or - for stdin")->required();

  auto* isrank2 = app.add_subcommand("isrank2", "Do the sign vectors lie in the topes of a rank-2 oriented matroid?");
  isrank2->add_option("signs", input, "Sign-vector file, or - for stdin")->required();

  std::size_t rank = 0;
  auto* complete = app.add_subcommand("complete", "Uniform oriented matroid completion at a fixed rank");
  complete->add_option("signs", input, "Sign-vector file, or - for stdin")->required();
  complete->add_option("d", rank, "Rank")->required();

  bool sweep_matrix = false;
  auto* sweep = app.add_subcommand("sweep", "Allowable sequence of a planar point set");
  sweep->add_option("points", input, "CSV of x,y rows, or - for stdin")->required();
  sweep->add_flag("--matrix", sweep_matrix, "Print the matrix whose columns realize the sequence");

  auto* validate = app.add_subcommand("validate", "Check an allowable sequence");
  validate->add_option("sequence", input, "One permutation per line, or - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      monrank::AnalyzeOptions opt;
      if (*complete_opt) opt.complete_d_max = d_max;
      opt.singular_values = svd;
      opt.include_topes = topes;
      opt.perturb_ties = perturb;
      opt.threads = threads;
      const auto report = monrank::analyze(load_matrix(input), opt);
      std::cout << monrank::to_json(report).dump(2) << '\n';
    } else if (*generate) {
      const auto rep = monrank::random_representation(gm, gn, gd, seed, monrank::parse_distortion_choice(distortion));
      std::ostringstream csv;
      monrank::write_matrix_csv(csv, rep.matrix);
      write_text(out_path, csv.str());
      if (!provenance_path.empty()) {
        Json p;
        p["seed"] = rep.seed;
        p["m"] = gm;
        p["n"] = gn;
        p["d"] = gd;
        p["distortion"] = distortion;
        p["attempts"] = rep.attempts;
        p["points"] = points_json(rep.points.points);
        p["normals"] = points_json(rep.normals.normals);
        Json fs = Json::array();
        for (const auto& f : rep.distortions) fs.push_back(distortion_json(f));
        p["distortions"] = std::move(fs);
        write_text(provenance_path, p.dump(2) + "\n");
      }
    } else if (*had) {
      if (pm_rows) {
        monrank::write_sign_vectors(std::cout, monrank::hadamard_rows_pm(order));
      } else {
        monrank::write_matrix_csv(std::cout, monrank::hadamard(order).values());
      }
    } else if (*encode) {
      monrank::write_matrix_csv(std::cout, monrank::encode_signs_as_matrix(load_signs(input)));
    } else if (*isrank2) {
      std::cout << Json{{"rank2", monrank::is_rank2_topes(load_signs(input))}}.dump() << '\n';
    } else if (*complete) {
      const auto signs = load_signs(input);
      std::cout << completion_json(monrank::uniform_completion(signs.with_negations(), rank), rank).dump(2) << '\n';
    } else if (*sweep) {
      const auto seq = monrank::sweep_permutations(monrank::PointArrangement::from_matrix(load_matrix(input)));
      if (sweep_matrix) {
        monrank::write_matrix_csv(std::cout, monrank::matrix_from_allowable(seq));
      } else {
        monrank::write_allowable(std::cout, seq);
      }
    } else if (*validate) {
      const auto report = monrank::validate_allowable(monrank::parse_allowable(slurp(input)));
      Json j{{"valid", report.valid}, {"simple", report.simple}};
      if (!report.valid) {
        j["condition"] = report.condition;
        j["position"] = report.position;
        j["message"] = report.message;
      }
      std::cout << j.dump() << '\n';
      return report.valid ? kOk : kOther;
    }
  } catch (const monrank::FormatError& e) {
    std::cerr << error_json("format", e.what()).dump() << '\n';
    return kFormat;
  } catch (const monrank::GenericityError& e) {
    std::cerr << error_json("genericity", e.what()).dump() << '\n';
    return kGenericity;
  } catch (const monrank::ResourceError& e) {
    std::cerr << error_json("resource", e.what()).dump() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << error_json("error", e.what()).dump() << '\n';
    return kOther;
  }
  return kOk;
}
