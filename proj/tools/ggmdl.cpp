// ggmdl: command-line front end for synthetic-data generation, MDL model
// selection, atypicality detection, and method benchmarking.
//
// Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggmdl/ggmdl.hpp"

namespace fs = std::filesystem;
using ggmdl::Json;

namespace {

// Thrown for validation problems CLI11 cannot catch itself (bad enum names,
// structure preconditions, inconsistent flag combinations). Maps to exit 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

int default_jobs() {
  if (const char* env = std::getenv("GGM_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

Json meta_block(const std::string& command_line, std::uint64_t seed, Json config) {
  Json m;
  m["version"] = ggmdl::kVersion;
  m["seed"] = seed;
  m["command"] = command_line;
  m["config"] = std::move(config);
  return m;
}

void write_json(const fs::path& path, const Json& j) {
  ggmdl::atomic_write_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------- gen ------

struct GenArgs {
  std::string structure = "ar1";
  int p = 20;
  int n = 100;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_gen(const GenArgs& a, const std::string& command_line) {
  ggmdl::GroundTruth gt;
  try {
    const ggmdl::StructureKind kind = ggmdl::structure_from_name(a.structure);
    gt = ggmdl::make_structure(kind, a.p, a.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.n < 1) throw UsageError("gen: --n must be >= 1");

  const ggmdl::Matrix data = ggmdl::sample_mvn(gt, a.n, a.seed + 0x9E3779B9u);

  Json config;
  config["structure"] = a.structure;
  config["p"] = a.p;
  config["n"] = a.n;
  config["out_dir"] = a.out_dir;

  Json truth;
  truth["meta"] = meta_block(command_line, a.seed, config);
  truth["structure"] = ggmdl::structure_name(gt.kind);
  truth["p"] = a.p;
  truth["n"] = a.n;
  truth["edges"] = ggmdl::edges_to_json(gt.graph);
  truth["edge_count"] = gt.graph.edge_count();
  truth["omega"] = ggmdl::matrix_to_json(gt.omega);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);  // ok if it already exists
  ggmdl::write_csv_matrix(dir / "data.csv", data);
  write_json(dir / "truth.json", truth);
  std::printf("wrote %s and %s (%d x %d, %d edges)\n",
              (dir / "data.csv").c_str(), (dir / "truth.json").c_str(), a.n,
              a.p, gt.graph.edge_count());
  return 0;
}

// ------------------------------------------------------------- select ------

struct SelectArgs {
  std::string data_path;
  std::string coder = "degree";
  int grid = 50;
  std::vector<double> lambdas;  // explicit grid, correlation scale
  std::string truth_path;
  std::string out_path = "selection.json";
  std::uint64_t seed = 0;  // recorded in output; selection itself is deterministic
};

int cmd_select(const SelectArgs& a, const std::string& command_line) {
  ggmdl::CoderKind kind;
  try {
    kind = ggmdl::coder_from_name(a.coder);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool explicit_grid = !a.lambdas.empty();
  if (!explicit_grid && a.grid < 2)
    throw UsageError("select: --grid must be >= 2 (or pass explicit --lambda values)");
  for (double l : a.lambdas)
    if (!(l > 0.0)) throw UsageError("select: --lambda values must be > 0");

  const ggmdl::Matrix data = ggmdl::read_csv_matrix(a.data_path);
  const ggmdl::SelectionResult sel =
      explicit_grid
          ? ggmdl::select_model(data, static_cast<int>(a.lambdas.size()), kind,
                                {}, {}, &a.lambdas)
          : ggmdl::select_model(data, a.grid, kind);

  Json config;
  config["data"] = a.data_path;
  config["coder"] = a.coder;
  config["grid"] = explicit_grid ? static_cast<int>(a.lambdas.size()) : a.grid;
  if (explicit_grid) config["lambdas"] = a.lambdas;
  config["truth"] = a.truth_path;
  config["out"] = a.out_path;

  Json j = ggmdl::selection_result_to_json(sel);
  j["meta"] = meta_block(command_line, a.seed, config);

  std::optional<double> f1;
  if (!a.truth_path.empty()) {
    const Json truth = Json::parse(ggmdl::read_file(a.truth_path));
    const ggmdl::Graph gt = ggmdl::graph_from_json(truth.at("p").get<int>(),
                                                   truth.at("edges"));
    f1 = ggmdl::f1_score(sel.best().graph, gt).f1;
    j["f1"] = *f1;
  }

  write_json(a.out_path, j);
  std::printf("best lambda %.6g, %d edges, %.2f bits\n", sel.best().lambda,
              sel.best().graph.edge_count(), sel.best().total_bits);
  if (f1) std::printf("f1 against truth: %.4f\n", *f1);
  return 0;
}

// ------------------------------------------------------------- detect ------

struct DetectArgs {
  std::string train_path;
  std::string model_in;
  std::string model_out = "model.json";
  std::string score_path;
  std::string out_path;  // empty: JSON lines to stdout
  std::string coder = "degree";
  int grid = 50;
  int batch = 100;
  double threshold = 0.0;
  std::uint64_t seed = 0;
};

int cmd_detect(const DetectArgs& a, const std::string& command_line) {
  ggmdl::CoderKind kind;
  try {
    kind = ggmdl::coder_from_name(a.coder);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.train_path.empty() && a.model_in.empty())
    throw UsageError("detect: need --train or --model");
  if (!a.train_path.empty() && !a.model_in.empty())
    throw UsageError("detect: --train and --model are mutually exclusive");
  if (a.grid < 2) throw UsageError("detect: --grid must be >= 2");
  if (a.batch < 2) throw UsageError("detect: --batch must be >= 2");

  Json config;
  config["train"] = a.train_path;
  config["model"] = a.model_in;
  config["model_out"] = a.model_out;
  config["score"] = a.score_path;
  config["out"] = a.out_path;
  config["coder"] = a.coder;
  config["grid"] = a.grid;
  config["batch"] = a.batch;
  config["threshold"] = a.threshold;

  ggmdl::TypicalModel model;
  if (!a.train_path.empty()) {
    const ggmdl::Matrix train = ggmdl::read_csv_matrix(a.train_path);
    model = ggmdl::train_typical(train, kind, {}, a.grid);
    Json mj = ggmdl::typical_model_to_json(model);
    mj["meta"] = meta_block(command_line, a.seed, config);
    write_json(a.model_out, mj);
    std::printf("trained typical model: %d vertices, %d edges, lambda %.6g -> %s\n",
                model.graph.vertex_count(), model.graph.edge_count(),
                model.best_lambda, a.model_out.c_str());
  } else {
    model = ggmdl::typical_model_from_json(Json::parse(ggmdl::read_file(a.model_in)));
  }

  if (a.score_path.empty()) return 0;

  const ggmdl::Matrix test = ggmdl::read_csv_matrix(a.score_path);
  if (test.cols() != model.sigma_check.rows())
    throw std::runtime_error("detect: test data has " + std::to_string(test.cols()) +
                             " columns but the model has " +
                             std::to_string(model.sigma_check.rows()));
  const int batches = static_cast<int>(test.rows()) / a.batch;
  if (batches < 1)
    throw std::runtime_error("detect: test data has fewer rows than one batch");

  std::ostringstream lines;
  int flagged = 0;
  for (int b = 0; b < batches; ++b) {
    const ggmdl::Matrix chunk = test.middleRows(b * a.batch, a.batch);
    const ggmdl::AtypicalityScore s =
        ggmdl::atypicality(chunk, model, {}, a.grid, a.threshold);
    Json line;
    line["batch_id"] = b;
    line["typical_bits"] = s.typical_bits;
    line["atypical_bits"] = s.atypical_bits;
    line["score"] = s.score;
    line["anomalous"] = s.anomalous;
    lines << line.dump() << "\n";
    if (s.anomalous) ++flagged;
  }

  if (a.out_path.empty()) {
    std::fputs(lines.str().c_str(), stdout);
  } else {
    ggmdl::atomic_write_file(a.out_path, lines.str());
  }
  std::fprintf(stderr, "scored %d batches of %d, %d anomalous\n", batches,
               a.batch, flagged);
  return 0;
}

// -------------------------------------------------------------- bench ------

struct BenchArgs {
  std::string preset;
  std::vector<std::string> kinds;
  std::vector<std::string> sizes;
  std::vector<std::string> methods;
  int trials = 10;
  std::uint64_t seed = 1;
  int jobs = default_jobs();
  int grid = 50;
  std::string out_csv = "bench.csv";
  std::string out_json = "bench.json";
  bool quiet = false;
};

ggmdl::SizeSpec parse_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw UsageError("bench: size \"" + s + "\" is not of the form PxN (e.g. 40x80)");
  try {
    ggmdl::SizeSpec out;
    out.p = std::stoi(s.substr(0, x));
    out.n = std::stoi(s.substr(x + 1));
    if (out.p < 2 || out.n < 2) throw std::invalid_argument("too small");
    return out;
  } catch (const std::exception&) {
    throw UsageError("bench: cannot parse size \"" + s + "\"");
  }
}

// Tables I/II layout: one row per (structure, size), fixed method columns.
const std::vector<ggmdl::Method> kCsvMethods = {
    ggmdl::Method::CV,       ggmdl::Method::BIC,    ggmdl::Method::EBIC,
    ggmdl::Method::DegreeMdl, ggmdl::Method::IidMdl, ggmdl::Method::TriangleMdl};

std::string bench_csv(const std::vector<ggmdl::BenchmarkRow>& rows) {
  std::ostringstream out;
  out << "Type,p,N,CV,BIC,EBIC,Degree,IID,Triangle\n";
  // rows arrive grouped by (kind, size) with methods contiguous
  for (size_t i = 0; i < rows.size();) {
    size_t j = i;
    while (j < rows.size() && rows[j].kind == rows[i].kind &&
           rows[j].p == rows[i].p && rows[j].n == rows[i].n)
      ++j;
    out << ggmdl::structure_name(rows[i].kind) << ',' << rows[i].p << ','
        << rows[i].n;
    for (ggmdl::Method m : kCsvMethods) {
      out << ',';
      for (size_t k = i; k < j; ++k)
        if (rows[k].method == m) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.4f", rows[k].mean_f1);
          out << buf;
          break;
        }
    }
    out << '\n';
    i = j;
  }
  return out.str();
}

int cmd_bench(const BenchArgs& a, const std::string& command_line) {
  BenchArgs r = a;  // resolved
  if (!r.preset.empty()) {
    if (r.preset == "table1-desk") {
      if (r.kinds.empty()) r.kinds = {"cycle", "ar1"};
      if (r.sizes.empty()) r.sizes = {"40x80"};
    } else if (r.preset == "table2-desk") {
      if (r.kinds.empty()) r.kinds = {"cycle", "ar1"};
      if (r.sizes.empty()) r.sizes = {"40x20"};
    } else {
      throw UsageError("bench: unknown preset \"" + r.preset +
                       "\" (table1-desk|table2-desk)");
    }
  }
  if (r.kinds.empty()) throw UsageError("bench: need --kinds or --preset");
  if (r.sizes.empty()) throw UsageError("bench: need --sizes or --preset");
  if (r.methods.empty())
    r.methods = {"cv", "bic", "ebic", "degree", "iid", "triangle"};
  if (r.trials < 1) throw UsageError("bench: --trials must be >= 1");
  if (r.jobs < 1) throw UsageError("bench: --jobs must be >= 1");
  if (r.grid < 2) throw UsageError("bench: --grid must be >= 2");

  std::vector<ggmdl::StructureKind> kinds;
  std::vector<ggmdl::SizeSpec> sizes;
  std::vector<ggmdl::Method> methods;
  try {
    for (const auto& k : r.kinds) kinds.push_back(ggmdl::structure_from_name(k));
    for (const auto& m : r.methods) methods.push_back(ggmdl::method_from_name(m));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& s : r.sizes) sizes.push_back(parse_size(s));

  ggmdl::BenchmarkOptions opt;
  opt.grid_size = r.grid;
  opt.trials = r.trials;
  opt.seed = r.seed;
  opt.jobs = r.jobs;
  if (!r.quiet)
    opt.progress = [](const std::string& msg) {
      std::fprintf(stderr, "%s\n", msg.c_str());
    };

  std::vector<ggmdl::TrialDetail> details;
  const std::vector<ggmdl::BenchmarkRow> rows =
      ggmdl::run_benchmark(kinds, sizes, methods, opt, &details);

  ggmdl::atomic_write_file(r.out_csv, bench_csv(rows));

  Json config;
  config["preset"] = r.preset;
  config["kinds"] = r.kinds;
  config["sizes"] = r.sizes;
  config["methods"] = r.methods;
  config["trials"] = r.trials;
  config["jobs"] = r.jobs;
  config["grid"] = r.grid;
  config["out_csv"] = r.out_csv;
  config["out_json"] = r.out_json;

  Json jrows = Json::array();
  for (const auto& row : rows) {
    Json jr;
    jr["type"] = ggmdl::structure_name(row.kind);
    jr["p"] = row.p;
    jr["n"] = row.n;
    jr["method"] = ggmdl::method_name(row.method);
    jr["mean_f1"] = row.mean_f1;
    jr["trials_done"] = row.trials_done;
    jr["failures"] = row.failures;
    jrows.push_back(std::move(jr));
  }
  Json jtrials = Json::array();
  for (const auto& d : details) {
    Json jt;
    jt["type"] = ggmdl::structure_name(d.kind);
    jt["p"] = d.p;
    jt["n"] = d.n;
    jt["trial"] = d.trial;
    jt["method"] = ggmdl::method_name(d.method);
    jt["f1"] = d.f1;
    jt["selected_lambda"] = d.selected_lambda;
    jt["selected_edges"] = d.selected_edges;
    jt["failed"] = d.failed;
    jtrials.push_back(std::move(jt));
  }
  Json j;
  j["meta"] = meta_block(command_line, r.seed, config);
  j["rows"] = std::move(jrows);
  j["trials"] = std::move(jtrials);
  write_json(r.out_json, j);

  std::fputs(bench_csv(rows).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command_line = join_args(argc, argv);

  CLI::App app{"Gaussian graphical model selection by minimum description length"};
  app.require_subcommand(1);

  GenArgs ga;
  CLI::App* gen = app.add_subcommand("gen", "generate synthetic data + ground truth");
  gen->add_option("--structure", ga.structure, "cycle|ar1|ar2|er|hub")
      ->capture_default_str();
  gen->add_option("--p", ga.p, "number of variables")->capture_default_str();
  gen->add_option("--n", ga.n, "number of samples")->capture_default_str();
  gen->add_option("--seed", ga.seed, "random seed")->capture_default_str();
  gen->add_option("--out-dir", ga.out_dir, "output directory")->capture_default_str();

  SelectArgs sa;
  CLI::App* select = app.add_subcommand("select", "MDL model selection on CSV data");
  select->add_option("--data", sa.data_path, "input CSV (rows = observations)")
      ->required();
  select->add_option("--coder", sa.coder, "degree|iid|triangle")->capture_default_str();
  select->add_option("--grid", sa.grid, "lambda grid size")->capture_default_str();
  select->add_option("--lambda", sa.lambdas,
                     "explicit lambda values on the correlation scale "
                     "(overrides --grid)");
  select->add_option("--truth", sa.truth_path, "truth.json for F1 report");
  select->add_option("--out", sa.out_path, "output JSON path")->capture_default_str();
  select->add_option("--seed", sa.seed, "seed recorded in output")->capture_default_str();

  DetectArgs da;
  CLI::App* detect = app.add_subcommand("detect", "train typical model / score batches");
  detect->add_option("--train", da.train_path, "training CSV (typical data)");
  detect->add_option("--model", da.model_in, "load typical model JSON instead of training");
  detect->add_option("--model-out", da.model_out, "where to save the trained model")
      ->capture_default_str();
  detect->add_option("--score", da.score_path, "CSV of batches to score");
  detect->add_option("--out", da.out_path, "JSON-lines output (default: stdout)");
  detect->add_option("--coder", da.coder, "degree|iid|triangle")->capture_default_str();
  detect->add_option("--grid", da.grid, "lambda grid size")->capture_default_str();
  detect->add_option("--batch", da.batch, "rows per scored batch")->capture_default_str();
  detect->add_option("--threshold", da.threshold,
                     "score threshold: score < threshold flags anomalous")
      ->capture_default_str();
  detect->add_option("--seed", da.seed, "seed recorded in output")->capture_default_str();

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "benchmark selection methods");
  bench->add_option("--preset", ba.preset, "table1-desk|table2-desk");
  bench->add_option("--kinds", ba.kinds, "structures (cycle ar1 ar2 er hub)")
      ->delimiter(',');
  bench->add_option("--sizes", ba.sizes, "sizes as PxN, e.g. 40x80")->delimiter(',');
  bench->add_option("--methods", ba.methods, "cv bic ebic degree iid triangle")
      ->delimiter(',');
  bench->add_option("--trials", ba.trials, "trials per cell")->capture_default_str();
  bench->add_option("--seed", ba.seed, "master seed")->capture_default_str();
  bench->add_option("--jobs", ba.jobs, "worker threads (default: GGM_JOBS or 1)")
      ->capture_default_str();
  bench->add_option("--grid", ba.grid, "lambda grid size")->capture_default_str();
  bench->add_option("--out-csv", ba.out_csv, "summary CSV path")->capture_default_str();
  bench->add_option("--out-json", ba.out_json, "per-trial JSON path")->capture_default_str();
  bench->add_flag("--quiet", ba.quiet, "suppress progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exits 0; any parse failure is usage
  }

  try {
    if (gen->parsed()) return cmd_gen(ga, command_line);
    if (select->parsed()) return cmd_select(sa, command_line);
    if (detect->parsed()) return cmd_detect(da, command_line);
    if (bench->parsed()) return cmd_bench(ba, command_line);
    std::fprintf(stderr, "no subcommand given\n");
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
