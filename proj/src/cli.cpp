#include "mlsched/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mlsched/bench.hpp"
#include "mlsched/core.hpp"
#include "mlsched/encoder.hpp"
#include "mlsched/exact.hpp"
#include "mlsched/features.hpp"
#include "mlsched/heuristics.hpp"
#include "mlsched/learn.hpp"
#include "text_util.hpp"

#ifndef MLSCHED_DEFAULT_MODEL
#define MLSCHED_DEFAULT_MODEL "data/reference_model.txt"
#endif

namespace mlsched {

std::string reference_model_path() {
  if (const char* env = std::getenv("MLSCHED_REFERENCE_MODEL"); env && *env) return env;
  return MLSCHED_DEFAULT_MODEL;
}

namespace {

namespace fs = std::filesystem;

// Raised for semantic usage errors detected after parsing (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(std::ostream& out, const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    out << text;
  else
    detail::write_file(path, text);
}

std::vector<double> default_rhos() { return {std::begin(kRhoGrid), std::end(kRhoGrid)}; }

struct GenerateArgs {
  int n = 0;
  double rho = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct FeaturesArgs {
  std::string instance;
  std::string out;
  std::string scaling = "raw";
};

struct SolveArgs {
  std::string heuristic;
  std::string instance;
  std::string model;
  int m = 150;
  std::uint64_t seed = 0;
  std::optional<double> time_limit;
  int threads = 1;
  std::string format = "text";
};

struct ExactArgs {
  std::string instance;
  std::optional<std::uint64_t> limit_nodes;
  std::optional<double> time_limit;
  std::string warm_model;
};

struct TrainArgs {
  std::string train_dir;
  std::string out;
  int samples = 100;
  std::uint64_t seed = 0;
  std::string labeler = "exact";
  std::vector<int> sizes{6, 8, 10};
  std::vector<double> rhos = default_rhos();
  int per_cell = 20;
  std::string label_model;
  bool rebuild = false;
  std::string optimizer = "lbfgs";
  int max_iterations = 500;
  double tolerance = 1e-6;
  std::string scaling = "raw";
  std::string log;
  int threads = 1;
};

struct BenchArgs {
  std::vector<int> sizes;
  std::vector<double> rhos = default_rhos();
  int per_cell = 10;
  std::vector<std::string> heuristics;
  std::string model;
  std::uint64_t seed = 0;
  std::string reference = "best-known";
  std::optional<double> time_limit;
  int m = 150;
  int threads = 1;
  std::string out;
};

int run_generate(const GenerateArgs& a, std::ostream& out) {
  emit(out, format_instance(generate_instance(a.n, a.rho, a.seed)), a.out);
  return 0;
}

int run_features(const FeaturesArgs& a, std::ostream& out) {
  const FeatureMatrix f = compute_features(read_instance(a.instance), parse_feature_scaling(a.scaling));
  const auto names = feature_names();
  std::string csv;
  for (std::size_t k = 0; k < names.size(); ++k) csv += (k ? "," : "") + names[k];
  csv += '\n';
  for (Eigen::Index j = 0; j < f.rows(); ++j) {
    for (Eigen::Index k = 0; k < f.cols(); ++k) csv += fmt::format("{}{}", k ? "," : "", f(j, k));
    csv += '\n';
  }
  emit(out, csv, a.out);
  return 0;
}

Model load_model_or_default(const std::string& path) {
  return read_model(path.empty() ? reference_model_path() : path);
}

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = read_instance(a.instance);
  std::optional<Model> model;
  if (a.heuristic == "pmlh" || a.heuristic == "imlh" || a.heuristic == "itmlh") model = load_model_or_default(a.model);
  const HeuristicParams params{model ? &*model : nullptr, a.m, a.seed, a.time_limit, a.threads};
  const SolveReport r = run_heuristic(a.heuristic, inst, params);
  const auto& c = r.counters;
  if (a.format == "csv") {
    out << "heuristic,objective,order,wall_seconds,distinct_sequences,ls_calls,rdi_calls,memo_hits,truncated\n";
    out << fmt::format("{},{},{},{:.6f},{},{},{},{},{}\n", r.heuristic, r.schedule.objective,
                       format_order(r.schedule.order), r.wall_seconds, c.distinct_sequences, c.ls_calls, c.rdi_calls,
                       c.memo_hits, r.truncated);
  } else {
    out << fmt::format("heuristic: {}\norder: {}\nobjective: {}\nwall_seconds: {:.6f}\n", r.heuristic,
                       format_order(r.schedule.order), r.schedule.objective, r.wall_seconds);
    out << fmt::format("distinct_sequences: {}\nls_calls: {}\nrdi_calls: {}\nmemo_hits: {}\ntruncated: {}\n",
                       c.distinct_sequences, c.ls_calls, c.rdi_calls, c.memo_hits, r.truncated);
  }
  return 0;
}

int run_exact(const ExactArgs& a, std::ostream& out) {
  const Instance inst = read_instance(a.instance);
  std::optional<Model> warm;
  if (!a.warm_model.empty()) warm = read_model(a.warm_model);
  BnbOptions opt;
  opt.node_limit = a.limit_nodes;
  opt.time_limit_seconds = a.time_limit;
  opt.warm_start = warm ? &*warm : nullptr;
  const BnbResult r = bnb_solve(inst, opt);
  out << fmt::format("order: {}\nobjective: {}\nproven_optimal: {}\n", format_order(r.schedule.order),
                     r.schedule.objective, r.stats.proven_optimal);
  out << fmt::format("nodes_explored: {}\nnodes_pruned: {}\ninitial_incumbent: {}\nwall_seconds: {:.6f}\n",
                     r.stats.nodes_explored, r.stats.nodes_pruned, r.stats.initial_incumbent, r.stats.wall_seconds);
  return 0;
}

int run_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path dir(a.train_dir);
  std::vector<TrainingExample> examples;
  if (!a.rebuild && fs::exists(dir / "labels.txt")) {
    examples = load_training_set(dir);
    err << fmt::format("loaded {} examples from {}\n", examples.size(), dir.string());
  } else {
    std::optional<Model> label_model;
    if (!a.label_model.empty()) label_model = read_model(a.label_model);
    TrainingSetConfig tc;
    tc.sizes = a.sizes;
    tc.rhos = a.rhos;
    tc.per_cell = a.per_cell;
    tc.seed = a.seed;
    tc.labeler = a.labeler == "exact" ? Labeler::kExact : Labeler::kHeuristic;
    tc.label_model = label_model ? &*label_model : nullptr;
    tc.threads = a.threads;
    examples = build_training_set(tc);
    save_training_set(examples, dir);
    err << fmt::format("built {} examples into {}\n", examples.size(), dir.string());
  }

  SaaConfig sc;
  sc.samples = a.samples;
  sc.seed = a.seed;
  sc.gradient_tolerance = a.tolerance;
  sc.max_iterations = a.max_iterations;
  sc.optimizer = a.optimizer == "lbfgs" ? Optimizer::kLbfgs : Optimizer::kSubgradient;
  sc.threads = a.threads;
  sc.scaling = parse_feature_scaling(a.scaling);

  std::ofstream log_file;
  std::ostream* log = &out;
  if (!a.log.empty()) {
    log_file.open(a.log);
    if (!log_file) throw std::runtime_error(fmt::format("cannot open log file {}", a.log));
    log = &log_file;
  }
  auto on_iteration = [&](const IterationLog& it) {
    nlohmann::json line{{"iteration", it.iteration},
                        {"value", it.value},
                        {"gradient_norm", it.gradient_norm},
                        {"step", it.step},
                        {"evaluations", it.evaluations}};
    *log << line.dump() << '\n';
  };
  const TrainResult r = train(examples, sc, on_iteration);
  nlohmann::json summary{{"done", true},
                         {"iterations", r.iterations},
                         {"value", r.value},
                         {"gradient_norm", r.gradient_norm},
                         {"converged", r.converged},
                         {"stop_reason", r.stop_reason},
                         {"model", a.out}};
  *log << summary.dump() << '\n';
  write_model(r.model, a.out);
  return 0;
}

int run_bench(BenchArgs a, std::ostream& out) {
  std::erase(a.heuristics, std::string());
  if (a.heuristics.empty()) throw UsageError("bench: --heuristics must name at least one heuristic");
  for (const auto& h : a.heuristics)
    if (!is_known_heuristic(h)) throw UsageError(fmt::format("bench: unknown heuristic \"{}\"", h));
  if (a.sizes.empty()) throw UsageError("bench: --sizes must list at least one size");

  std::optional<Model> model;
  const bool need_model = std::any_of(a.heuristics.begin(), a.heuristics.end(),
                                      [](const std::string& h) { return h == "pmlh" || h == "imlh" || h == "itmlh"; });
  if (need_model) model = load_model_or_default(a.model);

  BenchConfig bc;
  bc.sizes = a.sizes;
  bc.rhos = a.rhos;
  bc.per_cell = a.per_cell;
  bc.heuristics = a.heuristics;
  bc.model = model ? &*model : nullptr;
  bc.seed = a.seed;
  bc.reference = a.reference == "optimal" ? ReferenceKind::kOptimal : ReferenceKind::kBestKnown;
  bc.time_limit_seconds = a.time_limit;
  bc.m = a.m;
  bc.threads = a.threads;
  emit(out, bench_csv(run_benchmark(bc).rows), a.out);
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning-based heuristics for single-machine scheduling with release dates (1|r_j|sum C_j)",
               "mlsched"};
  app.require_subcommand(1);
  app.footer("Jobs are numbered from 1 in files and output. MLSCHED_THREADS sets the default worker count.");
  const int threads = default_thread_count();

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a random instance");
  g->add_option("--n", gen.n, "Number of jobs")->required()->check(CLI::PositiveNumber);
  g->add_option("--rho", gen.rho, "Release-date spread factor")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output file (stdout if omitted)");

  FeaturesArgs feat;
  auto* f = app.add_subcommand("features", "Print the per-job feature matrix as CSV");
  f->add_option("--instance", feat.instance, "Instance file")->required()->check(CLI::ExistingFile);
  f->add_option("--out", feat.out, "Output file (stdout if omitted)");
  f->add_option("--scaling", feat.scaling, "Feature scaling: raw or column-sum")
      ->capture_default_str()
      ->check(CLI::IsMember({"raw", "column-sum"}));

  SolveArgs sol;
  sol.threads = threads;
  auto* s = app.add_subcommand("solve", "Solve an instance with one heuristic");
  s->add_option("--heuristic", sol.heuristic, "Heuristic")
      ->required()
      ->check(CLI::IsMember({"pmlh", "imlh", "itmlh", "rand", "spt"}));
  s->add_option("--instance", sol.instance, "Instance file")->required()->check(CLI::ExistingFile);
  s->add_option("--model", sol.model, "Model file (default: shipped reference model)")->check(CLI::ExistingFile);
  s->add_option("--m", sol.m, "Number of perturbed models for itmlh")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--seed", sol.seed, "Seed for itmlh perturbations and rand")->capture_default_str();
  s->add_option("--time-limit", sol.time_limit, "Wall-clock limit in seconds for itmlh")->check(CLI::PositiveNumber);
  s->add_option("--threads", sol.threads, "Worker threads for itmlh")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--format", sol.format, "Output format")->capture_default_str()->check(CLI::IsMember({"text", "csv"}));

  TrainArgs tr;
  tr.threads = threads;
  auto* t = app.add_subcommand("train", "Build or load a training set and fit a model");
  t->add_option("--train-dir", tr.train_dir, "Training set directory; built there if it has no labels.txt")->required();
  t->add_option("--out", tr.out, "Output model file")->required();
  t->add_option("--samples", tr.samples, "Perturbation samples M")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--seed", tr.seed, "Seed for the training set and the perturbation samples")->capture_default_str();
  t->add_option("--labeler", tr.labeler, "Labeling method for a new training set")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "heuristic"}));
  t->add_option("--sizes", tr.sizes, "Instance sizes for a new training set")->delimiter(',')->capture_default_str();
  t->add_option("--rhos", tr.rhos, "Rho values for a new training set")->delimiter(',');
  t->add_option("--per-cell", tr.per_cell, "Instances per (n, rho) cell")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--label-model", tr.label_model, "Model used by the heuristic labeler")->check(CLI::ExistingFile);
  t->add_flag("--rebuild", tr.rebuild, "Rebuild the training set even if labels.txt exists");
  t->add_option("--optimizer", tr.optimizer, "Optimizer")
      ->capture_default_str()
      ->check(CLI::IsMember({"lbfgs", "subgradient"}));
  t->add_option("--max-iter", tr.max_iterations, "Iteration limit")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--tol", tr.tolerance, "Relative gradient-norm tolerance")->capture_default_str();
  t->add_option("--feature-scaling", tr.scaling, "Feature scaling used in training and stored in the model")
      ->capture_default_str()
      ->check(CLI::IsMember({"raw", "column-sum"}));
  t->add_option("--log", tr.log, "JSON-lines log file (stdout if omitted)");
  t->add_option("--threads", tr.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Solve an instance to optimality by branch-and-bound");
  e->add_option("--instance", ex.instance, "Instance file")->required()->check(CLI::ExistingFile);
  e->add_option("--limit-nodes", ex.limit_nodes, "Node limit; the result is then not necessarily optimal");
  e->add_option("--time-limit", ex.time_limit, "Time limit in seconds")->check(CLI::PositiveNumber);
  e->add_option("--warm-model", ex.warm_model, "Model whose imlh schedule seeds the incumbent")
      ->check(CLI::ExistingFile);

  BenchArgs be;
  be.threads = threads;
  auto* b = app.add_subcommand("bench", "Run a benchmark sweep and print CSV");
  b->add_option("--sizes", be.sizes, "Instance sizes")->delimiter(',')->required();
  b->add_option("--rhos", be.rhos, "Rho values (default: the ten-value grid)")->delimiter(',');
  b->add_option("--per-cell", be.per_cell, "Instances per (n, rho) cell")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--heuristics", be.heuristics, "Comma-separated heuristics: pmlh,imlh,itmlh,rand,spt")
      ->delimiter(',')
      ->expected(0, -1);
  b->add_option("--model", be.model, "Model file (default: shipped reference model)")->check(CLI::ExistingFile);
  b->add_option("--seed", be.seed, "Benchmark seed")->capture_default_str();
  b->add_option("--reference", be.reference, "Reference objective")
      ->capture_default_str()
      ->check(CLI::IsMember({"optimal", "best-known"}));
  b->add_option("--time-limit", be.time_limit, "Per-run limit in seconds; slower heuristics skip larger sizes")
      ->check(CLI::PositiveNumber);
  b->add_option("--m", be.m, "Number of perturbed models for itmlh")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--threads", be.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--out", be.out, "Output CSV file (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex_help) {
    return app.exit(ex_help, out, err);
  } catch (const CLI::CallForAllHelp& ex_help) {
    return app.exit(ex_help, out, err);
  } catch (const CLI::ParseError& ex_parse) {
    err << "error: " << ex_parse.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*g) return run_generate(gen, out);
    if (*f) return run_features(feat, out);
    if (*s) return run_solve(sol, out);
    if (*t) return run_train(tr, out, err);
    if (*e) return run_exact(ex, out);
    if (*b) return run_bench(be, out);
  } catch (const UsageError& ex_usage) {
    err << "error: " << ex_usage.what() << "\n\n" << b->help();
    return 2;
  } catch (const std::exception& ex_run) {
    err << "error: " << ex_run.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace mlsched
