#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mlsched/bench.hpp"
#include "mlsched/cli.hpp"
#include "mlsched/encoder.hpp"
#include "support.hpp"

using namespace mlsched;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> fields(const std::string& text) {
  std::map<std::string, std::string> f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    f[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return f;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "mlsched_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("deviation") {
  CHECK(deviation(14, 14) == 0.0);
  CHECK(deviation(20, 14) == doctest::Approx(42.857142857));
  CHECK(deviation(141, 100) == doctest::Approx(41.0));
  CHECK_THROWS(deviation(5, 0));
}

TEST_CASE("benchmark rows") {
  const Model ref = read_model(reference_model_path());
  BenchConfig cfg;
  cfg.sizes = {8, 12};
  cfg.rhos = {0.4, 1.5};
  cfg.per_cell = 4;
  cfg.heuristics = {"pmlh", "imlh", "itmlh"};
  cfg.model = &ref;
  cfg.m = 10;
  cfg.seed = 11;
  const BenchReport rep = run_benchmark(cfg);
  CHECK(rep.rows.size() == 12);
  CHECK(rep.details.size() == 48);
  // Details are grouped by cell, then heuristic, then instance.
  for (std::size_t cell = 0; cell < rep.details.size(); cell += 12)
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = rep.details[cell + i];
      const auto& im = rep.details[cell + 4 + i];
      const auto& it = rep.details[cell + 8 + i];
      REQUIRE(p.heuristic == "pmlh");
      REQUIRE(it.heuristic == "itmlh");
      REQUIRE(it.delta <= im.delta);
      REQUIRE(im.delta <= p.delta);
      REQUIRE(it.delta == 0.0);
    }
  for (const BenchRow& row : rep.rows) {
    CHECK_FALSE(row.pct_opt.has_value());
    CHECK(row.delta_avg >= 0.0);
    CHECK(row.delta_max >= row.delta_avg);
  }
  const BenchReport again = run_benchmark(cfg);
  for (std::size_t i = 0; i < rep.details.size(); ++i) CHECK(again.details[i].delta == rep.details[i].delta);

  const auto parsed = parse_bench_csv(bench_csv(rep.rows));
  REQUIRE(parsed.size() == rep.rows.size());
  CHECK(bench_csv(parsed) == bench_csv(rep.rows));
  CHECK(bench_csv({}).starts_with("n,rho,heuristic,delta_avg,delta_max,pct_opt,t_avg,t_max,seed_base,reference\n"));
}

TEST_CASE("single heuristic against best-known is always zero") {
  BenchConfig cfg;
  cfg.sizes = {20};
  cfg.per_cell = 3;
  cfg.heuristics = {"rand"};
  for (const BenchRow& row : run_benchmark(cfg).rows) CHECK(row.delta_max == 0.0);
}

TEST_CASE("optimal reference reports pct_opt") {
  const Model ref = read_model(reference_model_path());
  BenchConfig cfg;
  cfg.sizes = {8};
  cfg.rhos = {1.0};
  cfg.per_cell = 5;
  cfg.heuristics = {"imlh", "spt"};
  cfg.model = &ref;
  cfg.reference = ReferenceKind::kOptimal;
  const BenchReport rep = run_benchmark(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].pct_opt.has_value());
  cfg.sizes = {30};
  CHECK_THROWS(run_benchmark(cfg));
  cfg.heuristics = {};
  CHECK_THROWS(run_benchmark(cfg));
}

TEST_CASE("bench seeds differ across cells") {
  CHECK(bench_seed_base(1, 10, 0) != bench_seed_base(1, 10, 1));
  CHECK(bench_seed_base(1, 10, 0) != bench_seed_base(1, 12, 0));
  CHECK(bench_seed_base(1, 10, 0) == bench_seed_base(1, 10, 0));
}

TEST_CASE("cli usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"generate", "--n", "5", "--rho", "1", "--bogus", "1"}).code == 2);
  CHECK(cli({"generate", "--rho", "1"}).code == 2);
  CHECK(cli({"bench", "--sizes", "8", "--heuristics", ""}).code == 2);
  CHECK(cli({"bench", "--sizes", "8"}).code == 2);
  CHECK(cli({"bench", "--sizes", "8", "--heuristics", "pmlh,nope"}).code == 2);
  CHECK(cli({"solve", "--heuristic", "magic", "--instance", "x"}).code == 2);
  const Run help = cli({"solve", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--time-limit") != std::string::npos);
}

TEST_CASE("cli pipeline") {
  const fs::path dir = scratch_dir();
  const std::string inst = (dir / "i.txt").string();
  REQUIRE(cli({"generate", "--n", "8", "--rho", "1.0", "--seed", "7", "--out", inst}).code == 0);
  CHECK(read_instance(inst) == generate_instance(8, 1.0, 7));

  const Run ex = cli({"exact", "--instance", inst});
  REQUIRE(ex.code == 0);
  const auto e = fields(ex.out);
  CHECK(e.at("proven_optimal") == "true");

  const Run feats = cli({"features", "--instance", inst});
  REQUIRE(feats.code == 0);
  CHECK(feats.out.starts_with("f1,f2,"));
  CHECK(std::ranges::count(feats.out, '\n') == 9);
  CHECK(cli({"features", "--instance", inst, "--scaling", "column-sum"}).code == 0);
  CHECK(cli({"features", "--instance", inst, "--scaling", "sigma"}).code == 2);

  const std::string model = reference_model_path();
  const Run im = cli({"solve", "--heuristic", "imlh", "--model", model, "--instance", inst});
  const Run it = cli({"solve", "--heuristic", "itmlh", "--model", model, "--m", "150", "--seed", "1", "--instance", inst});
  REQUIRE(im.code == 0);
  REQUIRE(it.code == 0);
  CHECK(std::stoll(fields(it.out).at("objective")) <= std::stoll(fields(im.out).at("objective")));
  CHECK(std::stoll(fields(it.out).at("objective")) >= std::stoll(e.at("objective")));

  const Run csv = cli({"solve", "--heuristic", "spt", "--instance", inst, "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.starts_with("heuristic,objective,order,"));

  const Run bench = cli({"bench", "--sizes", "6", "--rhos", "0.4,2", "--per-cell", "2", "--heuristics", "pmlh,rand",
                         "--reference", "optimal"});
  REQUIRE(bench.code == 0);
  CHECK(parse_bench_csv(bench.out).size() == 4);
  fs::remove_all(dir);
}

TEST_CASE("cli train") {
  const fs::path dir = scratch_dir() / "train";
  fs::remove_all(dir);
  const std::string model = (scratch_dir() / "m.txt").string();
  const std::string log = (scratch_dir() / "log.jsonl").string();
  const Run r = cli({"train", "--train-dir", dir.string(), "--out", model, "--sizes", "5", "--rhos", "0.6,1.5",
                     "--per-cell", "3", "--samples", "10", "--max-iter", "20", "--log", log,
                     "--feature-scaling", "column-sum"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "labels.txt"));
  const Model m = read_model(model);
  CHECK(m.dim() == 27);
  CHECK(m.scaling() == FeatureScaling::kColumnSum);
  std::ifstream in(log);
  std::string first;
  std::getline(in, first);
  CHECK(first.find("\"iteration\"") != std::string::npos);
  // A second run reuses the stored training set.
  CHECK(cli({"train", "--train-dir", dir.string(), "--out", model, "--samples", "10", "--max-iter", "5", "--log", log})
            .code == 0);
  fs::remove_all(scratch_dir());
}
