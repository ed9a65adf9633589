// Python bindings for the mlsched library. Orders are 0-based lists.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlsched/bench.hpp"
#include "mlsched/cli.hpp"
#include "mlsched/core.hpp"
#include "mlsched/decode.hpp"
#include "mlsched/easy.hpp"
#include "mlsched/encoder.hpp"
#include "mlsched/exact.hpp"
#include "mlsched/features.hpp"
#include "mlsched/heuristics.hpp"
#include "mlsched/learn.hpp"

namespace py = pybind11;
using namespace mlsched;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["heuristic"] = r.heuristic;
  d["order"] = r.schedule.order;
  d["objective"] = r.schedule.objective;
  d["wall_seconds"] = r.wall_seconds;
  d["distinct_sequences"] = r.counters.distinct_sequences;
  d["ls_calls"] = r.counters.ls_calls;
  d["rdi_calls"] = r.counters.rdi_calls;
  d["memo_hits"] = r.counters.memo_hits;
  d["truncated"] = r.truncated;
  return d;
}

Instance make_instance(const std::vector<std::pair<Time, Time>>& jobs) {
  std::vector<Job> out;
  out.reserve(jobs.size());
  for (auto [p, r] : jobs) out.push_back({p, r});
  return Instance(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Learning-based heuristics for single-machine scheduling with release dates";

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("jobs"), "Jobs as a list of (p, r) pairs.")
      .def_property_readonly("n", &Instance::n)
      .def_property_readonly("p", [](const Instance& i) {
        std::vector<Time> v;
        for (const Job& j : i.jobs()) v.push_back(j.p);
        return v;
      })
      .def_property_readonly("r", [](const Instance& i) {
        std::vector<Time> v;
        for (const Job& j : i.jobs()) v.push_back(j.r);
        return v;
      })
      .def("__len__", &Instance::size)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& i) { return "<Instance n=" + std::to_string(i.n()) + ">"; });

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("order", &Schedule::order)
      .def_readonly("completions", &Schedule::completions)
      .def_readonly("objective", &Schedule::objective);

  py::enum_<FeatureScaling>(m, "FeatureScaling")
      .value("RAW", FeatureScaling::kRaw)
      .value("COLUMN_SUM", FeatureScaling::kColumnSum);

  py::class_<Model>(m, "Model")
      .def(py::init<Eigen::VectorXd, Eigen::VectorXd, FeatureScaling>(), py::arg("theta"), py::arg("sigma"),
           py::arg("scaling") = FeatureScaling::kRaw)
      .def(py::init<Eigen::VectorXd>(), py::arg("theta"))
      .def_property_readonly("theta", &Model::theta)
      .def_property_readonly("sigma", &Model::sigma)
      .def_property_readonly("scaling", &Model::scaling)
      .def_property_readonly("dim", &Model::dim);

  m.def("generate_instance", &generate_instance, py::arg("n"), py::arg("rho"), py::arg("seed"));
  m.def("parse_instance", &parse_instance, py::arg("text"));
  m.def("format_instance", &format_instance, py::arg("instance"));
  m.def("evaluate_schedule",
        [](const Instance& i, const Order& o) { return evaluate_schedule(i, o); }, py::arg("instance"),
        py::arg("order"));

  m.def("spt_order", [](const std::vector<double>& p) { return spt_order(p); }, py::arg("priorities"));
  m.def("srpt_objective", [](const Instance& i) { return srpt_trace(i).objective; }, py::arg("instance"));
  m.def("compute_features",
        [](const Instance& i, FeatureScaling s) { return compute_features(i, s); }, py::arg("instance"),
        py::arg("scaling") = FeatureScaling::kRaw);
  m.def("predict_priorities", &predict_priorities, py::arg("model"), py::arg("features"));

  m.def("read_model", [](const std::string& path) { return read_model(path); }, py::arg("path"));
  m.def("parse_model", &parse_model, py::arg("text"));
  m.def("format_model", &format_model, py::arg("model"));
  m.def("reference_model_path", &reference_model_path);

  m.def("ls_repair", [](const Instance& i, const Order& o) { return ls_repair(i, o); }, py::arg("instance"),
        py::arg("order"));
  m.def("rdi",
        [](const Instance& i, const Order& o, const std::vector<double>& prio) {
          return rdi(i, evaluate_schedule(i, o), prio);
        },
        py::arg("instance"), py::arg("order"), py::arg("priorities"));

  m.def("pmlh", [](const Instance& i, const Model& md) { return report_dict(pmlh(i, md)); }, py::arg("instance"),
        py::arg("model"));
  m.def("imlh", [](const Instance& i, const Model& md) { return report_dict(imlh(i, md)); }, py::arg("instance"),
        py::arg("model"));
  m.def(
      "itmlh",
      [](const Instance& i, const Model& md, int count, std::uint64_t seed, int threads,
         std::optional<double> time_limit) {
        ItmlhOptions opt;
        opt.m = count;
        opt.seed = seed;
        opt.threads = threads;
        opt.time_limit_seconds = time_limit;
        py::gil_scoped_release release;
        SolveReport r = itmlh(i, md, opt);
        py::gil_scoped_acquire acquire;
        return report_dict(r);
      },
      py::arg("instance"), py::arg("model"), py::arg("m") = 150, py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("time_limit") = py::none());
  m.def("rand_baseline", [](const Instance& i, std::uint64_t seed) { return report_dict(rand_baseline(i, seed)); },
        py::arg("instance"), py::arg("seed") = 0);
  m.def("spt_baseline", [](const Instance& i) { return report_dict(spt_baseline(i)); }, py::arg("instance"));

  m.def(
      "exact",
      [](const Instance& i, std::optional<std::uint64_t> node_limit, std::optional<double> time_limit) {
        BnbOptions opt;
        opt.node_limit = node_limit;
        opt.time_limit_seconds = time_limit;
        const BnbResult r = bnb_solve(i, opt);
        py::dict d;
        d["order"] = r.schedule.order;
        d["objective"] = r.schedule.objective;
        d["proven_optimal"] = r.stats.proven_optimal;
        d["nodes_explored"] = r.stats.nodes_explored;
        d["nodes_pruned"] = r.stats.nodes_pruned;
        return d;
      },
      py::arg("instance"), py::arg("node_limit") = py::none(), py::arg("time_limit") = py::none());
  m.def("brute_force", &brute_force, py::arg("instance"));
  m.def("deviation", &deviation, py::arg("value"), py::arg("reference"));

  m.def(
      "train_exact",
      [](const std::vector<int>& sizes, int per_cell, int samples, std::uint64_t seed, FeatureScaling scaling) {
        TrainingSetConfig tc;
        tc.sizes = sizes;
        tc.per_cell = per_cell;
        tc.seed = seed;
        const auto examples = build_training_set(tc);
        SaaConfig sc;
        sc.samples = samples;
        sc.seed = seed;
        sc.scaling = scaling;
        return train(examples, sc).model;
      },
      py::arg("sizes"), py::arg("per_cell"), py::arg("samples") = 100, py::arg("seed") = 0,
      py::arg("scaling") = FeatureScaling::kRaw, "Builds an exactly labeled training set and fits a model.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI subcommand; returns (exit code, stdout, stderr).");
}
