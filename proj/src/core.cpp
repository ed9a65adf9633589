#include "mlsched/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "mlsched/random.hpp"
#include "text_util.hpp"

namespace mlsched {

Instance::Instance(std::vector<Job> jobs, InstanceMeta meta) : jobs_(std::move(jobs)), meta_(std::move(meta)) {
  if (jobs_.empty()) throw std::invalid_argument("instance must contain at least one job");
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    if (jobs_[j].p < 1) throw std::invalid_argument(fmt::format("job {}: processing time must be >= 1", j + 1));
    if (jobs_[j].r < 0) throw std::invalid_argument(fmt::format("job {}: release date must be >= 0", j + 1));
  }
}

Time Instance::total_processing() const {
  Time s = 0;
  for (const auto& job : jobs_) s += job.p;
  return s;
}

Time Instance::total_release() const {
  Time s = 0;
  for (const auto& job : jobs_) s += job.r;
  return s;
}

bool is_permutation_of(std::span<const int> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (int j : order) {
    if (j < 0 || static_cast<std::size_t>(j) >= n || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

void require_permutation(std::span<const int> order, std::size_t n) {
  if (order.size() != n)
    throw std::invalid_argument(fmt::format("order has {} entries, instance has {} jobs", order.size(), n));
  if (!is_permutation_of(order, n)) throw std::invalid_argument("order is not a permutation of the jobs");
}

Schedule evaluate_schedule(const Instance& instance, std::span<const int> order) {
  require_permutation(order, instance.size());
  Schedule s;
  s.order.assign(order.begin(), order.end());
  s.completions.assign(instance.size(), 0);
  Time t = 0;
  for (int j : order) {
    t = std::max(t, instance.r(j)) + instance.p(j);
    s.completions[j] = t;
    s.objective += t;
  }
  return s;
}

Time sequence_objective(const Instance& instance, std::span<const int> order) {
  Time t = 0;
  Time sum = 0;
  for (int j : order) {
    t = std::max(t, instance.r(j)) + instance.p(j);
    sum += t;
  }
  return sum;
}

Time release_upper_bound(int n, double rho) {
  return std::max<Time>(1, std::llround(50.5 * n * rho));
}

Instance generate_instance(int n, double rho, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("generate_instance: rho must be > 0");
  Rng rng(seed, "instance");
  const Time r_max = release_upper_bound(n, rho);
  std::vector<Job> jobs(n);
  for (auto& job : jobs) job.p = rng.uniform_int(1, 100);
  for (auto& job : jobs) job.r = rng.uniform_int(1, r_max);
  return Instance(std::move(jobs), InstanceMeta{seed, rho, "uniform-v1"});
}

Instance parse_instance(const std::string& text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw std::invalid_argument("instance file is empty");
  const auto header = detail::split_ws(lines[0].text);
  if (header.size() != 1) throw std::invalid_argument("instance header must contain exactly n");
  const auto n = detail::parse_int(header[0], lines[0].number);
  if (n < 1) throw std::invalid_argument("instance header: n must be >= 1");
  if (lines.size() - 1 != static_cast<std::size_t>(n))
    throw std::invalid_argument(fmt::format("instance declares {} jobs but has {} job lines", n, lines.size() - 1));
  std::vector<Job> jobs;
  jobs.reserve(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = detail::split_ws(lines[i].text);
    if (fields.size() != 2)
      throw std::invalid_argument(fmt::format("line {}: expected \"p r\"", lines[i].number));
    jobs.push_back({detail::parse_int(fields[0], lines[i].number), detail::parse_int(fields[1], lines[i].number)});
  }
  return Instance(std::move(jobs));
}

std::string format_instance(const Instance& instance) {
  std::string out = fmt::format("{}\n", instance.size());
  for (const auto& job : instance.jobs()) out += fmt::format("{} {}\n", job.p, job.r);
  return out;
}

Instance read_instance(const std::filesystem::path& path) { return parse_instance(detail::read_file(path)); }

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  detail::write_file(path, format_instance(instance));
}

std::string format_order(std::span<const int> order) {
  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(order[k] + 1);
  }
  return out;
}

Order parse_order(const std::string& text) {
  Order order;
  for (const auto& tok : detail::split_ws(text)) {
    const auto v = detail::parse_int(tok, 0);
    if (v < 1) throw std::invalid_argument("job numbers in an order are 1-based");
    order.push_back(static_cast<int>(v - 1));
  }
  return order;
}

}  // namespace mlsched
