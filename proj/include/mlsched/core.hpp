#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mlsched {

/// Integer time unit used for processing times, release dates and objectives.
using Time = std::int64_t;

/// A job sequence: order[k] is the 0-based index of the job in position k.
/// Files and the CLI print 1-based indices.
using Order = std::vector<int>;

struct Job {
  Time p = 1;  // processing time, >= 1
  Time r = 0;  // release date, >= 0

  friend bool operator==(const Job&, const Job&) = default;
};

/// Provenance of a generated instance. Not part of instance identity.
struct InstanceMeta {
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::string generator;
};

/// An instance of 1|r_j|sum C_j. Immutable after construction.
class Instance {
 public:
  /// Throws std::invalid_argument if jobs is empty or a job has p < 1 or r < 0.
  explicit Instance(std::vector<Job> jobs, InstanceMeta meta = {});

  std::size_t size() const { return jobs_.size(); }
  int n() const { return static_cast<int>(jobs_.size()); }
  const Job& operator[](std::size_t j) const { return jobs_[j]; }
  Time p(std::size_t j) const { return jobs_[j].p; }
  Time r(std::size_t j) const { return jobs_[j].r; }
  std::span<const Job> jobs() const { return jobs_; }
  const InstanceMeta& meta() const { return meta_; }

  Time total_processing() const;
  Time total_release() const;

  /// Equality compares job data only.
  friend bool operator==(const Instance& a, const Instance& b) { return a.jobs_ == b.jobs_; }

 private:
  std::vector<Job> jobs_;
  InstanceMeta meta_;
};

/// A feasible non-preemptive schedule: sequence, per-job completion times
/// (indexed by job, not position) and the total completion time.
struct Schedule {
  Order order;
  std::vector<Time> completions;
  Time objective = 0;
};

/// True iff order is a permutation of {0, ..., n-1}.
bool is_permutation_of(std::span<const int> order, std::size_t n);

/// Throws std::invalid_argument unless order is a permutation of the jobs.
void require_permutation(std::span<const int> order, std::size_t n);

/// Applies C_{j1} = r_{j1} + p_{j1}, C_{jk} = max(C_{j(k-1)}, r_{jk}) + p_{jk}.
/// Throws std::invalid_argument if order is not a permutation.
Schedule evaluate_schedule(const Instance& instance, std::span<const int> order);

/// Objective of a sequence without validation or allocation. Hot-path helper.
Time sequence_objective(const Instance& instance, std::span<const int> order);

/// Generates a random instance: p_j uniform in [1, 100], then r_j uniform in
/// [1, round(50.5 * n * rho)]. Draws come from Rng(seed, "instance") in the
/// order p_1..p_n, r_1..r_n. Throws std::invalid_argument if n < 1 or rho <= 0.
Instance generate_instance(int n, double rho, std::uint64_t seed);

/// Upper bound of the release-date range used by generate_instance.
Time release_upper_bound(int n, double rho);

/// The ten load factors used throughout the experiments.
inline constexpr double kRhoGrid[] = {0.2, 0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0};

// Text instance format: line 1 holds n, then one "p r" line per job.
Instance parse_instance(const std::string& text);
std::string format_instance(const Instance& instance);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& instance, const std::filesystem::path& path);

/// Formats an order with 1-based job numbers separated by spaces.
std::string format_order(std::span<const int> order);

/// Parses a whitespace separated list of 1-based job numbers.
Order parse_order(const std::string& text);

}  // namespace mlsched
