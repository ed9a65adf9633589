#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlsched/core.hpp"

namespace mlsched {

/// n x d matrix of per-job features, one row per job.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Number of columns produced by compute_features.
inline constexpr int kFeatureCount = 27;

/// 1-based positions of every job under three sequencing rules.
struct RankPositions {
  std::vector<int> spt;     // ascending p_j
  std::vector<int> srt;     // ascending r_j
  std::vector<int> sp_rt;   // ascending r_j + p_j
};

/// Ties are broken by ascending job index.
RankPositions rank_positions(const Instance& instance);

/// Decile of each value: sort ascending (ties by index); the job of rank k
/// (1-based) gets ceil(10 k / n).
std::vector<int> deciles(std::span<const Time> values);

/// The 27 per-job features, columns in the fixed order below.
///
///   1  [j]^SPT / n                    15  (p_j - pi_j) / S
///   2  [j]^SRT / n                    16  (p_j - pi_j) / (p_k S)
///   3  [j]^SP+RT / n                  17  (p_j - pi_j) / (p_j S)
///   4  (r_j / p_j) (sum p / sum r)    18  decile(r_j)
///   5  (p_j / r_j) (sum r / sum p)    19  r_j / decile(r_j)
///   6  r_j / sum r                    20  decile(p_j)
///   7  p_j / sum r                    21  p_j / decile(p_j)
///   8  (r_j + p_j) / sum r            22  #_j / #_T
///   9  r_j / sum p                    23  [j]^SRPT / n
///  10  p_j / sum p                    24  |BS^p_j| / sum_i |BS^p_i|
///  11  (r_j + p_j) / sum p            25  |BS^r_j| / sum_i |BS^r_i|
///  12  r_j / sum (r + p)              26  |BG^p_j| / sum_i |BG^p_i|
///  13  p_j / sum (r + p)              27  |BG^r_j| / sum_i |BG^r_i|
///  14  (r_j + p_j) / sum (r + p)
///
/// S = sum_i (p_i - pi_i), where pi_i and the preemption counts come from the
/// SRPT schedule and p_k is the processing time of the job that first
/// preempted j. BS^p_j (BG^p_j) holds the jobs completing before j under SRPT
/// with smaller (greater) p; BS^r_j and BG^r_j likewise for r.
/// Any ratio whose denominator is zero evaluates to 0.
FeatureMatrix compute_features(const Instance& instance);

/// How a model expects the feature columns to be scaled before the dot
/// product. kColumnSum divides columns 4, 5, 16, 17, 19 and 21 by their sum
/// over the instance's jobs (a zero sum leaves the column at 0), which puts
/// them on the same per-instance scale as columns 6-14 and 24-27.
enum class FeatureScaling { kRaw, kColumnSum };

/// 1-based feature numbers rescaled by FeatureScaling::kColumnSum.
inline constexpr int kColumnSumFeatures[] = {4, 5, 16, 17, 19, 21};

void apply_scaling(FeatureMatrix& features, FeatureScaling scaling);

/// compute_features followed by apply_scaling.
FeatureMatrix compute_features(const Instance& instance, FeatureScaling scaling);

std::string to_string(FeatureScaling scaling);
/// Accepts "raw" and "column-sum"; throws std::invalid_argument otherwise.
FeatureScaling parse_feature_scaling(const std::string& name);

/// Column names "f1".."f27".
std::vector<std::string> feature_names();

}  // namespace mlsched
