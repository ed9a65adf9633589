#include "mlsched/features.hpp"

#include <stdexcept>

#include "mlsched/easy.hpp"

namespace mlsched {

namespace {

std::vector<int> positions_of(const Order& order) {
  std::vector<int> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k) + 1;
  return pos;
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

RankPositions rank_positions(const Instance& instance) {
  const std::size_t n = instance.size();
  std::vector<Time> p(n), r(n), rp(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = instance.p(j);
    r[j] = instance.r(j);
    rp[j] = p[j] + r[j];
  }
  return {positions_of(sort_order(p)), positions_of(sort_order(r)), positions_of(sort_order(rp))};
}

std::vector<int> deciles(std::span<const Time> values) {
  const int n = static_cast<int>(values.size());
  const Order order = sort_order(values);
  std::vector<int> out(values.size());
  for (int k = 1; k <= n; ++k) out[order[k - 1]] = (10 * k + n - 1) / n;
  return out;
}

FeatureMatrix compute_features(const Instance& instance) {
  const int n = instance.n();
  const SrptTrace srpt = srpt_trace(instance);
  const RankPositions ranks = rank_positions(instance);

  std::vector<Time> p(n), r(n);
  for (int j = 0; j < n; ++j) {
    p[j] = instance.p(j);
    r[j] = instance.r(j);
  }
  const std::vector<int> dec_r = deciles(r);
  const std::vector<int> dec_p = deciles(p);

  const double sum_p = static_cast<double>(instance.total_processing());
  const double sum_r = static_cast<double>(instance.total_release());
  const double sum_rp = sum_p + sum_r;
  double sum_unfinished = 0.0;  // sum_i (p_i - pi_i)
  for (int j = 0; j < n; ++j) sum_unfinished += static_cast<double>(p[j] - srpt.first_segment[j]);

  // Predecessors in SRPT completion order with smaller / greater p and r.
  std::vector<double> bs_p(n, 0), bs_r(n, 0), bg_p(n, 0), bg_r(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (srpt.rank[k] >= srpt.rank[j]) continue;
      bs_p[j] += p[k] < p[j];
      bg_p[j] += p[k] > p[j];
      bs_r[j] += r[k] < r[j];
      bg_r[j] += r[k] > r[j];
    }
  }
  auto total = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  };
  const double tot_bs_p = total(bs_p), tot_bs_r = total(bs_r), tot_bg_p = total(bg_p), tot_bg_r = total(bg_r);

  FeatureMatrix f(n, kFeatureCount);
  const double dn = n;
  for (int j = 0; j < n; ++j) {
    const double pj = static_cast<double>(p[j]);
    const double rj = static_cast<double>(r[j]);
    const double unfinished = pj - static_cast<double>(srpt.first_segment[j]);
    auto row = f.row(j);
    row(0) = ranks.spt[j] / dn;
    row(1) = ranks.srt[j] / dn;
    row(2) = ranks.sp_rt[j] / dn;
    row(3) = ratio(rj * sum_p, pj * sum_r);
    row(4) = ratio(pj * sum_r, rj * sum_p);
    row(5) = ratio(rj, sum_r);
    row(6) = ratio(pj, sum_r);
    row(7) = ratio(rj + pj, sum_r);
    row(8) = rj / sum_p;
    row(9) = pj / sum_p;
    row(10) = (rj + pj) / sum_p;
    row(11) = rj / sum_rp;
    row(12) = pj / sum_rp;
    row(13) = (rj + pj) / sum_rp;
    row(14) = ratio(unfinished, sum_unfinished);
    row(15) = ratio(unfinished, static_cast<double>(srpt.interruptor_p[j]) * sum_unfinished);
    row(16) = ratio(unfinished, pj * sum_unfinished);
    row(17) = dec_r[j];
    row(18) = rj / dec_r[j];
    row(19) = dec_p[j];
    row(20) = pj / dec_p[j];
    row(21) = ratio(srpt.preemptions[j], srpt.total_preemptions);
    row(22) = srpt.rank[j] / dn;
    row(23) = ratio(bs_p[j], tot_bs_p);
    row(24) = ratio(bs_r[j], tot_bs_r);
    row(25) = ratio(bg_p[j], tot_bg_p);
    row(26) = ratio(bg_r[j], tot_bg_r);
  }
  return f;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  for (int k = 1; k <= kFeatureCount; ++k) names.push_back("f" + std::to_string(k));
  return names;
}

void apply_scaling(FeatureMatrix& features, FeatureScaling scaling) {
  if (scaling == FeatureScaling::kRaw) return;
  for (int k : kColumnSumFeatures) {
    if (k > features.cols()) continue;
    auto col = features.col(k - 1);
    const double total = col.sum();
    if (total == 0.0)
      col.setZero();
    else
      col /= total;
  }
}

FeatureMatrix compute_features(const Instance& instance, FeatureScaling scaling) {
  FeatureMatrix f = compute_features(instance);
  apply_scaling(f, scaling);
  return f;
}

std::string to_string(FeatureScaling scaling) { return scaling == FeatureScaling::kRaw ? "raw" : "column-sum"; }

FeatureScaling parse_feature_scaling(const std::string& name) {
  if (name == "raw") return FeatureScaling::kRaw;
  if (name == "column-sum") return FeatureScaling::kColumnSum;
  throw std::invalid_argument("unknown feature scaling \"" + name + "\" (expected raw or column-sum)");
}

}  // namespace mlsched
