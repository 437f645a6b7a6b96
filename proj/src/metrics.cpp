#include "cpcombss/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cpcombss {

namespace {

double directed_max_min(std::span<const int> from, std::span<const int> to) {
  double worst = 0.0;
  for (int a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (int b : to) best = std::min(best, std::abs(static_cast<double>(a - b)));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

F1Result f1_score(std::span<const int> truth, std::span<const int> estimate, double tol) {
  if (truth.empty() && estimate.empty()) return {1.0, 1.0, 1.0};
  if (truth.empty() || estimate.empty()) return {0.0, 0.0, 0.0};

  struct Pair {
    double dist;
    int ti, ei;
  };
  std::vector<Pair> pairs;
  pairs.reserve(truth.size() * estimate.size());
  for (int ti = 0; ti < static_cast<int>(truth.size()); ++ti)
    for (int ei = 0; ei < static_cast<int>(estimate.size()); ++ei)
      pairs.push_back({std::abs(static_cast<double>(truth[ti] - estimate[ei])), ti, ei});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.ti != b.ti) return a.ti < b.ti;
    return a.ei < b.ei;
  });

  std::vector<char> truth_used(truth.size(), 0), est_used(estimate.size(), 0);
  int tp = 0;
  for (const auto& p : pairs) {
    if (p.dist > tol) break;
    if (truth_used[p.ti] || est_used[p.ei]) continue;
    truth_used[p.ti] = est_used[p.ei] = 1;
    ++tp;
  }

  F1Result r;
  r.precision = static_cast<double>(tp) / static_cast<double>(estimate.size());
  r.recall = static_cast<double>(tp) / static_cast<double>(truth.size());
  r.f1 = (r.precision + r.recall > 0.0)
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

double hausdorff(std::span<const int> truth, std::span<const int> estimate,
                 HausdorffVariant variant) {
  if (truth.empty() && estimate.empty()) return 0.0;
  if (truth.empty() || estimate.empty())
    return std::numeric_limits<double>::infinity();
  const double forward = directed_max_min(truth, estimate);
  if (variant == HausdorffVariant::directed_truth_to_estimate) return forward;
  return std::max(forward, directed_max_min(estimate, truth));
}

EvalReport evaluate(std::span<const int> truth, std::span<const int> estimate, double tol,
                    double min_gap) {
  EvalReport rep;
  const auto f = f1_score(truth, estimate, tol);
  rep.precision = f.precision;
  rep.recall = f.recall;
  rep.f1 = f.f1;
  rep.hausdorff = hausdorff(truth, estimate);
  rep.hausdorff_std = rep.hausdorff / min_gap;
  return rep;
}

std::string to_json(const EvalReport& report, int indent) {
  nlohmann::json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["hausdorff"] = report.hausdorff;
  j["hausdorff_standardized"] = report.hausdorff_std;
  return j.dump(indent);
}

}  // namespace cpcombss
