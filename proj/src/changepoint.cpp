#include "cpcombss/changepoint.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace cpcombss {

Segmentation segments_from_s(std::span<const std::uint8_t> s) {
  const int n = static_cast<int>(s.size());
  Segmentation seg;
  for (int i = 0; i < n; ++i)
    if (s[i]) seg.change_indices.push_back(i + 1);

  if (seg.change_indices.empty()) {
    seg.segments.push_back({1, n + 1, true});
    return seg;
  }
  if (seg.change_indices.front() != 1)
    seg.segments.push_back({1, seg.change_indices.front(), true});
  for (std::size_t k = 0; k < seg.change_indices.size(); ++k) {
    const int start = seg.change_indices[k];
    const int end = (k + 1 < seg.change_indices.size()) ? seg.change_indices[k + 1] : n + 1;
    seg.segments.push_back({start, end, false});
  }
  return seg;
}

DetectionResult restricted_ols(std::span<const double> y, std::span<const std::uint8_t> s,
                               double lambda_used) {
  if (y.size() != s.size()) throw std::invalid_argument("restricted_ols: size mismatch");
  const auto seg = segments_from_s(s);

  DetectionResult res;
  res.lambda_used = lambda_used;
  res.mu_hat.assign(y.size(), 0.0);

  double prev_level = 0.0;
  for (const auto& piece : seg.segments) {
    double level = 0.0;
    if (!piece.zero_constrained) {
      double sum = 0.0;
      for (int i = piece.start; i < piece.end; ++i) sum += y[i - 1];
      level = sum / static_cast<double>(piece.end - piece.start);
      res.beta_hat.push_back({piece.start, level - prev_level});
    }
    for (int i = piece.start; i < piece.end; ++i) res.mu_hat[i - 1] = level;
    prev_level = level;
  }

  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - res.mu_hat[i];
    rss += r * r;
  }
  res.rss = rss;

  for (int idx : seg.change_indices) {
    if (idx == 1)
      res.includes_tau0 = true;
    else
      res.tau_hat.push_back(idx);
  }
  res.k_hat = static_cast<int>(res.tau_hat.size());
  return res;
}

std::vector<int> merge_close(std::span<const int> tau_hat, int min_gap) {
  if (min_gap <= 0) throw std::invalid_argument("merge_close: min_gap must be positive");
  std::vector<int> merged;
  std::size_t i = 0;
  while (i < tau_hat.size()) {
    std::size_t j = i;
    while (j + 1 < tau_hat.size() && tau_hat[j + 1] - tau_hat[j] < min_gap) ++j;
    // cluster tau_hat[i..j]; lower median, rounded down for even sizes
    const std::size_t len = j - i + 1;
    const int lo = tau_hat[i + (len - 1) / 2];
    const int hi = tau_hat[i + len / 2];
    merged.push_back((lo + hi) / 2);
    i = j + 1;
  }
  return merged;
}

std::string to_json(const DetectionResult& result, int indent) {
  nlohmann::json j;
  j["tau_hat"] = result.tau_hat;
  j["includes_tau0"] = result.includes_tau0;
  auto& coefs = j["beta_hat"] = nlohmann::json::array();
  for (const auto& c : result.beta_hat) coefs.push_back({{"index", c.index}, {"value", c.value}});
  j["mu_hat"] = result.mu_hat;
  j["rss"] = result.rss;
  j["lambda_used"] = result.lambda_used;
  j["k_hat"] = result.k_hat;
  return j.dump(indent);
}

}  // namespace cpcombss
