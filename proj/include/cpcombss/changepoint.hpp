#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Change-point semantics on top of binary selections.  All sequence
// positions are 1-based; index 1 is the artificial change point tau_0 and is
// never reported in tau_hat (the flag includes_tau0 records whether it was
// selected).

namespace cpcombss {

/// Consecutive half-open segments [start, end) in 1-based positions.
/// A leading segment that starts before the first selected index has its
/// fitted mean constrained to 0.
struct Segmentation {
  struct Segment {
    int start = 1;   // inclusive, 1-based
    int end = 1;     // exclusive
    bool zero_constrained = false;
  };
  std::vector<int> change_indices;  // selected columns, increasing, may include 1
  std::vector<Segment> segments;
};

struct SelectedCoef {
  int index = 0;     // 1-based selected column
  double value = 0;  // beta_hat at that column
};

struct DetectionResult {
  std::vector<int> tau_hat;          // estimated change points, excludes index 1
  bool includes_tau0 = false;        // whether column 1 was selected
  std::vector<SelectedCoef> beta_hat;
  std::vector<double> mu_hat;        // fitted means, length n
  double rss = 0.0;                  // ||y - mu_hat||^2
  double lambda_used = 0.0;
  int k_hat = 0;                     // |tau_hat|
};

Segmentation segments_from_s(std::span<const std::uint8_t> s);

/// Least squares restricted to the columns selected by s.  The step-function
/// design makes the projection segment-wise averaging, so this is O(n) with
/// no factorization; beta_hat falls out as consecutive differences of the
/// segment means.
DetectionResult restricted_ols(std::span<const double> y, std::span<const std::uint8_t> s,
                               double lambda_used = 0.0);

/// Clusters of estimates whose consecutive gaps are < min_gap collapse to the
/// cluster median (rounded down).  Idempotent; output gaps are all >= min_gap.
std::vector<int> merge_close(std::span<const int> tau_hat, int min_gap);

/// JSON serialization of DetectionResult (fields as named above).
std::string to_json(const DetectionResult& result, int indent = 2);

}  // namespace cpcombss
