#pragma once

#include <span>
#include <string>

// Evaluation of estimated change points against the truth: tolerance-based
// F1 with one-to-one matching, and Hausdorff distance (two-sided by default,
// with the one-sided directed variant exposed for sensitivity studies).

namespace cpcombss {

struct F1Result {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double hausdorff = 0.0;      // +inf when exactly one input set is empty
  double hausdorff_std = 0.0;  // hausdorff / L
};

/// Greedy one-to-one matching by absolute distance (ties toward the smaller
/// truth index, then the smaller estimate index); a pair counts as a true
/// positive iff its distance is <= tol.  Conventions: both sets empty gives
/// f1 = 1; an empty side with a nonempty other gives 0.
F1Result f1_score(std::span<const int> truth, std::span<const int> estimate, double tol);

enum class HausdorffVariant { two_sided, directed_truth_to_estimate };

/// max over the two directed nearest-neighbor maxima.  Both sets empty -> 0;
/// exactly one empty -> +inf (callers exclude these from aggregation).
double hausdorff(std::span<const int> truth, std::span<const int> estimate,
                 HausdorffVariant variant = HausdorffVariant::two_sided);

EvalReport evaluate(std::span<const int> truth, std::span<const int> estimate, double tol,
                    double min_gap);

std::string to_json(const EvalReport& report, int indent = 2);

}  // namespace cpcombss
