#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpcombss/changepoint.hpp"
#include "cpcombss/combss.hpp"

// Penalty selection.  Three rules share the same inner machinery (run the
// optimizer at a trial lambda, threshold, refit by restricted OLS):
//   - bisection_for_k: interval halving until the estimate has k_target
//     change points (known-K setting);
//   - discrepancy_principle: walk a lambda grid until the standardized
//     residual rss/sigma^2 reaches n, then keep whichever straddling entry
//     is closer to n;
//   - confidence_bound: same grid, keep the last entry before the residual
//     exceeds the chi^2_{1-alpha}(n) quantile.

namespace cpcombss {

struct ScanEntry {
  double lambda = 0.0;
  int k_hat = 0;
  double standardized_rss = 0.0;  // rss / sigma^2 (raw rss in known_k traces)
};

enum class ScanRule { known_k, discrepancy, confidence_bound };

struct ScanTrace {
  std::vector<ScanEntry> entries;  // lambdas strictly increasing
  int chosen_index = -1;           // -1 when nothing was accepted
  ScanRule rule = ScanRule::known_k;
};

/// CSV with header "lambda,k_hat,standardized_rss".
std::string to_csv(const ScanTrace& trace);

/// Penalty at which the empty model wins: ||y||^2 / n.
double default_lambda_max(std::span<const double> y);

struct BisectionOutcome {
  bool success = false;
  double lambda = 0.0;       // accepted penalty (valid when success)
  DetectionResult result;    // fit at the accepted penalty
  int steps_used = 0;
  ScanTrace trace;           // every midpoint tried, sorted by lambda
};

/// Interval halving on [lambda_lo, lambda_hi] (pass lambda_hi < 0 for the
/// default ||y||^2/n).  Moves lo up when k_hat > k_target and hi down when
/// k_hat < k_target; gives up after max_steps, which callers treat as
/// "skip this replication".
BisectionOutcome bisection_for_k(std::span<const double> y, int k_target,
                                 double lambda_lo = 0.0, double lambda_hi = -1.0,
                                 int max_steps = 50, const CombssOptions& opts = {});

struct SelectionOutcome {
  double lambda = 0.0;
  DetectionResult result;
  ScanTrace trace;
};

/// Grid scan shared by the two unsupervised rules: per-lambda selections are
/// cached so DP and CB can be decided from one pass over identical data.
struct LambdaScan {
  std::vector<ScanEntry> entries;
  std::vector<std::vector<int>> selected;  // per entry: selected 1-based columns
};

/// Scans lambda = 0, delta_lambda, 2*delta_lambda, ... <= lambda_max and
/// stops after the first entry with standardized_rss > stop_above (>= when
/// inclusive_stop).  Pass lambda_max < 0 for the default.
LambdaScan scan_lambda_grid(std::span<const double> y, double sigma, double delta_lambda,
                            double lambda_max, double stop_above, bool inclusive_stop,
                            const CombssOptions& opts);

/// DP decision on an existing scan: straddling pair around n, closer wins,
/// ties toward the smaller lambda; grid exhaustion keeps the final entry.
SelectionOutcome pick_discrepancy(const LambdaScan& scan, std::span<const double> y);

/// CB decision on an existing scan: last entry with standardized_rss <=
/// threshold before the first exceedance; grid exhaustion keeps the final
/// entry.
SelectionOutcome pick_confidence(const LambdaScan& scan, std::span<const double> y,
                                 double threshold);

SelectionOutcome discrepancy_principle(std::span<const double> y, double sigma,
                                       double delta_lambda = 0.005,
                                       double lambda_max = -1.0,
                                       const CombssOptions& opts = {});

SelectionOutcome confidence_bound(std::span<const double> y, double sigma,
                                  double alpha = 0.05, double delta_lambda = 0.005,
                                  double lambda_max = -1.0, const CombssOptions& opts = {});

/// Inverse chi^2(df) CDF via the regularized incomplete gamma function and
/// bisection; absolute accuracy ~1e-8.
double chi2_quantile(double p, int df);

/// Regularized lower incomplete gamma P(df/2, x/2).
double chi2_cdf(double x, int df);

}  // namespace cpcombss
