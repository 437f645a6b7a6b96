#include "cpcombss/lambda_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpcombss/io.hpp"

namespace cpcombss {

namespace {

// Regularized lower incomplete gamma P(a, x): series expansion below the
// a+1 crossover, Lentz continued fraction for Q above it.
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(log_prefactor);
  }
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

std::vector<std::uint8_t> selection_vector(std::size_t n, const std::vector<int>& selected) {
  std::vector<std::uint8_t> s(n, 0);
  for (int idx : selected) s[static_cast<std::size_t>(idx) - 1] = 1;
  return s;
}

struct EvalPoint {
  int k_hat = 0;
  double rss = 0.0;
  std::vector<int> selected;  // 1-based columns, index 1 included when chosen
};

EvalPoint eval_lambda(std::span<const double> y, double lambda, const CombssOptions& opts) {
  const auto run = run_combss(y, lambda, opts);
  const auto det = restricted_ols(y, run.s, lambda);
  EvalPoint p;
  p.k_hat = det.k_hat;
  p.rss = det.rss;
  if (det.includes_tau0) p.selected.push_back(1);
  p.selected.insert(p.selected.end(), det.tau_hat.begin(), det.tau_hat.end());
  return p;
}

SelectionOutcome outcome_from_entry(const LambdaScan& scan, std::span<const double> y,
                                    int chosen, ScanRule rule) {
  SelectionOutcome out;
  out.lambda = scan.entries[static_cast<std::size_t>(chosen)].lambda;
  const auto s = selection_vector(y.size(), scan.selected[static_cast<std::size_t>(chosen)]);
  out.result = restricted_ols(y, s, out.lambda);
  out.trace.entries = scan.entries;
  out.trace.chosen_index = chosen;
  out.trace.rule = rule;
  return out;
}

}  // namespace

std::string to_csv(const ScanTrace& trace) {
  std::string out = "lambda,k_hat,standardized_rss\n";
  for (const auto& e : trace.entries) {
    out += format_double(e.lambda);
    out += ',';
    out += std::to_string(e.k_hat);
    out += ',';
    out += format_double(e.standardized_rss);
    out += '\n';
  }
  return out;
}

double default_lambda_max(std::span<const double> y) {
  double ss = 0.0;
  for (double v : y) ss += v * v;
  return ss / static_cast<double>(y.size());
}

BisectionOutcome bisection_for_k(std::span<const double> y, int k_target, double lambda_lo,
                                 double lambda_hi, int max_steps, const CombssOptions& opts) {
  if (k_target < 1) throw std::invalid_argument("bisection_for_k: k_target must be >= 1");
  if (lambda_hi < 0.0) lambda_hi = default_lambda_max(y);
  if (!(lambda_lo < lambda_hi))
    throw std::invalid_argument("bisection_for_k: need lambda_lo < lambda_hi");

  BisectionOutcome out;
  out.trace.rule = ScanRule::known_k;
  double lo = lambda_lo, hi = lambda_hi;
  double accepted = 0.0;
  for (int step = 1; step <= max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const auto ev = eval_lambda(y, mid, opts);
    // standardized_rss holds the raw rss here; sigma is unknown in this mode
    out.trace.entries.push_back({mid, ev.k_hat, ev.rss});
    out.steps_used = step;
    if (ev.k_hat == k_target) {
      out.success = true;
      out.lambda = mid;
      accepted = mid;
      out.result = restricted_ols(y, selection_vector(y.size(), ev.selected), mid);
      break;
    }
    if (ev.k_hat > k_target)
      lo = mid;  // too many change points: push the penalty up
    else
      hi = mid;
  }

  std::sort(out.trace.entries.begin(), out.trace.entries.end(),
            [](const ScanEntry& a, const ScanEntry& b) { return a.lambda < b.lambda; });
  if (out.success) {
    for (std::size_t i = 0; i < out.trace.entries.size(); ++i)
      if (out.trace.entries[i].lambda == accepted)
        out.trace.chosen_index = static_cast<int>(i);
  }
  return out;
}

LambdaScan scan_lambda_grid(std::span<const double> y, double sigma, double delta_lambda,
                            double lambda_max, double stop_above, bool inclusive_stop,
                            const CombssOptions& opts) {
  if (sigma <= 0.0) throw std::invalid_argument("scan_lambda_grid: sigma must be positive");
  if (delta_lambda <= 0.0)
    throw std::invalid_argument("scan_lambda_grid: delta_lambda must be positive");
  if (lambda_max < 0.0) lambda_max = default_lambda_max(y);
  const double sigma2 = sigma * sigma;

  LambdaScan scan;
  for (long j = 0;; ++j) {
    const double lambda = static_cast<double>(j) * delta_lambda;
    if (j > 0 && lambda > lambda_max) break;
    const auto ev = eval_lambda(y, lambda, opts);
    const double std_rss = ev.rss / sigma2;
    scan.entries.push_back({lambda, ev.k_hat, std_rss});
    scan.selected.push_back(ev.selected);
    if (inclusive_stop ? std_rss >= stop_above : std_rss > stop_above) break;
  }
  return scan;
}

SelectionOutcome pick_discrepancy(const LambdaScan& scan, std::span<const double> y) {
  const double target = static_cast<double>(y.size());
  const int count = static_cast<int>(scan.entries.size());
  int crossing = -1;
  for (int i = 0; i < count; ++i) {
    if (scan.entries[static_cast<std::size_t>(i)].standardized_rss >= target) {
      crossing = i;
      break;
    }
  }
  int chosen;
  if (crossing < 0)
    chosen = count - 1;  // target never reached: keep the sparsest model
  else if (crossing == 0)
    chosen = 0;
  else {
    const double below = std::abs(
        scan.entries[static_cast<std::size_t>(crossing) - 1].standardized_rss - target);
    const double above =
        std::abs(scan.entries[static_cast<std::size_t>(crossing)].standardized_rss - target);
    chosen = (below <= above) ? crossing - 1 : crossing;
  }
  return outcome_from_entry(scan, y, chosen, ScanRule::discrepancy);
}

SelectionOutcome pick_confidence(const LambdaScan& scan, std::span<const double> y,
                                 double threshold) {
  const int count = static_cast<int>(scan.entries.size());
  int exceed = -1;
  for (int i = 0; i < count; ++i) {
    if (scan.entries[static_cast<std::size_t>(i)].standardized_rss > threshold) {
      exceed = i;
      break;
    }
  }
  int chosen;
  if (exceed < 0)
    chosen = count - 1;
  else if (exceed == 0)
    chosen = 0;
  else
    chosen = exceed - 1;
  return outcome_from_entry(scan, y, chosen, ScanRule::confidence_bound);
}

SelectionOutcome discrepancy_principle(std::span<const double> y, double sigma,
                                       double delta_lambda, double lambda_max,
                                       const CombssOptions& opts) {
  const double target = static_cast<double>(y.size());
  const auto scan = scan_lambda_grid(y, sigma, delta_lambda, lambda_max, target, true, opts);
  return pick_discrepancy(scan, y);
}

SelectionOutcome confidence_bound(std::span<const double> y, double sigma, double alpha,
                                  double delta_lambda, double lambda_max,
                                  const CombssOptions& opts) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("confidence_bound: alpha must be in (0,1)");
  const double threshold = chi2_quantile(1.0 - alpha, static_cast<int>(y.size()));
  const auto scan =
      scan_lambda_grid(y, sigma, delta_lambda, lambda_max, threshold, false, opts);
  return pick_confidence(scan, y, threshold);
}

double chi2_cdf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi2_cdf: df must be positive");
  return gamma_p(0.5 * static_cast<double>(df), 0.5 * x);
}

double chi2_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("chi2_quantile: df must be positive");
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("chi2_quantile: p must be in (0,1)");
  const double dfd = static_cast<double>(df);
  double hi = dfd + 10.0 * std::sqrt(2.0 * dfd) + 10.0;
  while (chi2_cdf(hi, df) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cpcombss
