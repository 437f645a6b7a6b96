#include "cpcombss/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>

#include "cpcombss/io.hpp"
#include "cpcombss/lambda_select.hpp"
#include "cpcombss/metrics.hpp"

namespace cpcombss {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void fill_metrics(ExperimentRecord& rec, const std::vector<int>& truth, double tol,
                  double min_gap) {
  const auto rep = evaluate(truth, rec.tau_hat, tol, min_gap);
  rec.f1 = rep.f1;
  rec.hausdorff = rep.hausdorff;
  rec.hausdorff_std = rep.hausdorff_std;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scale_values.empty())
    throw std::invalid_argument("ExperimentConfig: scale_values must be nonempty");
  for (std::size_t i = 1; i < scale_values.size(); ++i)
    if (scale_values[i] <= scale_values[i - 1])
      throw std::invalid_argument("ExperimentConfig: scale_values must be strictly increasing");
  if (replications < 1)
    throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
  if (noise_scale < 0.0)
    throw std::invalid_argument("ExperimentConfig: noise_scale must be nonnegative");
  base_spec.validate();
}

SignalSpec spec_for_scale(const ExperimentConfig& config, double scale_value) {
  SignalSpec spec = config.base_spec;
  if (config.scale_axis == ExperimentConfig::ScaleAxis::delta) {
    spec.delta = scale_value;
  } else {
    const int spacing = static_cast<int>(std::lround(scale_value));
    const int k = static_cast<int>(config.base_spec.tau.size());
    spec.n = (k + 1) * spacing;
    spec.tau.clear();
    for (int j = 1; j <= k; ++j) spec.tau.push_back(j * spacing + 1);
  }
  spec.validate();
  return spec;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int scales = static_cast<int>(config.scale_values.size());
  const int reps = config.replications;
  const int rules = (config.mode == SelectionMode::dp_and_cb) ? 2 : 1;
  std::vector<ExperimentRecord> records(
      static_cast<std::size_t>(scales) * static_cast<std::size_t>(reps) *
      static_cast<std::size_t>(rules));
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

  std::exception_ptr first_error = nullptr;

#pragma omp parallel for collapse(2) schedule(dynamic) num_threads(threads)
  for (int si = 0; si < scales; ++si) {
    for (int rep = 0; rep < reps; ++rep) {
      try {
        const double scale = config.scale_values[static_cast<std::size_t>(si)];
        const SignalSpec spec = spec_for_scale(config, scale);
        const std::uint64_t seed = derive_seed(config.base_seed,
                                               static_cast<std::uint64_t>(si),
                                               static_cast<std::uint64_t>(rep));
        const auto y = simulate(spec, seed, config.noise_scale);
        const double min_gap = static_cast<double>(spec.min_gap());
        const double tol = min_gap / 20.0;
        const std::size_t slot =
            (static_cast<std::size_t>(si) * static_cast<std::size_t>(reps) +
             static_cast<std::size_t>(rep)) *
            static_cast<std::size_t>(rules);

        auto finish = [&](ExperimentRecord& rec, const std::string& rule,
                          const DetectionResult& det, double ms) {
          rec.scale_value = scale;
          rec.replication = rep;
          rec.rule = rule;
          rec.lambda = det.lambda_used;
          rec.tau_hat = config.merge_post_treatment
                            ? merge_close(det.tau_hat, config.merge_gap)
                            : det.tau_hat;
          rec.k_hat = static_cast<int>(rec.tau_hat.size());
          rec.wall_time_ms = ms;
          fill_metrics(rec, spec.tau, tol, min_gap);
        };

        if (config.mode == SelectionMode::known_k) {
          const auto start = Clock::now();
          const auto out = bisection_for_k(y, static_cast<int>(spec.tau.size()), 0.0, -1.0,
                                           50, config.opts);
          const double ms = ms_since(start);
          auto& rec = records[slot];
          if (out.success) {
            finish(rec, "known_k", out.result, ms);
          } else {
            rec.scale_value = scale;
            rec.replication = rep;
            rec.rule = "known_k";
            rec.lambda = std::numeric_limits<double>::quiet_NaN();
            rec.k_hat = 0;
            rec.f1 = 0.0;  // skipped replications still count as 0 toward F1
            rec.hausdorff = std::numeric_limits<double>::quiet_NaN();
            rec.hausdorff_std = std::numeric_limits<double>::quiet_NaN();
            rec.skipped = true;
            rec.wall_time_ms = ms;
          }
        } else if (config.mode == SelectionMode::dp) {
          const auto start = Clock::now();
          const auto out =
              discrepancy_principle(y, spec.sigma, config.delta_lambda, -1.0, config.opts);
          finish(records[slot], "dp", out.result, ms_since(start));
        } else if (config.mode == SelectionMode::cb) {
          const auto start = Clock::now();
          const auto out = confidence_bound(y, spec.sigma, config.alpha, config.delta_lambda,
                                            -1.0, config.opts);
          finish(records[slot], "cb", out.result, ms_since(start));
        } else {
          // Shared scan: both rules are decided from the same lambda grid on
          // the same simulated sequence.
          const auto start = Clock::now();
          const double threshold = chi2_quantile(1.0 - config.alpha, spec.n);
          const auto scan = scan_lambda_grid(y, spec.sigma, config.delta_lambda, -1.0,
                                             threshold, false, config.opts);
          const auto dp_out = pick_discrepancy(scan, y);
          const auto cb_out = pick_confidence(scan, y, threshold);
          const double ms = ms_since(start);
          finish(records[slot], "dp", dp_out.result, ms);
          finish(records[slot + 1], "cb", cb_out.result, ms);
        }
      } catch (...) {
#pragma omp critical
        {
          if (!first_error) first_error = std::current_exception();
        }
      }
    }
  }

  if (first_error) std::rethrow_exception(first_error);
  return records;
}

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
  struct Bucket {
    double f1_sum = 0.0;
    long f1_count = 0;
    double h_sum = 0.0, h_std_sum = 0.0;
    long h_count = 0;
    double k_sum = 0.0;
    long k_count = 0;
    int n_skipped = 0, n_inf = 0;
  };
  std::map<std::pair<double, std::string>, Bucket> buckets;
  for (const auto& rec : records) {
    auto& b = buckets[{rec.scale_value, rec.rule}];
    b.f1_sum += rec.f1;
    ++b.f1_count;
    if (rec.skipped) {
      ++b.n_skipped;
      continue;
    }
    b.k_sum += rec.k_hat;
    ++b.k_count;
    if (std::isinf(rec.hausdorff)) {
      ++b.n_inf;
    } else {
      b.h_sum += rec.hausdorff;
      b.h_std_sum += rec.hausdorff_std;
      ++b.h_count;
    }
  }

  std::vector<SummaryRow> rows;
  rows.reserve(buckets.size());
  for (const auto& [key, b] : buckets) {
    SummaryRow row;
    row.scale = key.first;
    row.rule = key.second;
    row.mean_f1 = b.f1_sum / static_cast<double>(b.f1_count);
    row.mean_hausdorff =
        b.h_count > 0 ? b.h_sum / static_cast<double>(b.h_count)
                      : std::numeric_limits<double>::quiet_NaN();
    row.mean_hausdorff_std =
        b.h_count > 0 ? b.h_std_sum / static_cast<double>(b.h_count)
                      : std::numeric_limits<double>::quiet_NaN();
    row.mean_k_hat = b.k_count > 0 ? b.k_sum / static_cast<double>(b.k_count)
                                   : std::numeric_limits<double>::quiet_NaN();
    row.n_skipped = b.n_skipped;
    row.n_inf_hausdorff = b.n_inf;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::pair<int, long>> cp_histogram(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) return {};
  std::map<int, long> counts;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].scale_value != records[0].scale_value)
      throw std::invalid_argument("cp_histogram: records must share one scale value");
    for (int t : records[i].tau_hat) ++counts[t];
  }
  return {counts.begin(), counts.end()};
}

std::string records_csv(const std::vector<ExperimentRecord>& records, bool include_timing) {
  std::string out =
      "scale,replication,rule,lambda,k_hat,tau_hat,f1,hausdorff,hausdorff_std,skipped,"
      "wall_time_ms\n";
  for (const auto& rec : records) {
    out += format_double(rec.scale_value);
    out += ',';
    out += std::to_string(rec.replication);
    out += ',';
    out += rec.rule;
    out += ',';
    out += format_double(rec.lambda);
    out += ',';
    out += std::to_string(rec.k_hat);
    out += ',';
    for (std::size_t i = 0; i < rec.tau_hat.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(rec.tau_hat[i]);
    }
    out += ',';
    out += format_double(rec.f1);
    out += ',';
    out += format_double(rec.hausdorff);
    out += ',';
    out += format_double(rec.hausdorff_std);
    out += ',';
    out += rec.skipped ? '1' : '0';
    out += ',';
    out += format_double(include_timing ? rec.wall_time_ms : 0.0);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "scale,rule,mean_f1,mean_hausdorff,mean_hausdorff_std,mean_k_hat,n_skipped,"
      "n_inf_hausdorff\n";
  for (const auto& row : rows) {
    out += format_double(row.scale);
    out += ',';
    out += row.rule;
    out += ',';
    out += format_double(row.mean_f1);
    out += ',';
    out += format_double(row.mean_hausdorff);
    out += ',';
    out += format_double(row.mean_hausdorff_std);
    out += ',';
    out += format_double(row.mean_k_hat);
    out += ',';
    out += std::to_string(row.n_skipped);
    out += ',';
    out += std::to_string(row.n_inf_hausdorff);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const std::vector<std::pair<int, long>>& hist) {
  std::string out = "index,count\n";
  for (const auto& [index, count] : hist) {
    out += std::to_string(index);
    out += ',';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

}  // namespace cpcombss
