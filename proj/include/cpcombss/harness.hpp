#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpcombss/combss.hpp"
#include "cpcombss/simgen.hpp"

// Monte-Carlo experiment driver.  Replications are independent work units
// (seeds derive from (base_seed, scale index, replication)) and run in
// parallel with OpenMP; records are assembled in canonical order (scale,
// replication, rule) so output is deterministic regardless of thread count.

namespace cpcombss {

enum class SelectionMode { known_k, dp, cb, dp_and_cb };

struct ExperimentConfig {
  std::string name;
  enum class ScaleAxis { delta, spacing } scale_axis = ScaleAxis::delta;
  std::vector<double> scale_values;  // nonempty, strictly increasing
  SignalSpec base_spec;              // delta or spacing substituted per scale value
  int replications = 100;
  SelectionMode mode = SelectionMode::known_k;
  std::uint64_t base_seed = 1;
  double alpha = 0.05;
  double delta_lambda = 0.005;
  bool merge_post_treatment = false;
  int merge_gap = 2;
  double noise_scale = 1.0;  // test hook; 0 gives noiseless sequences
  int threads = 0;           // 0 = all available cores
  CombssOptions opts;

  void validate() const;  // throws std::invalid_argument
};

struct ExperimentRecord {
  double scale_value = 0.0;
  int replication = 0;
  std::string rule;  // "known_k", "dp" or "cb"
  double lambda = 0.0;
  int k_hat = 0;
  std::vector<int> tau_hat;
  double f1 = 0.0;
  double hausdorff = 0.0;      // +inf when exactly one side is empty
  double hausdorff_std = 0.0;  // hausdorff / L
  bool skipped = false;        // known_k mode only: bisection failed
  double wall_time_ms = 0.0;
};

struct SummaryRow {
  double scale = 0.0;
  std::string rule;
  double mean_f1 = 0.0;
  double mean_hausdorff = 0.0;      // over non-skipped, finite entries
  double mean_hausdorff_std = 0.0;  // same exclusions
  double mean_k_hat = 0.0;          // over non-skipped entries
  int n_skipped = 0;
  int n_inf_hausdorff = 0;
};

/// Materializes the signal description for one grid point.
SignalSpec spec_for_scale(const ExperimentConfig& config, double scale_value);

/// One record per (scale value, replication, rule), canonically ordered and
/// deterministic for a fixed base_seed.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records);

/// Counts of estimated change-point indices across records (which must share
/// one scale value); sorted by index.
std::vector<std::pair<int, long>> cp_histogram(const std::vector<ExperimentRecord>& records);

/// CSV serialization.  include_timing=false writes 0 in the wall_time_ms
/// column so identical configs produce byte-identical files.
std::string records_csv(const std::vector<ExperimentRecord>& records,
                        bool include_timing = false);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string histogram_csv(const std::vector<std::pair<int, long>>& hist);

}  // namespace cpcombss
