#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "cpcombss/changepoint.hpp"
#include "cpcombss/harness.hpp"
#include "cpcombss/io.hpp"
#include "cpcombss/lambda_select.hpp"
#include "cpcombss/metrics.hpp"
#include "cpcombss/simgen.hpp"

namespace {

struct DetectArgs {
  std::string input;
  std::string mode;
  int k = 0;
  double sigma = 0.0;
  double alpha = 0.05;
  double delta_lambda = 0.005;
  int merge_gap = 0;
  double threshold = 0.5;
  int max_iter = 1000;
  std::string out;
  std::string trace_out;
};

struct SimulateArgs {
  std::string spec_path;
  std::uint64_t seed = 1;
  std::string out;
};

struct ExperimentArgs {
  std::string name;
  int reps = 100;
  std::uint64_t seed = 1;
  std::string out_prefix;
  int threads = 0;
  double alpha = 0.05;
  double delta_lambda = 0.005;
  double threshold = 0.5;
  int max_iter = 1000;
  int merge_gap = 0;
  double b2_delta = 2.0;
  bool timing = false;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text << "\n";
  else
    cpcombss::write_text_file(out_path, text + "\n");
}

int run_detect(const DetectArgs& args) {
  const auto y = cpcombss::read_y_csv(args.input);
  if (y.size() < 2) throw std::runtime_error("input must contain at least 2 observations");

  cpcombss::CombssOptions opts;
  opts.threshold = args.threshold;
  opts.max_iterations = args.max_iter;

  cpcombss::DetectionResult result;
  std::string trace_csv;
  if (args.mode == "known-k") {
    if (args.k < 1) throw std::runtime_error("--mode known-k requires --k >= 1");
    const auto out = cpcombss::bisection_for_k(y, args.k, 0.0, -1.0, 50, opts);
    trace_csv = cpcombss::to_csv(out.trace);
    if (!args.trace_out.empty()) cpcombss::write_text_file(args.trace_out, trace_csv);
    if (!out.success) {
      std::cerr << "bisection failed to reach k=" << args.k << " after " << out.steps_used
                << " steps (lambda trace " << out.trace.entries.size() << " points)\n";
      return 2;
    }
    result = out.result;
  } else if (args.mode == "dp" || args.mode == "cb") {
    if (args.sigma <= 0.0)
      throw std::runtime_error("--mode " + args.mode + " requires --sigma > 0");
    const auto out =
        args.mode == "dp"
            ? cpcombss::discrepancy_principle(y, args.sigma, args.delta_lambda, -1.0, opts)
            : cpcombss::confidence_bound(y, args.sigma, args.alpha, args.delta_lambda, -1.0,
                                         opts);
    if (!args.trace_out.empty())
      cpcombss::write_text_file(args.trace_out, cpcombss::to_csv(out.trace));
    result = out.result;
  } else {
    throw std::runtime_error("unknown --mode '" + args.mode + "'");
  }

  if (args.merge_gap > 0) {
    auto merged = cpcombss::merge_close(result.tau_hat, args.merge_gap);
    std::vector<std::uint8_t> s(y.size(), 0);
    if (result.includes_tau0) s[0] = 1;
    for (int idx : merged) s[static_cast<std::size_t>(idx) - 1] = 1;
    result = cpcombss::restricted_ols(y, s, result.lambda_used);
  }

  emit(cpcombss::to_json(result), args.out);
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  const auto spec = cpcombss::read_signal_spec(args.spec_path);
  const auto y = cpcombss::simulate(spec, args.seed);
  cpcombss::write_y_csv(args.out, y);
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& args) {
  auto config = cpcombss::experiment_config(args.name, args.b2_delta);
  config.replications = args.reps;
  config.base_seed = args.seed;
  config.threads = args.threads;
  config.alpha = args.alpha;
  config.delta_lambda = args.delta_lambda;
  config.opts.threshold = args.threshold;
  config.opts.max_iterations = args.max_iter;
  if (args.merge_gap > 0) {
    config.merge_post_treatment = true;
    config.merge_gap = args.merge_gap;
  }
  const std::string prefix = args.out_prefix.empty() ? args.name : args.out_prefix;

  const auto start = std::chrono::steady_clock::now();
  const auto records = cpcombss::run_experiment(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  cpcombss::write_text_file(prefix + "_records.csv",
                            cpcombss::records_csv(records, args.timing));
  const auto summary = cpcombss::aggregate(records);
  cpcombss::write_text_file(prefix + "_summary.csv", cpcombss::summary_csv(summary));

  // Histogram of estimated locations at the largest scale value, all rules.
  std::vector<cpcombss::ExperimentRecord> top;
  for (const auto& rec : records)
    if (rec.scale_value == config.scale_values.back()) top.push_back(rec);
  cpcombss::write_text_file(prefix + "_histogram.csv",
                            cpcombss::histogram_csv(cpcombss::cp_histogram(top)));

  std::cout << cpcombss::summary_csv(summary);
  std::cerr << "wrote " << prefix << "_{records,summary,histogram}.csv ("
            << records.size() << " records, " << cpcombss::format_double(seconds)
            << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple mean change-point detection via continuous best-subset selection"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* cmd_detect = app.add_subcommand(
      "detect", "Detect change points in a single-column CSV sequence");
  cmd_detect->add_option("input", detect.input, "input CSV (one value per line, optional 'y' header)")
      ->required();
  cmd_detect->add_option("--mode", detect.mode, "known-k, dp or cb")->required();
  cmd_detect->add_option("--k", detect.k, "number of change points (known-k mode)");
  cmd_detect->add_option("--sigma", detect.sigma, "noise standard deviation (dp/cb modes)");
  cmd_detect->add_option("--alpha", detect.alpha, "confidence level for cb")->capture_default_str();
  cmd_detect->add_option("--delta-lambda", detect.delta_lambda, "lambda grid step")->capture_default_str();
  cmd_detect->add_option("--merge-gap", detect.merge_gap,
                         "merge estimates closer than this gap (post-treatment)");
  cmd_detect->add_option("--threshold", detect.threshold, "selection threshold on t")->capture_default_str();
  cmd_detect->add_option("--max-iter", detect.max_iter, "optimizer iteration cap")->capture_default_str();
  cmd_detect->add_option("--out", detect.out, "write result JSON here instead of stdout");
  cmd_detect->add_option("--trace-out", detect.trace_out, "write the lambda trace CSV here");

  SimulateArgs simulate;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Generate a sequence from a SignalSpec JSON");
  cmd_simulate->add_option("spec", simulate.spec_path, "SignalSpec JSON path")->required();
  cmd_simulate->add_option("--seed", simulate.seed, "noise seed")->capture_default_str();
  cmd_simulate->add_option("--out", simulate.out, "output CSV path")->required();

  ExperimentArgs experiment;
  auto* cmd_experiment =
      app.add_subcommand("experiment", "Run a Monte-Carlo study (A1, A2, B1 or B2)");
  cmd_experiment->add_option("name", experiment.name, "A1, A2, B1 or B2")->required();
  cmd_experiment->add_option("--reps", experiment.reps, "replications per grid value")->capture_default_str();
  cmd_experiment->add_option("--seed", experiment.seed, "base seed")->capture_default_str();
  cmd_experiment->add_option("--out", experiment.out_prefix,
                             "output prefix (default: experiment name)");
  cmd_experiment->add_option("--threads", experiment.threads,
                             "worker threads (0 = all cores)")->capture_default_str();
  cmd_experiment->add_option("--alpha", experiment.alpha, "confidence level for cb")->capture_default_str();
  cmd_experiment->add_option("--delta-lambda", experiment.delta_lambda, "lambda grid step")->capture_default_str();
  cmd_experiment->add_option("--threshold", experiment.threshold,
                             "selection threshold on t")->capture_default_str();
  cmd_experiment->add_option("--max-iter", experiment.max_iter, "optimizer iteration cap")->capture_default_str();
  cmd_experiment->add_option("--merge-gap", experiment.merge_gap,
                             "enable merge post-treatment with this gap");
  cmd_experiment->add_option("--b2-delta", experiment.b2_delta,
                             "jump size for experiment B2")->capture_default_str();
  cmd_experiment->add_flag("--timing", experiment.timing,
                           "write measured wall_time_ms (breaks byte-reproducibility)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(cmd_detect)) return run_detect(detect);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(simulate);
    return run_experiment_cmd(experiment);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
