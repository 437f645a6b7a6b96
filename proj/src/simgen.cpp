#include "cpcombss/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cpcombss/harness.hpp"

namespace cpcombss {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Uniform on (0, 1] at stream position `counter` (never 0, so logs are safe).
double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t z = mix64(seed + (counter + 1) * kGolden);
  return static_cast<double>((z >> 11) + 1) * 0x1.0p-53;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = lo + step * static_cast<double>(i);
    if (v > hi + 1e-9) break;
    values.push_back(v);
  }
  return values;
}
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(base + (a + 1) * kGolden) + (b + 1) * kGolden);
}

double normal_at(std::uint64_t seed, std::uint64_t index) {
  // Box-Muller over the counter stream: the pair (2k, 2k+1) of normals is
  // produced from the uniforms at counters (2k, 2k+1).
  const std::uint64_t pair = index / 2;
  const double u1 = uniform_at(seed, 2 * pair);
  const double u2 = uniform_at(seed, 2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

int SignalSpec::min_gap() const {
  if (tau.empty()) return n;
  int prev = 1;  // artificial change point tau_0
  int gap = n;
  for (int t : tau) {
    gap = std::min(gap, t - prev);
    prev = t;
  }
  return gap;
}

void SignalSpec::validate() const {
  if (n < 1) throw std::invalid_argument("SignalSpec: n must be >= 1");
  if (sigma <= 0.0) throw std::invalid_argument("SignalSpec: sigma must be positive");
  if (delta < 0.0) throw std::invalid_argument("SignalSpec: delta must be nonnegative");
  int prev = 1;
  for (int t : tau) {
    if (t < 2 || t > n) throw std::invalid_argument("SignalSpec: tau entries must lie in {2..n}");
    if (t <= prev) throw std::invalid_argument("SignalSpec: tau must be strictly increasing");
    prev = t;
  }
  if (!tau.empty() && min_gap() < 2)
    throw std::invalid_argument("SignalSpec: minimal spacing must be >= 2");
}

std::vector<double> staircase_mu(const SignalSpec& spec) {
  spec.validate();
  std::vector<double> mu(static_cast<std::size_t>(spec.n), spec.mu0);
  const double jump = spec.delta * spec.sigma;
  for (int t : spec.tau)
    for (int i = t; i <= spec.n; ++i) mu[static_cast<std::size_t>(i) - 1] += jump;
  return mu;
}

std::vector<double> simulate(const SignalSpec& spec, std::uint64_t seed, double noise_scale) {
  auto y = staircase_mu(spec);
  if (noise_scale == 0.0) return y;
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += noise_scale * spec.sigma * normal_at(seed, i);
  return y;
}

ExperimentConfig experiment_config(const std::string& name, double b2_delta) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.replications = 100;
  cfg.base_seed = 1;

  if (name == "A1") {
    cfg.scale_axis = ExperimentConfig::ScaleAxis::delta;
    cfg.scale_values = grid(0.25, 4.0, 0.25);
    cfg.base_spec = {150, {31, 61, 91, 121}, 2.0, 1.0, 0.0};
    cfg.mode = SelectionMode::known_k;
  } else if (name == "A2") {
    cfg.scale_axis = ExperimentConfig::ScaleAxis::spacing;
    cfg.scale_values = grid(15.0, 65.0, 5.0);
    cfg.base_spec = {150, {31, 61, 91, 121}, 2.0, 1.0, 0.0};
    cfg.mode = SelectionMode::known_k;
  } else if (name == "B1") {
    cfg.scale_axis = ExperimentConfig::ScaleAxis::delta;
    cfg.scale_values = grid(1.0, 4.0, 0.5);
    cfg.base_spec = {100, {26, 51, 76}, 2.0, 1.0, 0.0};
    cfg.mode = SelectionMode::dp_and_cb;
  } else if (name == "B2") {
    cfg.scale_axis = ExperimentConfig::ScaleAxis::spacing;
    cfg.scale_values = grid(10.0, 50.0, 5.0);
    cfg.base_spec = {100, {26, 51, 76}, b2_delta, 1.0, 0.0};
    cfg.mode = SelectionMode::dp_and_cb;
  } else {
    throw std::invalid_argument("experiment_config: unknown experiment '" + name + "'");
  }
  return cfg;
}

}  // namespace cpcombss
