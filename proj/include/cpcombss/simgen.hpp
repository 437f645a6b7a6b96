#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Deterministic generation of staircase mean sequences and Gaussian noise.
// Noise comes from a counter-based stream (splitmix64 finalizer over
// seed + counter) fed through Box-Muller, so any sample is addressable
// without sequential state and identical seeds reproduce identical
// sequences.

namespace cpcombss {

/// Piecewise-constant mean description.  tau holds the true change points
/// (1-based, strictly increasing, within {2,...,n}); each adds a jump of
/// delta * sigma to the mean.  mu0 is the level of the first segment.
struct SignalSpec {
  int n = 0;
  std::vector<int> tau;
  double delta = 0.0;  // standardized per-jump shift
  double sigma = 1.0;  // noise standard deviation
  double mu0 = 0.0;

  /// Minimal spacing including the artificial change point tau_0 = 1.
  /// Meaningless (returns n) when tau is empty.
  int min_gap() const;

  /// Signal strength delta^2 * L.
  double signal_strength() const { return delta * delta * static_cast<double>(min_gap()); }

  /// Throws std::invalid_argument when the fields are inconsistent
  /// (n < 1, sigma <= 0, delta < 0, tau not increasing within {2..n},
  /// or spacing below 2).
  void validate() const;
};

/// mu_i = mu0 + delta * sigma * #{k : tau_k <= i}.
std::vector<double> staircase_mu(const SignalSpec& spec);

/// y = staircase_mu(spec) + noise_scale * eps with eps_i iid N(0, sigma^2).
/// noise_scale is a test hook (0 gives the exact mean sequence).
std::vector<double> simulate(const SignalSpec& spec, std::uint64_t seed,
                             double noise_scale = 1.0);

/// Standard normal draw at position `index` of the stream for `seed`.
double normal_at(std::uint64_t seed, std::uint64_t index);

/// splitmix64 finalizer; also the documented seed-derivation mix:
/// derived = mix64(mix64(base + (a+1)*GAMMA) + (b+1)*GAMMA).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

struct ExperimentConfig;  // defined in harness.hpp

/// The four study configurations (paper scale, 100 replications):
///   A1: n=150, tau=(31,61,91,121), delta in 0.25..4 step 0.25, known K=4
///   A2: delta=2, L in 15..65 step 5, tau=(L+1,..,4L+1), n=5L, known K=4
///   B1: n=100, tau=(26,51,76), delta in 1..4 step 0.5, unknown K (DP+CB)
///   B2: delta=2 (override b2_delta for the delta=1 reading), L in 10..50
///       step 5, tau=(L+1,2L+1,3L+1), n=4L, unknown K (DP+CB)
/// Throws std::invalid_argument for any other name.
ExperimentConfig experiment_config(const std::string& name, double b2_delta = 2.0);

}  // namespace cpcombss
