// Benchmark comparing the structured O(n) solver against the serial dense
// reference, plus the harness at 1 vs N threads.  Not a ctest target; run
// manually: build/bench/cpcombss_bench

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "cpcombss/harness.hpp"
#include "cpcombss/linalg.hpp"
#include "cpcombss/simgen.hpp"
#include "dense_reference.hpp"

using namespace cpcombss;
using Clock = std::chrono::steady_clock;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double median_of(std::vector<double>& times) {
  std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2),
                   times.end());
  return times[times.size() / 2];
}

double time_structured(std::size_t n, int reps, std::mt19937_64& rng) {
  const auto t = random_vector(rng, n, 0.05, 0.95);
  const auto b = random_vector(rng, n, -3.0, 3.0);
  const auto scaling = DiagonalScaling::from_t(t);
  detail::MtWorkspace ws(n);
  std::vector<double> u(n);
  ws.solve(scaling, b, u);
  std::vector<double> times;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    ws.solve(scaling, b, u);
    times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return median_of(times);
}

double time_dense(std::size_t n, int reps, std::mt19937_64& rng) {
  const auto t = random_vector(rng, n, 0.05, 0.95);
  const auto b = random_vector(rng, n, -3.0, 3.0);
  const auto m = ref::dense_mt(t);
  std::vector<double> times;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    const auto u = ref::dense_solve(m, b);
    times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return median_of(times);
}

}  // namespace

int main() {
  std::mt19937_64 rng(1234);

  std::printf("M_t solve: structured O(n) vs dense LU (median seconds)\n");
  std::printf("%10s %14s %14s %10s\n", "n", "structured", "dense", "speedup");
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const double fast = time_structured(n, 200, rng);
    const double slow = time_dense(n, n >= 2048 ? 5 : 20, rng);
    std::printf("%10zu %14.3e %14.3e %9.1fx\n", n, fast, slow, slow / fast);
  }

  std::printf("\nstructured solve scaling (median seconds, 500 solves)\n");
  std::printf("%10s %14s\n", "n", "structured");
  double prev = 0.0;
  for (std::size_t n : {100000u, 1000000u}) {
    const double med = time_structured(n, 500, rng);
    std::printf("%10zu %14.3e%s\n", n, med,
                prev > 0.0 ? ("  (ratio " + std::to_string(med / prev) + ")").c_str() : "");
    prev = med;
  }

  std::printf("\nharness: A1 subset, 8 replications, 1 vs %d threads (seconds)\n",
              omp_get_max_threads());
  auto cfg = experiment_config("A1");
  cfg.scale_values = {2.0, 3.0};
  cfg.replications = 8;
  for (int threads : {1, omp_get_max_threads()}) {
    cfg.threads = threads;
    const auto t0 = Clock::now();
    const auto records = run_experiment(cfg);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("  threads=%d: %.2f s (%zu records)\n", threads, secs, records.size());
  }
  return 0;
}
