#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpcombss/harness.hpp"
#include "cpcombss/simgen.hpp"

using namespace cpcombss;

TEST_CASE("staircase_mu builds the A1 staircase") {
  SignalSpec spec{150, {31, 61, 91, 121}, 2.0, 1.0, 0.0};
  const auto mu = staircase_mu(spec);
  for (int i = 1; i <= 150; ++i) {
    double want = 0.0;
    if (i >= 31) want = 2.0;
    if (i >= 61) want = 4.0;
    if (i >= 91) want = 6.0;
    if (i >= 121) want = 8.0;
    CHECK(mu[static_cast<std::size_t>(i) - 1] == want);
  }
}

TEST_CASE("staircase_mu corner cases") {
  SignalSpec flat{10, {4, 8}, 0.0, 1.0, 0.5};
  const auto mu = staircase_mu(flat);
  for (double v : mu) CHECK(v == 0.5);

  SignalSpec tiny{4, {3}, 1.0, 2.0, 0.0};
  CHECK(staircase_mu(tiny) == std::vector<double>{0, 0, 2, 2});
}

TEST_CASE("staircase_mu changes exactly at tau") {
  SignalSpec spec{80, {12, 30, 57}, 1.5, 2.0, -1.0};
  const auto mu = staircase_mu(spec);
  for (int i = 2; i <= 80; ++i) {
    const bool is_cp =
        std::find(spec.tau.begin(), spec.tau.end(), i) != spec.tau.end();
    if (is_cp)
      CHECK(mu[static_cast<std::size_t>(i) - 1] != mu[static_cast<std::size_t>(i) - 2]);
    else
      CHECK(mu[static_cast<std::size_t>(i) - 1] == mu[static_cast<std::size_t>(i) - 2]);
  }
}

TEST_CASE("SignalSpec validation") {
  CHECK_THROWS(SignalSpec{10, {5, 4}, 1, 1, 0}.validate());   // not increasing
  CHECK_THROWS(SignalSpec{10, {1}, 1, 1, 0}.validate());      // tau_0 is implicit
  CHECK_THROWS(SignalSpec{10, {11}, 1, 1, 0}.validate());     // out of range
  CHECK_THROWS(SignalSpec{10, {2}, 1, 1, 0}.validate());      // spacing 1 < 2
  CHECK_THROWS(SignalSpec{10, {5}, 1, 0.0, 0}.validate());    // sigma
  CHECK_NOTHROW(SignalSpec{10, {3, 7}, 1, 1, 0}.validate());
  CHECK_NOTHROW(SignalSpec{10, {}, 0, 1, 0}.validate());      // no change points
}

TEST_CASE("min_gap and signal strength") {
  SignalSpec spec{150, {31, 61, 91, 121}, 2.0, 1.0, 0.0};
  CHECK(spec.min_gap() == 30);
  CHECK(spec.signal_strength() == doctest::Approx(4.0 * 30.0));

  SignalSpec uneven{50, {4, 40}, 1.0, 1.0, 0.0};
  CHECK(uneven.min_gap() == 3);
}

TEST_CASE("simulate is deterministic and honors the noiseless hook") {
  SignalSpec spec{64, {17, 43}, 2.0, 1.5, 0.0};
  const auto a = simulate(spec, 42);
  const auto b = simulate(spec, 42);
  CHECK(a == b);
  const auto c = simulate(spec, 43);
  CHECK(a != c);
  CHECK(simulate(spec, 42, 0.0) == staircase_mu(spec));
}

TEST_CASE("noise stream has the right moments") {
  const std::size_t n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = normal_at(2024, i);
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sumsq / static_cast<double>(n) - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("noise stream passes a KS check against the standard normal") {
  const std::size_t n = 100000;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = normal_at(7, i);
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    d = std::max(d, std::max(std::abs(hi - cdf), std::abs(cdf - lo)));
  }
  // 1% critical value: 1.6276 / sqrt(n)
  CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("derived seeds separate replications") {
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST_CASE("experiment_config reproduces the study grids") {
  const auto a1 = experiment_config("A1");
  CHECK(a1.scale_values.size() == 16);
  CHECK(a1.scale_values.front() == doctest::Approx(0.25));
  CHECK(a1.scale_values.back() == doctest::Approx(4.0));
  CHECK(a1.base_spec.n == 150);
  CHECK(a1.base_spec.tau == std::vector<int>{31, 61, 91, 121});
  CHECK(a1.mode == SelectionMode::known_k);
  CHECK(a1.replications == 100);

  const auto a2 = experiment_config("A2");
  CHECK(a2.scale_values.size() == 11);
  CHECK(a2.scale_values.front() == doctest::Approx(15.0));
  CHECK(a2.scale_values.back() == doctest::Approx(65.0));
  CHECK(a2.base_spec.delta == doctest::Approx(2.0));

  const auto b1 = experiment_config("B1");
  CHECK(b1.scale_values.size() == 7);
  CHECK(b1.base_spec.n == 100);
  CHECK(b1.base_spec.tau == std::vector<int>{26, 51, 76});
  CHECK(b1.mode == SelectionMode::dp_and_cb);

  const auto b2 = experiment_config("B2");
  CHECK(b2.scale_values.size() == 9);
  CHECK(b2.base_spec.delta == doctest::Approx(2.0));
  CHECK(experiment_config("B2", 1.0).base_spec.delta == doctest::Approx(1.0));

  CHECK_THROWS((void)experiment_config("C9"));
}
