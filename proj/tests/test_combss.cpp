#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cpcombss/changepoint.hpp"
#include "cpcombss/combss.hpp"
#include "dense_reference.hpp"

using namespace cpcombss;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// central finite differences of the full penalized objective in w
std::vector<double> fd_gradient(const std::vector<double>& w, const std::vector<double>& y,
                                double lambda, double h = 1e-6) {
  std::vector<double> g(w.size());
  std::vector<double> wp = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + h;
    const double fp = objective(map_w_to_t(wp), y, lambda);
    wp[i] = w[i] - h;
    const double fm = objective(map_w_to_t(wp), y, lambda);
    wp[i] = w[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double max_rel_gradient_error(const std::vector<double>& got, const std::vector<double>& fd) {
  double scale = 1e-12;
  for (double v : fd) scale = std::max(scale, std::abs(v));
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    err = std::max(err, std::abs(got[i] - fd[i]) / scale);
  return err;
}

}  // namespace

TEST_CASE("map_w_to_t values") {
  CHECK(map_w_to_t(std::vector<double>{0.0})[0] == 0.0);
  CHECK(map_w_to_t(std::vector<double>{std::sqrt(std::log(2.0))})[0] ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(map_w_to_t(std::vector<double>{3.0})[0] ==
        doctest::Approx(1.0 - std::exp(-9.0)).epsilon(1e-12));
  CHECK(map_t_to_w(0.5) == doctest::Approx(std::sqrt(std::log(2.0))));
}

TEST_CASE("beta_tilde limit cases") {
  // saturated model interpolates: beta ~ X^{-1} y = first differences
  const auto b_full = beta_tilde(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 3.0});
  CHECK(b_full[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(b_full[1] == doctest::Approx(2.0).epsilon(1e-4));

  const auto b_zero = beta_tilde(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 3.0});
  CHECK(std::abs(b_zero[0]) < 1e-6);
  CHECK(std::abs(b_zero[1]) < 1e-6);
}

TEST_CASE("beta_tilde frozen 2x2 case") {
  // dense solve of M u = T X^T y with M = [[2.0,0.25],[0.25,1.75]], rhs (1, 0.5)
  const auto b = beta_tilde(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 1.0});
  CHECK(b[0] == doctest::Approx(26.0 / 55.0).epsilon(1e-9));
  CHECK(b[1] == doctest::Approx(12.0 / 55.0).epsilon(1e-9));
}

TEST_CASE("objective limit cases") {
  const std::vector<double> y{1.0, 3.0};
  CHECK(objective(std::vector<double>{0.0, 0.0}, y, 0.7) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(objective(std::vector<double>{1.0, 1.0}, y, 0.0) == doctest::Approx(0.0).scale(1).epsilon(1e-6));
}

TEST_CASE("objective penalty separates exactly") {
  std::mt19937_64 rng(7);
  const auto y = random_vector(rng, 12, -2, 2);
  const auto t = random_vector(rng, 12, 0.1, 0.9);
  double tsum = 0.0;
  for (double ti : t) tsum += ti;
  const double f1 = objective(t, y, 0.3);
  const double f2 = objective(t, y, 1.1);
  CHECK(f2 - f1 == doctest::Approx(0.8 * tsum).epsilon(1e-12));
}

TEST_CASE("gradient vanishes at w = 0") {
  const auto g = gradient(std::vector<double>{0.0, 0.0, 0.0},
                          std::vector<double>{1.0, 0.0, 2.0}, 0.1);
  for (double gi : g) CHECK(gi == 0.0);
}

TEST_CASE("gradient matches finite differences on the 3-point example") {
  const std::vector<double> y{1.0, 0.0, 2.0};
  const std::vector<double> w(3, map_t_to_w(0.5));
  const auto g = gradient(w, y, 0.1);
  const auto fd = fd_gradient(w, y, 0.1);
  CHECK(max_rel_gradient_error(g, fd) < 1e-5);
}

TEST_CASE("gradient matches finite differences on random instances") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(2, 32);
  const double lambdas[] = {0.0, 0.1, 1.0};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = size(rng);
    const auto t = random_vector(rng, static_cast<std::size_t>(n), 0.05, 0.95);
    std::vector<double> w(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) w[i] = map_t_to_w(t[i]);
    const auto y = random_vector(rng, static_cast<std::size_t>(n), -3, 3);
    const double lambda = lambdas[trial % 3];
    const auto g = gradient(w, y, lambda);
    const auto fd = fd_gradient(w, y, lambda);
    worst = std::max(worst, max_rel_gradient_error(g, fd));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("corner objective equals restricted OLS") {
  // equality of the relaxed objective and the exact subset objective at
  // binary corners, checked exhaustively for small n
  std::mt19937_64 rng(55);
  for (int n : {2, 5, 10}) {
    const auto y = random_vector(rng, static_cast<std::size_t>(n), -3, 3);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::uint8_t> s(static_cast<std::size_t>(n));
      std::vector<double> t(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
        t[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      }
      const double relaxed = objective(t, y, 0.0);
      const double exact = restricted_ols(y, s).rss / static_cast<double>(n);
      CHECK(relaxed == doctest::Approx(exact).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("threshold_t uses strict comparison") {
  CHECK(threshold_t(std::vector<double>{0.9, 0.1}, 0.5) == std::vector<std::uint8_t>{1, 0});
  CHECK(threshold_t(std::vector<double>{0.5, 0.5}, 0.5) == std::vector<std::uint8_t>{0, 0});
  CHECK(threshold_t(std::vector<double>{1.0}, 0.99) == std::vector<std::uint8_t>{1});
}

TEST_CASE("run_combss on constant-zero data selects nothing") {
  const std::vector<double> y(16, 0.0);
  const auto run = run_combss(y, 0.1);
  CHECK(run.selected_count == 0);
  for (auto si : run.s) CHECK(si == 0);
}

TEST_CASE("run_combss recovers a strong single jump") {
  std::vector<double> y(20, 0.0);
  for (std::size_t i = 10; i < 20; ++i) y[i] = 10.0;  // jump at position 11 (1-based)

  // exhaustive oracle: {11} is the best subset of size <= 2
  const auto best = ref::best_subset_exhaustive(y, 2);
  REQUIRE(best == std::vector<int>{11});

  const auto run = run_combss(y, 0.05);
  CHECK(run.s[10] == 1);
  CHECK(run.selected_count >= 1);
  CHECK(run.selected_count <= 2);  // the artificial tau_0 column may join
  for (std::size_t i = 0; i < 20; ++i)
    if (i != 10 && i != 0) CHECK(run.s[i] == 0);
}

TEST_CASE("run_combss with a dominating penalty selects nothing") {
  std::vector<double> y(20, 0.0);
  for (std::size_t i = 10; i < 20; ++i) y[i] = 10.0;
  const auto run = run_combss(y, 50.0);
  CHECK(run.selected_count == 0);
}

TEST_CASE("run_combss never increases the objective versus the start") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto y = random_vector(rng, 24, -2, 4);
    CombssOptions opts;
    const auto run = run_combss(y, 0.2, opts);
    const std::vector<double> t0(24, opts.t_init);
    CHECK(run.objective_value <= objective(t0, y, 0.2) + 1e-12);
  }
}

TEST_CASE("run_combss is deterministic") {
  std::mt19937_64 rng(99);
  const auto y = random_vector(rng, 30, -1, 3);
  const auto a = run_combss(y, 0.15);
  const auto b = run_combss(y, 0.15);
  CHECK(a.t_final == b.t_final);
  CHECK(a.s == b.s);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.iterations_used == b.iterations_used);
  CHECK(a.converged == b.converged);
}
