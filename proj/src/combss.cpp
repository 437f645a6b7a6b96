#include "cpcombss/combss.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cpcombss {

namespace {

// Shared buffers for repeated objective/gradient evaluations on one y.
class Evaluator {
 public:
  explicit Evaluator(std::span<const double> y)
      : n_(y.size()),
        y_(y.begin(), y.end()),
        sy_(suffix_sum(y)),
        mt_(n_),
        t_(n_),
        e_(n_),
        rhs_(n_),
        beta_(n_),
        fitted_(n_),
        resid_(n_),
        p_(n_),
        adj_(n_),
        q_(n_) {
    scaling_.t.resize(n_);
    scaling_.d.resize(n_);
  }

  std::size_t size() const { return n_; }

  double objective_at(std::span<const double> t, double lambda) {
    set_scaling(t);
    solve_beta();
    const double rss = residual_norm2();
    double tsum = 0.0;
    for (double ti : scaling_.t) tsum += ti;
    return rss / static_cast<double>(n_) + lambda * tsum;
  }

  // grad_i = df/dw_i; t and dt/dw are derived from w internally.
  void gradient_at(std::span<const double> w, double lambda, std::span<double> grad) {
    assert(w.size() == n_ && grad.size() == n_);
    for (std::size_t i = 0; i < n_; ++i) {
      e_[i] = std::exp(-w[i] * w[i]);
      t_[i] = 1.0 - e_[i];
    }
    set_scaling(t_);
    solve_beta();
    for (std::size_t i = 0; i < n_; ++i) resid_[i] = y_[i] - fitted_[i];
    detail::suffix_sum_into(resid_, p_);

    // Adjoint solve: adj = M_t^{-1} T_t X^T resid.
    const auto& t = scaling_.t;
    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = t[i] * p_[i];
    mt_.solve(scaling_, rhs_, adj_);

    // q = X^T X (t .* adj)
    for (std::size_t i = 0; i < n_; ++i) q_[i] = t[i] * adj_[i];
    detail::prefix_sum_into(q_, q_);
    detail::suffix_sum_into(q_, q_);

    const double nd = static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double dgdt = -(2.0 / nd) * (beta_[i] * p_[i] + adj_[i] * p_[i] -
                                         q_[i] * beta_[i] +
                                         2.0 * nd * t[i] * beta_[i] * adj_[i]) +
                          lambda;
      grad[i] = dgdt * 2.0 * w[i] * e_[i];
    }
  }

  std::span<const double> beta() const { return beta_; }

 private:
  void set_scaling(std::span<const double> t) {
    const double nd = static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double ti = std::clamp(t[i], kEpsilonT, 1.0 - kEpsilonT);
      scaling_.t[i] = ti;
      scaling_.d[i] = nd * (1.0 - ti * ti);
    }
  }

  void solve_beta() {
    const auto& t = scaling_.t;
    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = t[i] * sy_[i];
    mt_.solve(scaling_, rhs_, beta_);
    for (std::size_t i = 0; i < n_; ++i) fitted_[i] = t[i] * beta_[i];
    detail::prefix_sum_into(fitted_, fitted_);
  }

  double residual_norm2() const {
    double rss = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = y_[i] - fitted_[i];
      rss += r * r;
    }
    return rss;
  }

  std::size_t n_;
  std::vector<double> y_;
  std::vector<double> sy_;
  DiagonalScaling scaling_;
  detail::MtWorkspace mt_;
  std::vector<double> t_, e_, rhs_, beta_, fitted_, resid_, p_, adj_, q_;
};

}  // namespace

std::vector<double> map_w_to_t(std::span<const double> w) {
  std::vector<double> t(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) t[i] = -std::expm1(-w[i] * w[i]);
  return t;
}

double map_t_to_w(double t) { return std::sqrt(-std::log1p(-t)); }

std::vector<double> beta_tilde(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("beta_tilde: size mismatch");
  const auto scaling = DiagonalScaling::from_t(t);
  auto rhs = suffix_sum(y);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= scaling.t[i];
  return mt_solve(scaling, rhs);
}

double objective(std::span<const double> t, std::span<const double> y, double lambda) {
  if (t.size() != y.size()) throw std::invalid_argument("objective: size mismatch");
  Evaluator ev(y);
  return ev.objective_at(t, lambda);
}

std::vector<double> gradient(std::span<const double> w, std::span<const double> y,
                             double lambda) {
  if (w.size() != y.size()) throw std::invalid_argument("gradient: size mismatch");
  Evaluator ev(y);
  std::vector<double> g(w.size());
  ev.gradient_at(w, lambda, g);
  return g;
}

std::vector<std::uint8_t> threshold_t(std::span<const double> t, double threshold) {
  std::vector<std::uint8_t> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = t[i] > threshold ? 1 : 0;
  return s;
}

CombssRun run_combss(std::span<const double> y, double lambda, const CombssOptions& opts) {
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("run_combss: need at least 2 observations");

  Evaluator ev(y);
  const double w0 = map_t_to_w(opts.t_init);
  std::vector<double> w(n, w0);
  std::vector<double> grad(n), m(n, 0.0), v(n, 0.0);
  std::vector<double> t_prev = map_w_to_t(w);

  CombssRun run;
  run.lambda = lambda;

  int iter = 0;
  bool converged = false;
  double beta1_pow = 1.0, beta2_pow = 1.0;
  while (iter < opts.max_iterations) {
    ++iter;
    ev.gradient_at(w, lambda, grad);
    beta1_pow *= opts.adam_beta1;
    beta2_pow *= opts.adam_beta2;
    const double corr1 = 1.0 - beta1_pow;
    const double corr2 = 1.0 - beta2_pow;
    double max_dt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = opts.adam_beta1 * m[i] + (1.0 - opts.adam_beta1) * grad[i];
      v[i] = opts.adam_beta2 * v[i] + (1.0 - opts.adam_beta2) * grad[i] * grad[i];
      const double step = opts.learning_rate * (m[i] / corr1) /
                          (std::sqrt(v[i] / corr2) + opts.adam_epsilon);
      w[i] -= step;
      const double ti = -std::expm1(-w[i] * w[i]);
      max_dt = std::max(max_dt, std::abs(ti - t_prev[i]));
      t_prev[i] = ti;
    }
    if (max_dt <= opts.convergence_tol) {
      converged = true;
      break;
    }
  }

  run.t_final = std::move(t_prev);
  run.s = threshold_t(run.t_final, opts.threshold);
  run.selected_count = 0;
  for (auto si : run.s) run.selected_count += si;
  run.objective_value = ev.objective_at(run.t_final, lambda);
  run.iterations_used = iter;
  run.converged = converged;
  return run;
}

}  // namespace cpcombss
