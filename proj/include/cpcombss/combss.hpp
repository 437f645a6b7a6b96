#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpcombss/linalg.hpp"

// Continuous best-subset optimizer.  The boolean selection s in {0,1}^n is
// relaxed to t in [0,1]^n; for each t the coefficient surrogate solves
// M_t beta = T_t X^T y with M_t = T_t X^T X T_t + n (I - T_t^2), and the
// penalized objective
//
//   f(t) = (1/n) ||y - X T_t beta_t||^2 + lambda * sum_i t_i
//
// is minimized by Adam over the unconstrained reparameterization
// t_i = 1 - exp(-w_i^2).  The final t is thresholded to a binary selection.

namespace cpcombss {

struct CombssOptions {
  double learning_rate = 0.1;
  int max_iterations = 1000;
  double convergence_tol = 1e-4;  // sup-norm change in t per iteration
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double threshold = 0.5;
  // w = 0 is a stationary point of t = 1 - exp(-w^2), so the start value
  // must stay away from t = 0.
  double t_init = 0.5;
};

/// Result of one optimizer run at a fixed penalty.
struct CombssRun {
  double lambda = 0.0;
  std::vector<double> t_final;
  std::vector<std::uint8_t> s;
  int selected_count = 0;
  double objective_value = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

/// t_i = 1 - exp(-w_i^2), strictly inside [0, 1).
std::vector<double> map_w_to_t(std::span<const double> w);

/// Inverse of map_w_to_t on one coordinate (used for initialization).
double map_t_to_w(double t);

/// beta_t = M_t^{-1} T_t X^T y; one structured solve, O(n).
std::vector<double> beta_tilde(std::span<const double> t, std::span<const double> y);

/// (1/n) ||y - X T_t beta_t||^2 + lambda * sum t_i, evaluated on the clamped t.
double objective(std::span<const double> t, std::span<const double> y, double lambda);

/// d f / d w for f(w) = objective(map_w_to_t(w), y, lambda).  Exactly two
/// structured solves: beta_t and the adjoint v = M_t^{-1} T_t X^T r with
/// r = y - X T_t beta_t; the rest is O(n) elementwise work and one
/// gram_apply, chain-ruled through dt/dw = 2 w exp(-w^2).
std::vector<double> gradient(std::span<const double> w, std::span<const double> y,
                             double lambda);

/// s_i = 1 iff t_i > threshold (strict).
std::vector<std::uint8_t> threshold_t(std::span<const double> t, double threshold);

/// Adam descent on w from t_init; deterministic for identical inputs.
/// Non-convergence is reported through converged=false, never as an error.
CombssRun run_combss(std::span<const double> y, double lambda,
                     const CombssOptions& opts = {});

}  // namespace cpcombss
