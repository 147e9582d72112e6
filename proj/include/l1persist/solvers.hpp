#pragma once

#include <cstddef>
#include <vector>

#include "l1persist/risk.hpp"

namespace l1persist {

/// Optimizer controls shared by every solver.
struct SolveConfig {
  std::size_t max_iter = 10000;
  /// Stop once the relative change of the objective drops below `tol` and
  /// the optimality certificate is below `certificate_tol`.
  double tol = 1e-8;
  double step_init = 1.0;
  /// Step shrink factor on a rejected trial, in (0, 1).
  double backtrack = 0.5;
  /// Sufficient-decrease constant of the non-accelerated line search.
  double armijo = 1e-4;
  double certificate_tol = 1e-5;
  /// Accelerated (momentum with function-value restart) iteration; accepted
  /// iterates are monotone in either mode.
  bool accelerate = true;
  /// Stop and flag `diverged` when ||beta||_2 exceeds this. 0 disables.
  double divergence_norm = 0.0;
  /// Keep the accepted objective values in SolveReport::objective_trace.
  bool record_trace = false;

  /// Throws std::invalid_argument when a control is out of range.
  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  double objective = 0.0;
  /// KKT residual for the penalized form, projected-gradient fixed-point
  /// residual for the ball-constrained forms.
  double kkt_residual = 0.0;
  bool converged = false;
  bool diverged = false;
  std::size_t step_rejections = 0;
  double final_step = 0.0;
  std::vector<double> objective_trace;
};

struct SolveResult {
  Coefficients beta;
  SolveReport report;
};

/// sign(x) max(|x| - t, 0).
double soft_threshold(double x, double t);

/// Euclidean projection onto {w : ||w||_1 <= radius}. Sort-based threshold;
/// ties in |v| are ordered by ascending index.
Vector project_l1(const Vector& v, double radius);

/// Euclidean projection onto {w : ||w||_2 <= radius}.
Vector project_l2(const Vector& v, double radius);

/// min_beta  L_n(beta) + lambda ||beta||_1, started from beta = 0.
SolveResult solve_penalized(const Dataset& d, Loss loss, double lambda,
                            const SolveConfig& cfg = {});

/// min_beta  L_n(beta)  s.t. ||beta||_1 <= budget, started from beta = 0.
SolveResult solve_constrained(const Dataset& d, Loss loss, double budget,
                              const SolveConfig& cfg = {});

/// min_beta  L_n(beta)  s.t. ||beta||_2 <= delta, started from beta = 0.
SolveResult solve_ridge_constrained(const Dataset& d, Loss loss, double delta,
                                    const SolveConfig& cfg = {});

/// With g the risk gradient at beta:
///   max( max_{beta_j != 0} |g_j + lambda sign(beta_j)|,
///        max_{beta_j == 0} max(|g_j| - lambda, 0) ).
double kkt_residual(const Dataset& d, Loss loss, double lambda, const Coefficients& beta);

/// ||beta - P(beta - step g)||_2 / step for the l1 ball (l2 ball when
/// `euclidean_ball`) of the given radius.
double projected_gradient_residual(const Dataset& d, Loss loss, double radius,
                                   const Coefficients& beta, double step,
                                   bool euclidean_ball = false);

}  // namespace l1persist
