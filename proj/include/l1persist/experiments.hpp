#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "l1persist/risk.hpp"
#include "l1persist/simgen.hpp"
#include "l1persist/solvers.hpp"

namespace l1persist {

/// Called after each finished unit of work with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// ---------------------------------------------------------------------------
// Lambda sweep on the classification scenario (exponential loss).

enum class TestSetMode {
  fresh,   ///< a new test sample for every (lambda, repetition)
  shared,  ///< one test sample reused by every cell
};

struct SweepOptions {
  Section4Spec scenario;
  std::vector<double> lambdas;
  std::size_t reps = 20;
  std::size_t test_n = 1000;
  SolveConfig cfg;
  std::uint64_t seed = 0;
  TestSetMode test_mode = TestSetMode::fresh;
  unsigned threads = 1;
  ProgressFn progress;
};

/// One (lambda, repetition) fit.
struct SweepCell {
  std::size_t lambda_index = 0;
  std::size_t rep = 0;
  double v_training = 0.0;
  double v_real = 0.0;
  double b1_norm = 0.0;
  double b2_norm = 0.0;
  double beta_l1 = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
};

/// Averages over `reps` cells for one lambda.
struct SweepRow {
  double lambda = 0.0;
  double v_training = 0.0;
  double v_real = 0.0;
  double b1_norm = 0.0;
  double b2_norm = 0.0;
  double beta_l1 = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::size_t converged = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Ordered by (lambda_index, rep).
  std::vector<SweepCell> cells;
};

/// Cell (l, r) trains on derive_seed(seed, {l, r, 0}) and, in fresh mode,
/// tests on derive_seed(seed, {l, r, 1}).
SweepResult lambda_sweep(const SweepOptions& opts);

/// Inclusive grid a, a+step, ..., b; the count is rounded so b is hit exactly
/// when (b - a) / step is an integer up to rounding.
std::vector<double> lambda_grid(double first, double step, double last);

// ---------------------------------------------------------------------------
// Persistence of l1-constrained least squares on the sparse Gaussian model.

/// k_n = scale * n^exponent; the l1 budget is sqrt(k_n).
struct KRule {
  double scale = 5.0;
  double exponent = 0.0;
  double operator()(std::size_t n) const;
};

struct PersistenceOptions {
  std::vector<std::size_t> ns;
  /// m = ceil(n^alpha).
  double alpha = 1.2;
  KRule k_rule;
  /// beta_star has this many equal entries and unit l2 norm.
  std::size_t sparsity = 5;
  double sigma = 1.0;
  std::size_t reps = 20;
  SolveConfig cfg;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  ProgressFn progress;
};

struct PersistencePoint {
  std::size_t n = 0;
  std::size_t m = 0;
  double k_n = 0.0;
  double budget = 0.0;
  /// Median over repetitions of L_F(beta_hat) - L_F(beta_star).
  double excess_risk = 0.0;
  double mean_excess_risk = 0.0;
  std::size_t reps = 0;
  std::size_t converged = 0;
};

std::size_t dimension_for(std::size_t n, double alpha);

/// Point (i, r) uses derive_seed(seed, {i, r}).
std::vector<PersistencePoint> persistence_curve(const PersistenceOptions& opts);

/// L_F(beta) - L_F(beta_star) under the Gaussian model.
double excess_risk(const Coefficients& beta, const Coefficients& beta_star, double sigma);

// ---------------------------------------------------------------------------
// Ridge versus l1 on null data (y independent of x).

struct RidgeDemoOptions {
  std::size_t n = 200;
  std::size_t m = 2000;
  double sigma = 1.0;
  double delta = 0.7;
  std::vector<double> l1_budgets;
  std::size_t reps = 20;
  /// Held-out sample size for choosing the l1 budget; 0 means n.
  std::size_t holdout_n = 0;
  SolveConfig cfg;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  ProgressFn progress;
};

struct RidgeDemoRep {
  double ridge_risk = 0.0;
  /// ||beta_hat||_2 / delta.
  double ridge_norm_ratio = 0.0;
  bool ridge_converged = false;
  std::vector<double> l1_risk;
  std::vector<double> l1_holdout_risk;
  std::vector<double> l1_l2_norm;
  /// ||beta_hat||_1 / budget.
  std::vector<double> l1_budget_used;
  std::size_t selected = 0;
};

struct RidgeDemoResult {
  std::vector<RidgeDemoRep> reps;
  double mean_ridge_risk = 0.0;
  double mean_ridge_norm_ratio = 0.0;
  std::vector<double> mean_l1_risk;
  std::vector<std::size_t> times_selected;
  /// Mean population risk of the held-out-selected l1 budget.
  double mean_selected_risk = 0.0;
};

/// Repetition r trains on derive_seed(seed, {r, 0}) and selects on
/// derive_seed(seed, {r, 1}).
RidgeDemoResult ridge_vs_l1_demo(const RidgeDemoOptions& opts);

// ---------------------------------------------------------------------------
// Diagnostics.

using RiskReference = std::function<double(const Coefficients&)>;

/// Max over random probes of |L_train(beta) - reference(beta)|. Probes have a
/// uniformly random size-k support with entries uniform in [-radius, radius].
double sup_deviation(const Dataset& train, std::size_t probe_count, std::size_t k, double radius,
                     Loss loss, const RiskReference& reference, std::uint64_t seed);
/// Same, with the empirical risk on `oracle` as the reference.
double sup_deviation(const Dataset& train, std::size_t probe_count, std::size_t k, double radius,
                     Loss loss, const Dataset& oracle, std::uint64_t seed);

/// |L_train(beta) - L_test(beta)|.
double self_consistency_gap(const Dataset& train, const Dataset& test, const Coefficients& beta,
                            Loss loss);

// ---------------------------------------------------------------------------
// Output tables.

/// Header `lambda,v_training,v_real,b1_norm,b2_norm,beta_l1,reps,seed`.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// Scenario, seed and per-cell solver status.
nlohmann::json sweep_sidecar(const SweepOptions& opts, const SweepResult& result);

/// Header `n,m,k_n,budget,median_excess_risk,mean_excess_risk,reps,converged`.
std::string persistence_to_csv(const std::vector<PersistencePoint>& points);

/// Header `method,radius,mean_population_risk,mean_l2_norm,mean_norm_ratio,times_selected`.
/// The norm ratio is ||beta||_2 / delta for the ridge row and ||beta||_1 / budget
/// for l1 rows.
std::string ridge_demo_to_csv(const RidgeDemoOptions& opts, const RidgeDemoResult& result);

nlohmann::json solve_config_to_json(const SolveConfig& cfg);

}  // namespace l1persist
