#include "l1persist/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>

#include "l1persist/io.hpp"
#include "l1persist/parallel.hpp"
#include "l1persist/rng.hpp"

namespace l1persist {

namespace {

double risk_or_inf(const Dataset& d, const Coefficients& beta, Loss loss) {
  const auto r = mean_loss(loss, d.y(), predict_margin(d, beta));
  return r ? *r : std::numeric_limits<double>::infinity();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Thread-safe wrapper around an optional progress callback.
class Progress {
 public:
  Progress(const ProgressFn& fn, std::size_t total) : fn_(fn), total_(total) {}
  void tick() {
    if (!fn_) return;
    std::lock_guard lock(mu_);
    fn_(++done_, total_);
  }

 private:
  const ProgressFn& fn_;
  std::size_t total_;
  std::size_t done_ = 0;
  std::mutex mu_;
};

}  // namespace

std::vector<double> lambda_grid(double first, double step, double last) {
  if (!(step > 0.0) || !(last >= first)) {
    throw std::invalid_argument("lambda grid needs step > 0 and last >= first");
  }
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  // Snap to 12 decimals so 0.01 + 3 * 0.02 prints as 0.07.
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::round((first + static_cast<double>(i) * step) * 1e12) / 1e12;
  }
  return out;
}

SweepResult lambda_sweep(const SweepOptions& opts) {
  if (opts.reps == 0) throw std::invalid_argument("sweep: reps must be >= 1");
  if (opts.test_n == 0) throw std::invalid_argument("sweep: test_n must be >= 1");
  if (opts.lambdas.empty()) throw std::invalid_argument("sweep: no lambdas");
  for (double l : opts.lambdas) {
    if (!(l >= 0.0)) throw std::invalid_argument("sweep: lambdas must be >= 0");
  }
  opts.cfg.validate();
  const auto& sc = opts.scenario;

  std::optional<Dataset> shared_test;
  if (opts.test_mode == TestSetMode::shared) {
    shared_test = gen_section4(opts.test_n, sc.big_m, derive_seed(opts.seed, {~0ULL}), sc.convention);
  }

  const std::size_t total = opts.lambdas.size() * opts.reps;
  std::vector<SweepCell> cells(total);
  Progress progress(opts.progress, total);
  parallel_for(total, opts.threads, [&](std::size_t idx) {
    const std::size_t l = idx / opts.reps;
    const std::size_t r = idx % opts.reps;
    const Dataset train = gen_section4(sc.n, sc.big_m, derive_seed(opts.seed, {l, r, 0}), sc.convention);
    std::optional<Dataset> fresh_test;
    if (!shared_test) {
      fresh_test = gen_section4(opts.test_n, sc.big_m, derive_seed(opts.seed, {l, r, 1}), sc.convention);
    }
    const Dataset& test = shared_test ? *shared_test : *fresh_test;

    const auto fit = solve_penalized(train, Loss::exponential, opts.lambdas[l], opts.cfg);
    SweepCell& c = cells[idx];
    c.lambda_index = l;
    c.rep = r;
    c.v_training = risk_or_inf(train, fit.beta, Loss::exponential);
    c.v_real = risk_or_inf(test, fit.beta, Loss::exponential);
    c.b1_norm = group_l1(fit.beta, *train.meta().relevant);
    c.b2_norm = group_l1(fit.beta, *train.meta().proxy);
    c.beta_l1 = fit.beta.l1_norm();
    c.converged = fit.report.converged;
    c.iterations = fit.report.iterations;
    c.kkt_residual = fit.report.kkt_residual;
    progress.tick();
  });

  SweepResult result;
  result.cells = std::move(cells);
  for (std::size_t l = 0; l < opts.lambdas.size(); ++l) {
    SweepRow row;
    row.lambda = opts.lambdas[l];
    row.reps = opts.reps;
    row.seed = opts.seed;
    for (std::size_t r = 0; r < opts.reps; ++r) {
      const SweepCell& c = result.cells[l * opts.reps + r];
      row.v_training += c.v_training;
      row.v_real += c.v_real;
      row.b1_norm += c.b1_norm;
      row.b2_norm += c.b2_norm;
      row.beta_l1 += c.beta_l1;
      row.converged += c.converged;
    }
    const double k = static_cast<double>(opts.reps);
    row.v_training /= k;
    row.v_real /= k;
    row.b1_norm /= k;
    row.b2_norm /= k;
    row.beta_l1 /= k;
    result.rows.push_back(row);
  }
  return result;
}

double KRule::operator()(std::size_t n) const {
  return scale * std::pow(static_cast<double>(n), exponent);
}

std::size_t dimension_for(std::size_t n, double alpha) {
  // Guard against n^alpha landing a hair above an integer.
  const double raw = std::pow(static_cast<double>(n), alpha);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
}

double excess_risk(const Coefficients& beta, const Coefficients& beta_star, double sigma) {
  return true_risk_gaussian(beta, beta_star, sigma) - sigma * sigma;
}

std::vector<PersistencePoint> persistence_curve(const PersistenceOptions& opts) {
  if (opts.reps == 0) throw std::invalid_argument("persistence: reps must be >= 1");
  if (!(opts.alpha > 0.0)) throw std::invalid_argument("persistence: alpha must be > 0");
  for (auto n : opts.ns) {
    if (n < 10) throw std::invalid_argument("persistence: every n must be >= 10");
  }
  opts.cfg.validate();

  struct Setup {
    std::size_t m;
    double k_n;
    double budget;
    Coefficients beta_star;
  };
  std::vector<Setup> setups;
  for (auto n : opts.ns) {
    const std::size_t m = dimension_for(n, opts.alpha);
    const double k_n = opts.k_rule(n);
    if (!(k_n >= 0.0)) throw std::invalid_argument("persistence: k_n must be >= 0");
    setups.push_back({m, k_n, std::sqrt(k_n), unit_sparse_beta(m, opts.sparsity)});
  }

  const std::size_t total = opts.ns.size() * opts.reps;
  std::vector<double> excess(total);
  std::vector<char> converged(total);
  Progress progress(opts.progress, total);
  parallel_for(total, opts.threads, [&](std::size_t idx) {
    const std::size_t i = idx / opts.reps;
    const std::size_t r = idx % opts.reps;
    const Setup& s = setups[i];
    const Dataset d = gen_sparse_linear(opts.ns[i], s.beta_star, opts.sigma, derive_seed(opts.seed, {i, r}));
    const auto fit = solve_constrained(d, Loss::squared, s.budget, opts.cfg);
    excess[idx] = excess_risk(fit.beta, s.beta_star, opts.sigma);
    converged[idx] = fit.report.converged;
    progress.tick();
  });

  std::vector<PersistencePoint> out;
  for (std::size_t i = 0; i < opts.ns.size(); ++i) {
    std::vector<double> e(excess.begin() + static_cast<std::ptrdiff_t>(i * opts.reps),
                          excess.begin() + static_cast<std::ptrdiff_t>((i + 1) * opts.reps));
    PersistencePoint p;
    p.n = opts.ns[i];
    p.m = setups[i].m;
    p.k_n = setups[i].k_n;
    p.budget = setups[i].budget;
    p.reps = opts.reps;
    p.mean_excess_risk = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    p.excess_risk = median(std::move(e));
    for (std::size_t r = 0; r < opts.reps; ++r) p.converged += converged[i * opts.reps + r];
    out.push_back(p);
  }
  return out;
}

RidgeDemoResult ridge_vs_l1_demo(const RidgeDemoOptions& opts) {
  if (opts.reps == 0) throw std::invalid_argument("ridge demo: reps must be >= 1");
  if (!(opts.delta >= 0.0)) throw std::invalid_argument("ridge demo: delta must be >= 0");
  if (opts.l1_budgets.empty()) throw std::invalid_argument("ridge demo: no l1 budgets");
  opts.cfg.validate();
  const std::size_t holdout_n = opts.holdout_n == 0 ? opts.n : opts.holdout_n;
  const std::size_t B = opts.l1_budgets.size();
  const Coefficients zero(opts.m);

  RidgeDemoResult result;
  result.reps.resize(opts.reps);
  Progress progress(opts.progress, opts.reps);
  parallel_for(opts.reps, opts.threads, [&](std::size_t r) {
    const Dataset train = gen_null(opts.n, opts.m, opts.sigma, derive_seed(opts.seed, {r, 0}));
    const Dataset holdout = gen_null(holdout_n, opts.m, opts.sigma, derive_seed(opts.seed, {r, 1}));
    RidgeDemoRep& rep = result.reps[r];

    const auto ridge = solve_ridge_constrained(train, Loss::squared, opts.delta, opts.cfg);
    rep.ridge_risk = true_risk_gaussian(ridge.beta, zero, opts.sigma);
    rep.ridge_norm_ratio = opts.delta > 0.0 ? ridge.beta.l2_norm() / opts.delta : 0.0;
    rep.ridge_converged = ridge.report.converged;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < B; ++b) {
      const double budget = opts.l1_budgets[b];
      const auto fit = solve_constrained(train, Loss::squared, budget, opts.cfg);
      rep.l1_risk.push_back(true_risk_gaussian(fit.beta, zero, opts.sigma));
      rep.l1_l2_norm.push_back(fit.beta.l2_norm());
      rep.l1_budget_used.push_back(budget > 0.0 ? fit.beta.l1_norm() / budget : 0.0);
      const double h = risk_or_inf(holdout, fit.beta, Loss::squared);
      rep.l1_holdout_risk.push_back(h);
      if (h < best) {
        best = h;
        rep.selected = b;
      }
    }
    progress.tick();
  });

  const double k = static_cast<double>(opts.reps);
  result.mean_l1_risk.assign(B, 0.0);
  result.times_selected.assign(B, 0);
  for (const auto& rep : result.reps) {
    result.mean_ridge_risk += rep.ridge_risk / k;
    result.mean_ridge_norm_ratio += rep.ridge_norm_ratio / k;
    result.mean_selected_risk += rep.l1_risk[rep.selected] / k;
    ++result.times_selected[rep.selected];
    for (std::size_t b = 0; b < B; ++b) result.mean_l1_risk[b] += rep.l1_risk[b] / k;
  }
  return result;
}

double sup_deviation(const Dataset& train, std::size_t probe_count, std::size_t k, double radius,
                     Loss loss, const RiskReference& reference, std::uint64_t seed) {
  if (probe_count == 0) throw std::invalid_argument("sup_deviation: probe_count must be >= 1");
  if (k > train.m()) throw std::invalid_argument("sup_deviation: k exceeds m");
  if (!(radius >= 0.0)) throw std::invalid_argument("sup_deviation: radius must be >= 0");

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> coef(-radius, radius);
  std::vector<std::size_t> idx(train.m());
  double worst = 0.0;
  for (std::size_t p = 0; p < probe_count; ++p) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Vector v = Vector::Zero(static_cast<Eigen::Index>(train.m()));
    for (std::size_t a = 0; a < k; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, idx.size() - 1);
      std::swap(idx[a], idx[pick(rng)]);
      v[static_cast<Eigen::Index>(idx[a])] = coef(rng);
    }
    const Coefficients beta(std::move(v));
    worst = std::max(worst, std::abs(empirical_risk(train, beta, loss) - reference(beta)));
  }
  return worst;
}

double sup_deviation(const Dataset& train, std::size_t probe_count, std::size_t k, double radius,
                     Loss loss, const Dataset& oracle, std::uint64_t seed) {
  if (oracle.m() != train.m()) throw std::invalid_argument("sup_deviation: dimension mismatch");
  return sup_deviation(train, probe_count, k, radius, loss,
                       [&](const Coefficients& b) { return empirical_risk(oracle, b, loss); }, seed);
}

double self_consistency_gap(const Dataset& train, const Dataset& test, const Coefficients& beta,
                            Loss loss) {
  if (train.m() != test.m()) throw std::invalid_argument("self_consistency_gap: dimension mismatch");
  return std::abs(empirical_risk(train, beta, loss) - empirical_risk(test, beta, loss));
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "lambda,v_training,v_real,b1_norm,b2_norm,beta_l1,reps,seed\n";
  for (const auto& r : rows) {
    out += format_double(r.lambda) + ',' + format_double(r.v_training) + ',' +
           format_double(r.v_real) + ',' + format_double(r.b1_norm) + ',' +
           format_double(r.b2_norm) + ',' + format_double(r.beta_l1) + ',' +
           std::to_string(r.reps) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

nlohmann::json solve_config_to_json(const SolveConfig& cfg) {
  return {{"max_iter", cfg.max_iter},   {"tol", cfg.tol},
          {"step_init", cfg.step_init}, {"backtrack", cfg.backtrack},
          {"armijo", cfg.armijo},       {"certificate_tol", cfg.certificate_tol},
          {"accelerate", cfg.accelerate}};
}

nlohmann::json sweep_sidecar(const SweepOptions& opts, const SweepResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"lambda", opts.lambdas[c.lambda_index]},
                     {"rep", c.rep},
                     {"converged", c.converged},
                     {"iterations", c.iterations},
                     {"kkt_residual", c.kkt_residual}});
  }
  return {{"seed", opts.seed},
          {"scenario",
           {{"kind", "section4"},
            {"n", opts.scenario.n},
            {"big_m", opts.scenario.big_m},
            {"variance_convention", to_string(opts.scenario.convention)}}},
          {"reps", opts.reps},
          {"test_n", opts.test_n},
          {"test_mode", opts.test_mode == TestSetMode::fresh ? "fresh" : "shared"},
          {"solver", solve_config_to_json(opts.cfg)},
          {"cells", cells}};
}

std::string persistence_to_csv(const std::vector<PersistencePoint>& points) {
  std::string out = "n,m,k_n,budget,median_excess_risk,mean_excess_risk,reps,converged\n";
  for (const auto& p : points) {
    out += std::to_string(p.n) + ',' + std::to_string(p.m) + ',' + format_double(p.k_n) + ',' +
           format_double(p.budget) + ',' + format_double(p.excess_risk) + ',' +
           format_double(p.mean_excess_risk) + ',' + std::to_string(p.reps) + ',' +
           std::to_string(p.converged) + '\n';
  }
  return out;
}

std::string ridge_demo_to_csv(const RidgeDemoOptions& opts, const RidgeDemoResult& result) {
  std::string out = "method,radius,mean_population_risk,mean_l2_norm,mean_norm_ratio,times_selected\n";
  const double k = static_cast<double>(result.reps.size());
  double ridge_l2 = result.mean_ridge_norm_ratio * opts.delta;
  out += "ridge," + format_double(opts.delta) + ',' + format_double(result.mean_ridge_risk) + ',' +
         format_double(ridge_l2) + ',' + format_double(result.mean_ridge_norm_ratio) + ",0\n";
  for (std::size_t b = 0; b < opts.l1_budgets.size(); ++b) {
    double l2 = 0.0;
    double used = 0.0;
    for (const auto& rep : result.reps) {
      l2 += rep.l1_l2_norm[b] / k;
      used += rep.l1_budget_used[b] / k;
    }
    out += "l1," + format_double(opts.l1_budgets[b]) + ',' + format_double(result.mean_l1_risk[b]) +
           ',' + format_double(l2) + ',' + format_double(used) + ',' +
           std::to_string(result.times_selected[b]) + '\n';
  }
  return out;
}

}  // namespace l1persist
