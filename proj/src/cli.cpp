#include "l1persist/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "l1persist/experiments.hpp"
#include "l1persist/io.hpp"
#include "l1persist/maurey.hpp"
#include "l1persist/oracle.hpp"
#include "l1persist/parallel.hpp"
#include "l1persist/simgen.hpp"
#include "l1persist/solvers.hpp"

namespace l1persist {

namespace fs = std::filesystem;

namespace {

/// Raised for argument combinations CLI11 cannot validate on its own.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolverFlags {
  std::size_t max_iter = SolveConfig{}.max_iter;
  double tol = SolveConfig{}.tol;
  bool plain = false;

  void add_to(CLI::App* app) {
    app->add_option("--max-iter", max_iter, "Iteration cap per solve")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Relative objective-change stopping threshold")
        ->check(CLI::PositiveNumber);
    app->add_flag("--plain", plain, "Plain proximal gradient (no momentum)");
  }
  SolveConfig config() const {
    SolveConfig cfg;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.accelerate = !plain;
    return cfg;
  }
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = default_threads();
  bool progress = false;
};

void add_common(CLI::App* app, Common& c, bool seed_required, bool out_required = true) {
  auto* seed = app->add_option("--seed", c.seed, "Master seed (u64); all randomness derives from it");
  if (seed_required) seed->required();
  auto* out = app->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
  app->add_option("--threads", c.threads, "Worker threads (does not change results)")
      ->check(CLI::PositiveNumber);
}

ProgressFn progress_to(std::ostream& err, bool enabled) {
  if (!enabled) return {};
  return [&err](std::size_t done, std::size_t total) {
    err << "\r" << done << "/" << total << (done == total ? "\n" : "") << std::flush;
  };
}

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad count '" + item + "'");
    }
    if (pos != item.size()) throw UsageError("bad count '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

double parse_real(const std::string& item) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(item, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad number '" + item + "'");
  }
  if (pos != item.size() || !std::isfinite(v)) throw UsageError("bad number '" + item + "'");
  return v;
}

// Each subcommand registers its flags on `app` and returns the action to run
// once parsing succeeded.
using Action = std::function<void(std::ostream&, std::ostream&)>;

struct Registry {
  std::vector<std::pair<CLI::App*, Action>> commands;
};

void register_simgen(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string scenario = "section4";
    std::size_t n = 500;
    std::size_t big_m = 1000;
    std::size_t m = 1000;
    std::size_t sparsity = 5;
    double sigma = 1.0;
    std::string convention = "var";
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("simgen", "Generate a seeded dataset (CSV + meta sidecar)");
  add_common(app, f->common, true);
  app->add_option("--scenario", f->scenario, "Scenario")
      ->check(CLI::IsMember({"section4", "sparse-linear", "null"}));
  app->add_option("--n", f->n, "Observations")->check(CLI::PositiveNumber);
  app->add_option("--big-m", f->big_m, "section4: number of iid columns M (m = M + 5)");
  app->add_option("--m", f->m, "sparse-linear/null: number of columns");
  app->add_option("--sparsity", f->sparsity, "sparse-linear: nonzeros of the unit-norm beta*");
  app->add_option("--sigma", f->sigma, "sparse-linear/null: noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--variance-convention", f->convention,
                  "section4: read N(0,s) as variance (var) or standard deviation (std)")
      ->check(CLI::IsMember({"var", "std"}));
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream&) {
    const std::uint64_t seed = f->common.seed;
    std::optional<Dataset> d;
    if (f->scenario == "section4") {
      d = gen_section4(f->n, f->big_m, seed, parse_noise_convention(f->convention));
    } else if (f->scenario == "sparse-linear") {
      d = gen_sparse_linear(f->n, unit_sparse_beta(f->m, f->sparsity), f->sigma, seed);
    } else {
      d = gen_null(f->n, f->m, f->sigma, seed);
    }
    write_dataset(f->common.out, *d);
    out << "simgen: scenario=" << f->scenario << " n=" << d->n() << " m=" << d->m()
        << " seed=" << seed << " -> " << f->common.out << "\n";
  });
}

void register_solve(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string data;
    std::string loss = "squared";
    std::string penalty = "l1";
    std::optional<double> lambda;
    std::optional<double> budget;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("solve", "Fit l1-penalized, l1-ball or l2-ball constrained risk minimizer");
  add_common(app, f->common, false);
  app->add_option("--data", f->data, "Dataset CSV")->required();
  app->add_option("--loss", f->loss, "Loss")->check(CLI::IsMember({"squared", "exp", "abs"}));
  app->add_option("--penalty", f->penalty, "l1 penalty, l1 ball or l2 ball")
      ->check(CLI::IsMember({"l1", "l1ball", "l2ball"}));
  app->add_option("--lambda", f->lambda, "Penalty weight (l1)")->check(CLI::NonNegativeNumber);
  app->add_option("--budget", f->budget, "Ball radius (l1ball, l2ball)")->check(CLI::NonNegativeNumber);
  f->solver.add_to(app);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream&) {
    const Loss loss = parse_loss(f->loss);
    const bool penalized = f->penalty == "l1";
    if (penalized && !f->lambda) throw UsageError("--penalty l1 requires --lambda");
    if (!penalized && !f->budget) throw UsageError("--penalty " + f->penalty + " requires --budget");
    const Dataset d = read_dataset(f->data);
    const SolveConfig cfg = f->solver.config();
    SolveResult fit = penalized ? solve_penalized(d, loss, *f->lambda, cfg)
                      : f->penalty == "l1ball" ? solve_constrained(d, loss, *f->budget, cfg)
                                               : solve_ridge_constrained(d, loss, *f->budget, cfg);
    nlohmann::json j = {{"loss", to_string(loss)},
                        {"penalty", f->penalty},
                        {"coefficients", coefficients_to_json(fit.beta)},
                        {"report", report_to_json(fit.report)},
                        {"empirical_risk", empirical_risk(d, fit.beta, loss)},
                        {"solver", solve_config_to_json(cfg)}};
    if (penalized) j["lambda"] = *f->lambda;
    else j["budget"] = *f->budget;
    write_file_atomic(f->common.out, j.dump(2) + "\n");
    out << "solve: loss=" << to_string(loss) << " penalty=" << f->penalty
        << " support=" << fit.beta.support() << " l1=" << format_double(fit.beta.l1_norm())
        << " objective=" << format_double(fit.report.objective)
        << " kkt=" << format_double(fit.report.kkt_residual)
        << " converged=" << (fit.report.converged ? "yes" : "no") << "\n";
  });
}

void register_sweep(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string scenario = "section4";
    std::size_t n = 500;
    std::size_t big_m = 1000;
    std::string lambdas = "0.01:0.02:0.17";
    std::size_t reps = 20;
    std::size_t test_n = 1000;
    std::string test_mode = "fresh";
    std::string convention = "var";
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("sweep", "Lambda sweep on the classification scenario (exponential loss)");
  add_common(app, f->common, true);
  app->add_option("--scenario", f->scenario, "Scenario")->check(CLI::IsMember({"section4"}));
  app->add_option("--n", f->n, "Training observations")->check(CLI::PositiveNumber);
  app->add_option("--big-m", f->big_m, "Number of iid columns M (m = M + 5)");
  app->add_option("--lambdas", f->lambdas, "Grid a:step:b (inclusive) or comma list");
  app->add_option("--reps", f->reps, "Repetitions per lambda")->check(CLI::PositiveNumber);
  app->add_option("--test-n", f->test_n, "Test sample size")->check(CLI::PositiveNumber);
  app->add_option("--test-mode", f->test_mode, "Fresh test sample per cell or one shared sample")
      ->check(CLI::IsMember({"fresh", "shared"}));
  app->add_option("--variance-convention", f->convention, "Noise parameter reading")
      ->check(CLI::IsMember({"var", "std"}));
  app->add_flag("--progress", f->common.progress, "Print a counter on stderr");
  f->solver.add_to(app);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream& err) {
    SweepOptions opts;
    opts.scenario = {f->n, f->big_m, parse_noise_convention(f->convention)};
    opts.lambdas = parse_real_list(f->lambdas);
    opts.reps = f->reps;
    opts.test_n = f->test_n;
    opts.cfg = f->solver.config();
    opts.seed = f->common.seed;
    opts.test_mode = f->test_mode == "fresh" ? TestSetMode::fresh : TestSetMode::shared;
    opts.threads = f->common.threads;
    opts.progress = progress_to(err, f->common.progress);
    const auto result = lambda_sweep(opts);
    write_file_atomic(meta_path_for(f->common.out), sweep_sidecar(opts, result).dump(2) + "\n");
    write_file_atomic(f->common.out, sweep_to_csv(result.rows));
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
      if (result.rows[i].v_real < result.rows[best].v_real) best = i;
    }
    out << "sweep: " << result.rows.size() << " lambdas x " << opts.reps
        << " reps; best v_real=" << format_double(result.rows[best].v_real)
        << " at lambda=" << format_double(result.rows[best].lambda) << " -> " << f->common.out << "\n";
  });
}

void register_sparsify(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string coef;
    std::size_t kappa = 10;
    std::string data;
    double delta = 0.5;
    std::size_t trials = 0;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("sparsify", "Maurey sparsification of a coefficient vector");
  add_common(app, f->common, true);
  app->add_option("--coef", f->coef, "Coefficients JSON (a solve output or a bare coefficients record)")
      ->required();
  app->add_option("--kappa", f->kappa, "Number of draws (support cap)")->check(CLI::PositiveNumber);
  app->add_option("--data", f->data, "Dataset CSV for the deviation-rate check");
  app->add_option("--delta", f->delta, "Margin deviation threshold")->check(CLI::PositiveNumber);
  app->add_option("--trials", f->trials, "Sparsifications for the deviation rate (needs --data)");
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream&) {
    auto j = nlohmann::json::parse(read_text_file(f->coef));
    const Coefficients beta = coefficients_from_json(j.contains("coefficients") ? j["coefficients"] : j);
    const auto outcome = sparsify(beta, f->kappa, f->common.seed);
    nlohmann::json draws = nlohmann::json::array();
    for (auto d : outcome.draws) draws.push_back(d + 1);
    nlohmann::json res = {{"seed", f->common.seed},
                          {"kappa", outcome.kappa},
                          {"source_l1", outcome.source_l1},
                          {"draws", draws},
                          {"beta_prime", coefficients_to_json(outcome.beta_prime)}};
    std::string extra;
    if (f->trials > 0) {
      if (f->data.empty()) throw UsageError("--trials requires --data");
      const Dataset d = read_dataset(f->data);
      const double big_m = d.x().size() ? d.x().cwiseAbs().maxCoeff() : 0.0;
      const double rate = empirical_deviation_rate(d, beta, f->kappa, f->delta, f->trials,
                                                   f->common.seed, f->common.threads);
      const double bound = deviation_bound(big_m, outcome.source_l1, f->delta, f->kappa);
      res["deviation"] = {{"delta", f->delta}, {"trials", f->trials}, {"rate", rate},
                          {"bound", bound},    {"max_abs_x", big_m}};
      extra = " rate=" + format_double(rate) + " bound=" + format_double(bound);
    }
    write_file_atomic(f->common.out, res.dump(2) + "\n");
    out << "sparsify: kappa=" << outcome.kappa << " support=" << outcome.beta_prime.support()
        << " l1=" << format_double(outcome.beta_prime.l1_norm()) << extra << "\n";
  });
}

void register_oracle(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string data;
    std::size_t k = 1;
    std::string loss = "squared";
    std::uint64_t budget = OracleConfig{}.budget;
    std::optional<double> grid_radius;
    std::optional<double> grid_step;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("oracle", "Exhaustive best-subset search (desk scale)");
  add_common(app, f->common, false);
  app->add_option("--data", f->data, "Dataset CSV")->required();
  app->add_option("--k", f->k, "Subset size");
  app->add_option("--loss", f->loss, "Loss")->check(CLI::IsMember({"squared", "exp"}));
  app->add_option("--budget", f->budget, "Maximum number of evaluations");
  app->add_option("--grid-radius", f->grid_radius, "Also run the grid search on [-r, r]^k")
      ->check(CLI::PositiveNumber);
  app->add_option("--grid-step", f->grid_step, "Grid cell width")->check(CLI::PositiveNumber);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream&) {
    if (f->grid_radius.has_value() != f->grid_step.has_value()) {
      throw UsageError("--grid-radius and --grid-step go together");
    }
    const Dataset d = read_dataset(f->data);
    const Loss loss = parse_loss(f->loss);
    OracleConfig cfg;
    cfg.budget = f->budget;
    const auto best = best_subset(d, f->k, loss, cfg);
    nlohmann::json j = {{"loss", to_string(loss)}, {"k", f->k}, {"best_subset", subset_solution_to_json(best)}};
    std::string extra;
    if (f->grid_radius) {
      const auto grid = grid_best(d, f->k, *f->grid_radius, *f->grid_step, loss, f->budget);
      j["grid_best"] = subset_solution_to_json(grid);
      j["grid_best"]["cube_radius"] = *f->grid_radius;
      j["grid_best"]["step"] = *f->grid_step;
      extra = " grid_risk=" + format_double(grid.risk);
    }
    write_file_atomic(f->common.out, j.dump(2) + "\n");
    out << "oracle: k=" << f->k << " risk=" << format_double(best.risk) << extra << "\n";
  });
}

void register_persist(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::string ns = "100,400,1600";
    double alpha = 1.2;
    double k_scale = 5.0;
    double k_exponent = 0.0;
    std::size_t sparsity = 5;
    double sigma = 1.0;
    std::size_t reps = 20;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("persist", "Persistence curve of l1-constrained least squares");
  add_common(app, f->common, true);
  app->add_option("--ns", f->ns, "Comma-separated sample sizes");
  app->add_option("--alpha", f->alpha, "m = ceil(n^alpha)")->check(CLI::PositiveNumber);
  app->add_option("--k-scale", f->k_scale, "k_n = scale * n^exponent")->check(CLI::NonNegativeNumber);
  app->add_option("--k-exponent", f->k_exponent, "k_n = scale * n^exponent");
  app->add_option("--sparsity", f->sparsity, "Nonzeros of the unit-norm beta*")->check(CLI::PositiveNumber);
  app->add_option("--sigma", f->sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  app->add_option("--reps", f->reps, "Repetitions per n")->check(CLI::PositiveNumber);
  app->add_flag("--progress", f->common.progress, "Print a counter on stderr");
  f->solver.add_to(app);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream& err) {
    PersistenceOptions opts;
    opts.ns = parse_count_list(f->ns);
    opts.alpha = f->alpha;
    opts.k_rule = {f->k_scale, f->k_exponent};
    opts.sparsity = f->sparsity;
    opts.sigma = f->sigma;
    opts.reps = f->reps;
    opts.cfg = f->solver.config();
    opts.seed = f->common.seed;
    opts.threads = f->common.threads;
    opts.progress = progress_to(err, f->common.progress);
    const auto points = persistence_curve(opts);
    nlohmann::json side = {{"seed", opts.seed}, {"alpha", opts.alpha},
                           {"k_rule", {{"scale", f->k_scale}, {"exponent", f->k_exponent}}},
                           {"sparsity", opts.sparsity}, {"sigma", opts.sigma},
                           {"reps", opts.reps}, {"solver", solve_config_to_json(opts.cfg)}};
    write_file_atomic(meta_path_for(f->common.out), side.dump(2) + "\n");
    write_file_atomic(f->common.out, persistence_to_csv(points));
    out << "persist:";
    for (const auto& p : points) out << " n=" << p.n << ":" << format_double(p.excess_risk);
    out << " -> " << f->common.out << "\n";
  });
}

void register_ridge_demo(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::size_t n = 200;
    std::size_t m = 2000;
    double sigma = 1.0;
    double delta = 0.7;
    std::string budgets = "0:0.1:1.5";
    std::size_t reps = 20;
    std::size_t holdout_n = 0;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand("ridge-demo", "Ridge versus l1 constraint on null data");
  add_common(app, f->common, true);
  app->add_option("--n", f->n, "Observations")->check(CLI::PositiveNumber);
  app->add_option("--m", f->m, "Columns");
  app->add_option("--sigma", f->sigma, "Response standard deviation")->check(CLI::NonNegativeNumber);
  app->add_option("--delta", f->delta, "Ridge l2 radius")->check(CLI::NonNegativeNumber);
  app->add_option("--budgets", f->budgets, "l1 budgets: a:step:b or comma list");
  app->add_option("--reps", f->reps, "Repetitions")->check(CLI::PositiveNumber);
  app->add_option("--holdout-n", f->holdout_n, "Held-out size for budget selection (0 = n)");
  app->add_flag("--progress", f->common.progress, "Print a counter on stderr");
  f->solver.add_to(app);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream& err) {
    RidgeDemoOptions opts;
    opts.n = f->n;
    opts.m = f->m;
    opts.sigma = f->sigma;
    opts.delta = f->delta;
    opts.l1_budgets = parse_real_list(f->budgets);
    opts.reps = f->reps;
    opts.holdout_n = f->holdout_n;
    opts.cfg = f->solver.config();
    opts.seed = f->common.seed;
    opts.threads = f->common.threads;
    opts.progress = progress_to(err, f->common.progress);
    const auto result = ridge_vs_l1_demo(opts);
    nlohmann::json side = {{"seed", opts.seed}, {"n", opts.n}, {"m", opts.m}, {"sigma", opts.sigma},
                           {"delta", opts.delta}, {"reps", opts.reps},
                           {"holdout_n", opts.holdout_n == 0 ? opts.n : opts.holdout_n},
                           {"mean_selected_risk", result.mean_selected_risk},
                           {"solver", solve_config_to_json(opts.cfg)}};
    write_file_atomic(meta_path_for(f->common.out), side.dump(2) + "\n");
    write_file_atomic(f->common.out, ridge_demo_to_csv(opts, result));
    out << "ridge-demo: ridge risk=" << format_double(result.mean_ridge_risk)
        << " norm/delta=" << format_double(result.mean_ridge_norm_ratio)
        << " selected-l1 risk=" << format_double(result.mean_selected_risk) << " -> "
        << f->common.out << "\n";
  });
}

void register_deviation(CLI::App& root, Registry& reg) {
  struct Flags {
    Common common;
    std::size_t n = 200;
    std::size_t m = 50;
    std::size_t sparsity = 5;
    double sigma = 1.0;
    std::size_t probes = 200;
    std::size_t k = 5;
    double radius = 1.0;
  };
  auto f = std::make_shared<Flags>();
  auto* app = root.add_subcommand(
      "deviation", "Sup over random k-sparse probes of |empirical - population| squared-loss risk");
  add_common(app, f->common, true);
  app->add_option("--n", f->n, "Training observations")->check(CLI::PositiveNumber);
  app->add_option("--m", f->m, "Columns")->check(CLI::PositiveNumber);
  app->add_option("--sparsity", f->sparsity, "Nonzeros of the unit-norm beta*")->check(CLI::PositiveNumber);
  app->add_option("--sigma", f->sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  app->add_option("--probes", f->probes, "Number of probe vectors")->check(CLI::PositiveNumber);
  app->add_option("--k", f->k, "Probe support size");
  app->add_option("--radius", f->radius, "Probe entries uniform in [-radius, radius]")
      ->check(CLI::NonNegativeNumber);
  reg.commands.emplace_back(app, [f](std::ostream& out, std::ostream&) {
    const Coefficients beta_star = unit_sparse_beta(f->m, f->sparsity);
    const Dataset train = gen_sparse_linear(f->n, beta_star, f->sigma, derive_seed(f->common.seed, {0}));
    const double sigma = f->sigma;
    const double dev = sup_deviation(
        train, f->probes, f->k, f->radius, Loss::squared,
        [&](const Coefficients& b) { return true_risk_gaussian(b, beta_star, sigma); },
        derive_seed(f->common.seed, {1}));
    nlohmann::json j = {{"seed", f->common.seed}, {"n", f->n},       {"m", f->m},
                        {"sparsity", f->sparsity}, {"sigma", sigma},  {"probes", f->probes},
                        {"k", f->k},               {"radius", f->radius}, {"sup_deviation", dev}};
    write_file_atomic(f->common.out, j.dump(2) + "\n");
    out << "deviation: n=" << f->n << " sup=" << format_double(dev) << "\n";
  });
}

void build(CLI::App& app, Registry& reg) {
  app.require_subcommand(1);
  register_simgen(app, reg);
  register_solve(app, reg);
  register_sweep(app, reg);
  register_sparsify(app, reg);
  register_oracle(app, reg);
  register_persist(app, reg);
  register_ridge_demo(app, reg);
  register_deviation(app, reg);
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("range must look like a:step:b");
    try {
      return lambda_grid(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::map<std::string, std::vector<std::string>> cli_flags() {
  CLI::App app("l1persist");
  Registry reg;
  build(app, reg);
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [sub, action] : reg.commands) {
    auto& names = out[sub->get_name()];
    for (const CLI::Option* opt : sub->get_options()) {
      for (const auto& lname : opt->get_lnames()) names.push_back("--" + lname);
    }
  }
  return out;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app("l1-constrained empirical risk minimization toolkit", "l1persist");
  Registry reg;
  build(app, reg);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  for (auto& [sub, action] : reg.commands) {
    if (!sub->parsed()) continue;
    try {
      action(out, err);
      return 0;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n\n" << sub->help();
      return 2;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  err << app.help();
  return 2;
}

}  // namespace l1persist
