#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "l1persist/experiments.hpp"
#include "l1persist/io.hpp"
#include "l1persist/maurey.hpp"
#include "l1persist/oracle.hpp"
#include "l1persist/simgen.hpp"
#include "l1persist/solvers.hpp"

namespace py = pybind11;
using namespace l1persist;
using namespace pybind11::literals;

namespace {

// Coefficients cross the boundary as 1-D float arrays.
Coefficients coef(const Vector& v) { return Coefficients(v); }

py::dict subset_dict(const SubsetSolution& s) {
  return py::dict("subset"_a = s.subset, "beta"_a = s.beta.values(), "risk"_a = s.risk,
                  "unbounded"_a = s.unbounded);
}

py::tuple solve_tuple(const SolveResult& r) { return py::make_tuple(r.beta.values(), r.report); }

std::optional<py::tuple> range_tuple(const std::optional<ColumnRange>& r) {
  if (!r) return std::nullopt;
  return py::make_tuple(r->begin, r->end);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "l1-constrained empirical risk minimization";

  py::enum_<Loss>(m, "Loss")
      .value("squared", Loss::squared)
      .value("exponential", Loss::exponential)
      .value("absolute", Loss::absolute);

  py::enum_<NoiseConvention>(m, "NoiseConvention")
      .value("variance", NoiseConvention::variance)
      .value("std_dev", NoiseConvention::std_dev);

  py::register_exception<NonfiniteLossError>(m, "NonfiniteLossError", PyExc_ArithmeticError);
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const Matrix& x, const Vector& y) { return Dataset(x, y); }), "x"_a, "y"_a)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("m", &Dataset::m)
      .def_property_readonly("x", &Dataset::x)
      .def_property_readonly("y", &Dataset::y)
      .def_property_readonly("scenario", [](const Dataset& d) { return d.meta().scenario; })
      .def_property_readonly("seed", [](const Dataset& d) { return d.meta().seed; })
      .def_property_readonly("relevant", [](const Dataset& d) { return range_tuple(d.meta().relevant); })
      .def_property_readonly("proxy", [](const Dataset& d) { return range_tuple(d.meta().proxy); })
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset n=" + std::to_string(d.n()) + " m=" + std::to_string(d.m()) + ">";
      });

  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("max_iter", &SolveConfig::max_iter)
      .def_readwrite("tol", &SolveConfig::tol)
      .def_readwrite("step_init", &SolveConfig::step_init)
      .def_readwrite("backtrack", &SolveConfig::backtrack)
      .def_readwrite("armijo", &SolveConfig::armijo)
      .def_readwrite("certificate_tol", &SolveConfig::certificate_tol)
      .def_readwrite("accelerate", &SolveConfig::accelerate)
      .def_readwrite("divergence_norm", &SolveConfig::divergence_norm)
      .def_readwrite("record_trace", &SolveConfig::record_trace);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("objective", &SolveReport::objective)
      .def_readonly("kkt_residual", &SolveReport::kkt_residual)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("diverged", &SolveReport::diverged)
      .def_readonly("step_rejections", &SolveReport::step_rejections)
      .def_readonly("final_step", &SolveReport::final_step)
      .def_readonly("objective_trace", &SolveReport::objective_trace);

  m.def("empirical_risk", [](const Dataset& d, const Vector& b, Loss loss) {
    return empirical_risk(d, coef(b), loss);
  }, "d"_a, "beta"_a, "loss"_a);
  m.def("risk_gradient", [](const Dataset& d, const Vector& b, Loss loss) {
    return risk_gradient(d, coef(b), loss);
  }, "d"_a, "beta"_a, "loss"_a);

  m.def("soft_threshold", &soft_threshold, "x"_a, "t"_a);
  m.def("project_l1", &project_l1, "v"_a, "radius"_a);
  m.def("project_l2", &project_l2, "v"_a, "radius"_a);

  m.def("solve_penalized", [](const Dataset& d, Loss loss, double lambda, const SolveConfig& cfg) {
    return solve_tuple(solve_penalized(d, loss, lambda, cfg));
  }, "d"_a, "loss"_a, "lam"_a, "cfg"_a = SolveConfig{},
        "Returns (beta, report) for min L_n(beta) + lam ||beta||_1.");
  m.def("solve_constrained", [](const Dataset& d, Loss loss, double budget, const SolveConfig& cfg) {
    return solve_tuple(solve_constrained(d, loss, budget, cfg));
  }, "d"_a, "loss"_a, "budget"_a, "cfg"_a = SolveConfig{});
  m.def("solve_ridge_constrained", [](const Dataset& d, Loss loss, double delta, const SolveConfig& cfg) {
    return solve_tuple(solve_ridge_constrained(d, loss, delta, cfg));
  }, "d"_a, "loss"_a, "delta"_a, "cfg"_a = SolveConfig{});
  m.def("kkt_residual", [](const Dataset& d, Loss loss, double lambda, const Vector& b) {
    return kkt_residual(d, loss, lambda, coef(b));
  }, "d"_a, "loss"_a, "lam"_a, "beta"_a);

  m.def("gen_section4", &gen_section4, "n"_a, "big_m"_a, "seed"_a,
        "convention"_a = NoiseConvention::variance);
  m.def("gen_sparse_linear", [](std::size_t n, const Vector& star, double sigma, std::uint64_t seed) {
    return gen_sparse_linear(n, coef(star), sigma, seed);
  }, "n"_a, "beta_star"_a, "sigma"_a, "seed"_a);
  m.def("gen_null", &gen_null, "n"_a, "m"_a, "sigma"_a, "seed"_a);
  m.def("true_risk_gaussian", [](const Vector& b, const Vector& star, double sigma) {
    return true_risk_gaussian(coef(b), coef(star), sigma);
  }, "beta"_a, "beta_star"_a, "sigma"_a);
  m.def("unit_sparse_beta", [](std::size_t m_, std::size_t s) { return unit_sparse_beta(m_, s).values(); },
        "m"_a, "s"_a);

  m.def("sparsify", [](const Vector& b, std::size_t kappa, std::uint64_t seed) {
    const auto out = sparsify(coef(b), kappa, seed);
    return py::dict("beta_prime"_a = out.beta_prime.values(), "kappa"_a = out.kappa,
                    "draws"_a = out.draws, "source_l1"_a = out.source_l1);
  }, "beta"_a, "kappa"_a, "seed"_a);
  m.def("deviation_bound", &deviation_bound, "big_m"_a, "b"_a, "delta"_a, "kappa"_a);
  m.def("empirical_deviation_rate",
        [](const Dataset& d, const Vector& b, std::size_t kappa, double delta, std::size_t trials,
           std::uint64_t seed, unsigned threads) {
          py::gil_scoped_release release;
          return empirical_deviation_rate(d, coef(b), kappa, delta, trials, seed, threads);
        },
        "d"_a, "beta"_a, "kappa"_a, "delta"_a, "trials"_a, "seed"_a, "threads"_a = 1);

  m.def("best_subset", [](const Dataset& d, std::size_t k, Loss loss, std::uint64_t budget) {
    OracleConfig cfg;
    cfg.budget = budget;
    return subset_dict(best_subset(d, k, loss, cfg));
  }, "d"_a, "k"_a, "loss"_a = Loss::squared, "budget"_a = OracleConfig{}.budget);
  m.def("grid_best", [](const Dataset& d, std::size_t k, double radius, double step, Loss loss,
                        std::uint64_t budget) {
    return subset_dict(grid_best(d, k, radius, step, loss, budget));
  }, "d"_a, "k"_a, "cube_radius"_a, "step"_a, "loss"_a = Loss::squared, "budget"_a = 1'000'000);

  m.def("lambda_sweep",
        [](std::size_t n, std::size_t big_m, std::vector<double> lambdas, std::size_t reps,
           std::size_t test_n, std::uint64_t seed, bool shared_test, NoiseConvention conv,
           const SolveConfig& cfg, unsigned threads) {
          SweepOptions o;
          o.scenario = Section4Spec{n, big_m, conv};
          o.lambdas = std::move(lambdas);
          o.reps = reps;
          o.test_n = test_n;
          o.seed = seed;
          o.test_mode = shared_test ? TestSetMode::shared : TestSetMode::fresh;
          o.cfg = cfg;
          o.threads = threads;
          SweepResult res;
          {
            py::gil_scoped_release release;
            res = lambda_sweep(o);
          }
          py::list rows;
          for (const auto& r : res.rows) {
            rows.append(py::dict("lambda"_a = r.lambda, "v_training"_a = r.v_training,
                                 "v_real"_a = r.v_real, "b1_norm"_a = r.b1_norm,
                                 "b2_norm"_a = r.b2_norm, "beta_l1"_a = r.beta_l1,
                                 "reps"_a = r.reps, "converged"_a = r.converged));
          }
          return rows;
        },
        "n"_a, "big_m"_a, "lambdas"_a, "reps"_a = 20, "test_n"_a = 1000, "seed"_a = 0,
        "shared_test"_a = false, "convention"_a = NoiseConvention::variance,
        "cfg"_a = SolveConfig{}, "threads"_a = 1);

  m.def("persistence_curve",
        [](std::vector<std::size_t> ns, double alpha, double k_scale, double k_exponent,
           std::size_t sparsity, double sigma, std::size_t reps, std::uint64_t seed, unsigned threads) {
          PersistenceOptions o;
          o.ns = std::move(ns);
          o.alpha = alpha;
          o.k_rule = KRule{k_scale, k_exponent};
          o.sparsity = sparsity;
          o.sigma = sigma;
          o.reps = reps;
          o.seed = seed;
          o.threads = threads;
          std::vector<PersistencePoint> pts;
          {
            py::gil_scoped_release release;
            pts = persistence_curve(o);
          }
          py::list out;
          for (const auto& p : pts) {
            out.append(py::dict("n"_a = p.n, "m"_a = p.m, "k_n"_a = p.k_n, "budget"_a = p.budget,
                                "excess_risk"_a = p.excess_risk,
                                "mean_excess_risk"_a = p.mean_excess_risk, "reps"_a = p.reps,
                                "converged"_a = p.converged));
          }
          return out;
        },
        "ns"_a, "alpha"_a = 1.2, "k_scale"_a = 5.0, "k_exponent"_a = 0.0, "sparsity"_a = 5,
        "sigma"_a = 1.0, "reps"_a = 20, "seed"_a = 0, "threads"_a = 1);

  m.def("ridge_vs_l1_demo",
        [](std::size_t n, std::size_t m_, double sigma, double delta, std::vector<double> budgets,
           std::size_t reps, std::uint64_t seed, unsigned threads) {
          RidgeDemoOptions o;
          o.n = n;
          o.m = m_;
          o.sigma = sigma;
          o.delta = delta;
          o.l1_budgets = std::move(budgets);
          o.reps = reps;
          o.seed = seed;
          o.threads = threads;
          RidgeDemoResult r;
          {
            py::gil_scoped_release release;
            r = ridge_vs_l1_demo(o);
          }
          return py::dict("mean_ridge_risk"_a = r.mean_ridge_risk,
                          "mean_ridge_norm_ratio"_a = r.mean_ridge_norm_ratio,
                          "mean_l1_risk"_a = r.mean_l1_risk, "times_selected"_a = r.times_selected,
                          "mean_selected_risk"_a = r.mean_selected_risk);
        },
        "n"_a, "m"_a, "sigma"_a, "delta"_a, "budgets"_a, "reps"_a = 20, "seed"_a = 0,
        "threads"_a = 1);

  m.def("read_dataset", &read_dataset, "path"_a);
  m.def("write_dataset", &write_dataset, "path"_a, "d"_a);
}
