#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "l1persist/experiments.hpp"
#include "l1persist/rng.hpp"

using namespace l1persist;

namespace {

SweepOptions small_sweep() {
  SweepOptions o;
  o.scenario = Section4Spec{60, 40, NoiseConvention::variance};
  o.lambdas = {0.05, 0.1, 0.2};
  o.reps = 3;
  o.test_n = 200;
  o.seed = 5;
  return o;
}

}  // namespace

TEST_CASE("lambda_grid") {
  const auto g = lambda_grid(0.01, 0.02, 0.17);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 0.01);
  CHECK(g[3] == 0.07);
  CHECK(g.back() == 0.17);
  CHECK(lambda_grid(0.3, 0.1, 0.3) == std::vector<double>{0.3});
  CHECK_THROWS_AS(lambda_grid(0.1, 0.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(lambda_grid(0.3, 0.1, 0.2), std::invalid_argument);
}

TEST_CASE("sweep is reproducible and independent of the thread count") {
  auto o = small_sweep();
  const auto a = lambda_sweep(o);
  o.threads = 3;
  const auto b = lambda_sweep(o);
  CHECK(sweep_to_csv(a.rows) == sweep_to_csv(b.rows));
  REQUIRE(a.cells.size() == 9);
  CHECK(a.cells[4].lambda_index == 1);
  CHECK(a.cells[4].rep == 1);
  o.seed = 6;
  CHECK(sweep_to_csv(lambda_sweep(o).rows) != sweep_to_csv(a.rows));
}

TEST_CASE("property: sweep rows respect group norms and averaging") {
  const auto o = small_sweep();
  const auto res = lambda_sweep(o);
  REQUIRE(res.rows.size() == 3);
  for (std::size_t l = 0; l < res.rows.size(); ++l) {
    const auto& row = res.rows[l];
    CHECK(row.b1_norm + row.b2_norm <= row.beta_l1 + 1e-9);
    CHECK(row.reps == 3);
    CHECK(row.seed == 5);
    double vt = 0;
    for (std::size_t r = 0; r < 3; ++r) vt += res.cells[l * 3 + r].v_training;
    CHECK(row.v_training == doctest::Approx(vt / 3).epsilon(1e-14));
  }
  CHECK(res.rows[0].v_training <= res.rows[1].v_training + 0.01);
  CHECK(res.rows[1].v_training <= res.rows[2].v_training + 0.01);
}

TEST_CASE("shared test set mode") {
  auto o = small_sweep();
  o.test_mode = TestSetMode::shared;
  const auto shared = lambda_sweep(o);
  o.test_mode = TestSetMode::fresh;
  const auto fresh = lambda_sweep(o);
  // Training draws are the same; only the test sample changes.
  CHECK(shared.rows[0].v_training == fresh.rows[0].v_training);
  CHECK(shared.rows[0].v_real != fresh.rows[0].v_real);
  const auto side = sweep_sidecar(o, fresh);
  CHECK(side["seed"] == 5);
  CHECK(side["cells"].size() == 9);
}

TEST_CASE("sweep validation") {
  auto o = small_sweep();
  o.reps = 0;
  CHECK_THROWS_AS(lambda_sweep(o), std::invalid_argument);
  o = small_sweep();
  o.lambdas.clear();
  CHECK_THROWS_AS(lambda_sweep(o), std::invalid_argument);
}

TEST_CASE("excess risk probes") {
  const Coefficients star = unit_sparse_beta(30, 5);
  CHECK(excess_risk(star, star, 1.0) == 0.0);
  CHECK(excess_risk(Coefficients(30), star, 1.0) == doctest::Approx(1.0));
  CHECK(dimension_for(100, 1.2) == 252);
  CHECK(dimension_for(1600, 1.0) == 1600);
  CHECK(KRule{}(400) == 5.0);
}

TEST_CASE("persistence curve bookkeeping") {
  PersistenceOptions o;
  o.ns = {20, 40};
  o.reps = 3;
  o.seed = 1;
  const auto pts = persistence_curve(o);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].m == dimension_for(20, 1.2));
  CHECK(pts[1].budget == doctest::Approx(std::sqrt(5.0)));
  for (const auto& p : pts) {
    CHECK(p.excess_risk >= 0.0);
    CHECK(p.reps == 3);
  }

  o.k_rule = KRule{0.0, 0.0};
  const auto zero = persistence_curve(o);
  CHECK(zero[0].excess_risk == doctest::Approx(1.0));

  o.threads = 2;
  o.k_rule = {};
  CHECK(persistence_to_csv(persistence_curve(o)) == persistence_to_csv(pts));
  o.ns = {5};
  CHECK_THROWS_AS(persistence_curve(o), std::invalid_argument);
}

TEST_CASE("ridge demo: zero l1 budget has population risk sigma squared") {
  RidgeDemoOptions o;
  o.n = 30;
  o.m = 150;
  o.sigma = 1.3;
  o.delta = 0.3;
  o.l1_budgets = {0.0, 0.5};
  o.reps = 2;
  o.seed = 2;
  const auto res = ridge_vs_l1_demo(o);
  CHECK(res.mean_l1_risk[0] == doctest::Approx(1.69).epsilon(1e-15));
  for (const auto& rep : res.reps) {
    CHECK(rep.ridge_norm_ratio <= 1.0 + 1e-9);
    CHECK(rep.l1_budget_used[1] <= 1.0 + 1e-9);
  }
  const std::string csv = ridge_demo_to_csv(o, res);
  CHECK(csv.rfind("method,radius,mean_population_risk,mean_l2_norm,mean_norm_ratio,times_selected\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 4);
}

TEST_CASE("sup_deviation examples") {
  const Dataset d = l1persist::testing::random_classification(100, 10, 1);
  CHECK(sup_deviation(d, 20, 3, 1.0, Loss::exponential, d, 4) == 0.0);
  CHECK(sup_deviation(d, 5, 0, 1.0, Loss::exponential,
                      [](const Coefficients&) { return 1.0; }, 4) == 0.0);
  CHECK_THROWS_AS(sup_deviation(d, 0, 1, 1.0, Loss::exponential, d, 4), std::invalid_argument);
}

TEST_CASE("sup_deviation shrinks as the sample grows") {
  const Coefficients star = unit_sparse_beta(20, 3);
  const double sigma = 1.0;
  const RiskReference reference = [&](const Coefficients& b) { return true_risk_gaussian(b, star, sigma); };
  std::vector<double> mean_dev;
  for (std::size_t n : {200u, 800u, 3200u}) {
    double total = 0;
    for (std::uint64_t r = 0; r < 20; ++r) {
      const Dataset d = gen_sparse_linear(n, star, sigma, derive_seed(10, {n, r}));
      total += sup_deviation(d, 50, 3, 0.5, Loss::squared, reference, 99);
    }
    mean_dev.push_back(total / 20);
  }
  CHECK(mean_dev[1] < mean_dev[0]);
  CHECK(mean_dev[2] < mean_dev[1]);
}

TEST_CASE("self_consistency_gap") {
  const Dataset d = l1persist::testing::random_classification(50, 6, 3);
  const Dataset e = l1persist::testing::random_classification(70, 6, 4);
  const Coefficients b(l1persist::testing::vec({0.3, -0.1, 0, 0, 0.2, 0}));
  CHECK(self_consistency_gap(d, d, b, Loss::exponential) == 0.0);
  CHECK(self_consistency_gap(d, e, Coefficients(6), Loss::exponential) == 0.0);
  CHECK(self_consistency_gap(d, e, b, Loss::squared) > 0.0);
}

TEST_CASE("self-consistency gap is much larger for weak penalties") {
  const Dataset train = gen_section4(200, 400, 1);
  const Dataset test = gen_section4(1000, 400, 2);
  const auto loose = solve_penalized(train, Loss::exponential, 0.01);
  const auto strict = solve_penalized(train, Loss::exponential, 0.17);
  const double g_loose = self_consistency_gap(train, test, loose.beta, Loss::exponential);
  const double g_strict = self_consistency_gap(train, test, strict.beta, Loss::exponential);
  CHECK(g_loose > 3.0 * g_strict);
}

TEST_CASE("sweep csv format") {
  SweepRow r;
  r.lambda = 0.05;
  r.v_training = 0.5;
  r.reps = 20;
  r.seed = 7;
  const std::string csv = sweep_to_csv({r});
  CHECK(csv == "lambda,v_training,v_real,b1_norm,b2_norm,beta_l1,reps,seed\n0.05,0.5,0,0,0,0,20,7\n");
}
