#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "l1persist/simgen.hpp"

using namespace l1persist;

namespace {

double correlation(const Vector& a, const Vector& b) {
  const Vector ac = a.array() - a.mean();
  const Vector bc = b.array() - b.mean();
  return ac.dot(bc) / std::sqrt(ac.squaredNorm() * bc.squaredNorm());
}

double sample_variance(const Vector& a) {
  return (a.array() - a.mean()).square().sum() / static_cast<double>(a.size() - 1);
}

Vector latent_v(const Dataset& d) {
  return d.x().leftCols(static_cast<Eigen::Index>(kRelevantColumns)).rowwise().sum() / 5.0;
}

}  // namespace

TEST_CASE("classification scenario shape and metadata") {
  const Dataset d = gen_section4(50, 30, 1);
  CHECK(d.n() == 50);
  CHECK(d.m() == 35);
  CHECK(d.is_classification());
  CHECK(d.meta().relevant == ColumnRange{0, 25});
  CHECK(d.meta().proxy == ColumnRange{30, 35});
  CHECK(d.meta().seed == 1);
  CHECK_THROWS_AS(gen_section4(10, 24, 1), std::invalid_argument);
}

TEST_CASE("classification scenario statistics") {
  const std::size_t n = 100000;
  const Dataset d = gen_section4(n, 25, 2024);
  const Vector v = latent_v(d);
  CHECK(std::abs(sample_variance(v) - 1.0) <= 0.02);
  for (Eigen::Index j = 25; j < 30; ++j) {
    CHECK(std::abs(correlation(d.x().col(j), v) - 1.0 / std::sqrt(10.0)) <= 0.01);
  }

  // Under the other reading the five columns are checked to 4 standard errors.
  const Dataset s = gen_section4(n, 25, 2024, NoiseConvention::std_dev);
  const Vector vs = latent_v(s);
  const double rho = 1.0 / std::sqrt(82.0);
  const double se = (1 - rho * rho) / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 25; j < 30; ++j) {
    CHECK(std::abs(correlation(s.x().col(j), vs) - rho) <= 4 * se);
  }
}

TEST_CASE("property: classes are balanced") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Dataset d = gen_section4(10000, 25, seed);
    const double positive = (d.y().array() > 0).cast<double>().mean();
    CHECK(std::abs(positive - 0.5) <= 0.02);
  }
}

TEST_CASE("noiseless sparse linear model") {
  Vector e1 = Vector::Zero(6);
  e1[0] = 1.0;
  const Dataset d = gen_sparse_linear(40, Coefficients(e1), 0.0, 5);
  CHECK(d.y() == d.x().col(0));
  CHECK_THROWS_AS(gen_sparse_linear(40, Coefficients(e1), -1.0, 5), std::invalid_argument);
}

TEST_CASE("zero signal reproduces the null generator draw for draw") {
  const Dataset a = gen_sparse_linear(30, Coefficients(7), 1.3, 11);
  const Dataset b = gen_null(30, 7, 1.3, 11);
  CHECK(a.x() == b.x());
  CHECK(a.y() == b.y());
}

TEST_CASE("sparse linear second moment") {
  const Coefficients beta = unit_sparse_beta(10, 4);
  const double sigma = 0.5;
  const Dataset d = gen_sparse_linear(100000, beta, sigma, 3);
  const Vector y2 = d.y().array().square();
  const double se = std::sqrt(sample_variance(y2) / static_cast<double>(y2.size()));
  CHECK(std::abs(y2.mean() - (1.0 + sigma * sigma)) <= 3 * se);
}

TEST_CASE("null model statistics") {
  const double sigma = 1.7;
  const Dataset d = gen_null(100000, 5, sigma, 9);
  for (Eigen::Index j : {0, 2, 4}) CHECK(std::abs(correlation(d.y(), d.x().col(j))) <= 0.01);
  // Var of the sample variance of a normal is 2 sigma^4 / (n - 1).
  const double se = std::sqrt(2.0 / 99999.0) * sigma * sigma;
  CHECK(std::abs(sample_variance(d.y()) - sigma * sigma) <= 3 * se);

  const Dataset empty = gen_null(10, 0, 1.0, 1);
  CHECK(empty.m() == 0);
  CHECK(empty.n() == 10);
}

TEST_CASE("true_risk_gaussian examples") {
  const Coefficients star = unit_sparse_beta(6, 2);
  CHECK(true_risk_gaussian(star, star, 0.7) == doctest::Approx(0.49));
  const Coefficients b(l1persist::testing::vec({0.3, -0.4, 0, 0, 0, 0}));
  CHECK(true_risk_gaussian(b, Coefficients(6), 1.0) == doctest::Approx(1.25));
  CHECK_THROWS_AS(true_risk_gaussian(b, Coefficients(5), 1.0), std::invalid_argument);
}

TEST_CASE("true risk agrees with a large fresh sample") {
  const Coefficients star = unit_sparse_beta(8, 3);
  const Coefficients b(l1persist::testing::vec({0.2, 0.9, 0.0, -0.3, 0, 0, 0.1, 0}));
  const double sigma = 0.8;
  const Dataset d = gen_sparse_linear(1000000, star, sigma, 42);
  const Vector r2 = (d.y() - d.x() * b.values()).array().square();
  const double se = std::sqrt(sample_variance(r2) / static_cast<double>(r2.size()));
  CHECK(std::abs(empirical_risk(d, b, Loss::squared) - true_risk_gaussian(b, star, sigma)) <= 3 * se);
}

TEST_CASE("property: true risk is minimized only at the true coefficients") {
  const Coefficients star = unit_sparse_beta(5, 5);
  const double at_star = true_risk_gaussian(star, star, 1.0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector delta = l1persist::testing::random_vector(5, rng, 1e-3);
    CHECK(true_risk_gaussian(Coefficients(Vector(star.values() + delta)), star, 1.0) > at_star);
  }
}

TEST_CASE("property: generation is deterministic per seed") {
  const Dataset a = gen_section4(60, 40, 77);
  const Dataset b = generate(Section4Spec{60, 40, NoiseConvention::variance}, 77);
  CHECK(a.x() == b.x());
  CHECK(a.y() == b.y());
  const Dataset c = gen_section4(60, 40, 78);
  CHECK(a.x() != c.x());
  const Dataset s1 = generate(SparseLinearSpec{20, unit_sparse_beta(9, 2), 0.3}, 5);
  const Dataset s2 = gen_sparse_linear(20, unit_sparse_beta(9, 2), 0.3, 5);
  CHECK(s1.y() == s2.y());
  const Dataset n1 = generate(NullSpec{20, 9, 0.3}, 5);
  CHECK(n1.x() == s2.x());
}

TEST_CASE("unit_sparse_beta") {
  const Coefficients b = unit_sparse_beta(10, 5);
  CHECK(b.support() == 5);
  CHECK(b.l2_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(unit_sparse_beta(3, 4), std::invalid_argument);
  CHECK(parse_noise_convention("std") == NoiseConvention::std_dev);
  CHECK(to_string(NoiseConvention::variance) == "var");
  CHECK_THROWS_AS(parse_noise_convention("sd9"), std::invalid_argument);
}
