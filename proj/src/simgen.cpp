#include "l1persist/simgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "l1persist/rng.hpp"

namespace l1persist {

std::string_view to_string(NoiseConvention c) {
  return c == NoiseConvention::variance ? "var" : "std";
}

NoiseConvention parse_noise_convention(std::string_view name) {
  if (name == "var" || name == "variance") return NoiseConvention::variance;
  if (name == "std" || name == "sd") return NoiseConvention::std_dev;
  throw std::invalid_argument("unknown variance convention '" + std::string(name) + "'");
}

namespace {

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be a finite value >= 0");
  }
}

// Row-major draw order: all of row i is drawn before row i + 1. This order is
// part of the reproducibility contract.
Matrix standard_normal_rows(std::size_t n, std::size_t m, Rng& rng,
                            std::normal_distribution<double>& normal, Vector& tail,
                            const auto& per_row) {
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  tail.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
    tail[i] = per_row(i, x);
  }
  return x;
}

}  // namespace

Dataset gen_section4(std::size_t n, std::size_t big_m, std::uint64_t seed,
                     NoiseConvention convention) {
  if (big_m < kRelevantColumns) {
    throw std::invalid_argument("section4: big_m must be >= 25, got " + std::to_string(big_m));
  }
  if (n == 0) throw std::invalid_argument("section4: n must be >= 1");
  const double sd_w = convention == NoiseConvention::variance ? 0.5 : 0.25;
  const double sd_u = convention == NoiseConvention::variance ? 3.0 : 9.0;

  const auto M = static_cast<Eigen::Index>(big_m);
  const auto P = static_cast<Eigen::Index>(kProxyColumns);
  Matrix x(static_cast<Eigen::Index>(n), M + P);
  Vector y(static_cast<Eigen::Index>(n));
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < M; ++j) x(i, j) = normal(rng);
    double v = 0.0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(kRelevantColumns); ++j) v += x(i, j);
    v /= 5.0;
    const double w = sd_w * normal(rng);
    y[i] = v + w >= 0.0 ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < P; ++j) x(i, M + j) = v + sd_u * normal(rng);
  }

  DatasetMeta meta;
  meta.scenario = "section4";
  meta.seed = seed;
  meta.params = {{"n", n}, {"big_m", big_m}, {"variance_convention", to_string(convention)}};
  meta.relevant = ColumnRange{0, kRelevantColumns};
  meta.proxy = ColumnRange{big_m, big_m + kProxyColumns};
  return Dataset(std::move(x), std::move(y), std::move(meta));
}

Dataset gen_sparse_linear(std::size_t n, const Coefficients& beta_star, double sigma,
                          std::uint64_t seed) {
  require_sigma(sigma);
  if (n == 0) throw std::invalid_argument("sparse_linear: n must be >= 1");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y;
  const Vector& b = beta_star.values();
  Matrix x = standard_normal_rows(n, beta_star.m(), rng, normal, y, [&](Eigen::Index i, const Matrix& xs) {
    return xs.row(i).dot(b) + sigma * normal(rng);
  });

  DatasetMeta meta;
  meta.scenario = "sparse_linear";
  meta.seed = seed;
  nlohmann::json nz = nlohmann::json::array();
  for (const auto& [j, v] : beta_star.nonzeros()) nz.push_back({j + 1, v});
  meta.params = {{"n", n}, {"m", beta_star.m()}, {"sigma", sigma}, {"beta_star", nz}};
  if (const auto nnz = beta_star.nonzeros(); !nnz.empty()) {
    meta.relevant = ColumnRange{nnz.front().first, nnz.back().first + 1};
  }
  return Dataset(std::move(x), std::move(y), std::move(meta));
}

Dataset gen_null(std::size_t n, std::size_t m, double sigma, std::uint64_t seed) {
  require_sigma(sigma);
  if (n == 0) throw std::invalid_argument("null: n must be >= 1");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y;
  Matrix x = standard_normal_rows(n, m, rng, normal, y, [&](Eigen::Index, const Matrix&) {
    return sigma * normal(rng);
  });
  DatasetMeta meta;
  meta.scenario = "null";
  meta.seed = seed;
  meta.params = {{"n", n}, {"m", m}, {"sigma", sigma}};
  return Dataset(std::move(x), std::move(y), std::move(meta));
}

Dataset generate(const ScenarioSpec& spec, std::uint64_t seed) {
  struct Visitor {
    std::uint64_t seed;
    Dataset operator()(const Section4Spec& s) const {
      return gen_section4(s.n, s.big_m, seed, s.convention);
    }
    Dataset operator()(const SparseLinearSpec& s) const {
      return gen_sparse_linear(s.n, s.beta_star, s.sigma, seed);
    }
    Dataset operator()(const NullSpec& s) const { return gen_null(s.n, s.m, s.sigma, seed); }
  };
  return std::visit(Visitor{seed}, spec);
}

double true_risk_gaussian(const Coefficients& beta, const Coefficients& beta_star, double sigma) {
  if (beta.m() != beta_star.m()) {
    throw std::invalid_argument("true_risk_gaussian: dimension mismatch");
  }
  return sigma * sigma + (beta.values() - beta_star.values()).squaredNorm();
}

Coefficients unit_sparse_beta(std::size_t m, std::size_t s) {
  if (s == 0 || s > m) throw std::invalid_argument("unit_sparse_beta: need 1 <= s <= m");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(m));
  v.head(static_cast<Eigen::Index>(s)).setConstant(1.0 / std::sqrt(static_cast<double>(s)));
  return Coefficients(std::move(v));
}

}  // namespace l1persist
