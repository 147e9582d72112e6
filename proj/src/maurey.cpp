#include "l1persist/maurey.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "l1persist/parallel.hpp"

namespace l1persist {

SparsifyOutcome sparsify(const Coefficients& beta, std::size_t kappa, Rng& rng) {
  if (kappa == 0) throw std::invalid_argument("sparsify: kappa must be >= 1");
  const double b = beta.l1_norm();
  if (!(b > 0.0)) throw std::invalid_argument("sparsify: zero vector has no sampling distribution");

  const auto nz = beta.nonzeros();
  std::vector<double> cumulative(nz.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < nz.size(); ++k) {
    acc += std::abs(nz[k].second);
    cumulative[k] = acc;
  }

  // Inverse-CDF sampling against the running sums; the last bucket absorbs
  // the rounding gap between acc and b.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> counts(nz.size(), 0);
  SparsifyOutcome out;
  out.kappa = kappa;
  out.source_l1 = b;
  out.draws.reserve(kappa);
  for (std::size_t draw = 0; draw < kappa; ++draw) {
    const double u = unit(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), nz.size() - 1);
    ++counts[k];
    out.draws.push_back(nz[k].first);
  }

  Vector v = Vector::Zero(static_cast<Eigen::Index>(beta.m()));
  for (std::size_t k = 0; k < nz.size(); ++k) {
    if (counts[k] == 0) continue;
    const double sign = nz[k].second > 0.0 ? 1.0 : -1.0;
    v[static_cast<Eigen::Index>(nz[k].first)] = sign * b * (static_cast<double>(counts[k]) / static_cast<double>(kappa));
  }
  out.beta_prime = Coefficients(std::move(v));
  return out;
}

SparsifyOutcome sparsify(const Coefficients& beta, std::size_t kappa, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sparsify(beta, kappa, rng);
}

double deviation_bound(double big_m, double b, double delta, std::size_t kappa) {
  if (!(delta > 0.0)) throw std::invalid_argument("deviation_bound: delta must be > 0");
  if (kappa == 0) throw std::invalid_argument("deviation_bound: kappa must be >= 1");
  if (!(big_m >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("deviation_bound: M and b must be >= 0");
  }
  return std::min(1.0, big_m * big_m * b * b / (delta * delta * static_cast<double>(kappa)));
}

double empirical_deviation_rate(const Dataset& d, const Coefficients& beta, std::size_t kappa,
                                double delta, std::size_t trials, std::uint64_t seed,
                                unsigned threads) {
  require_same_dim(d, beta);
  if (trials == 0) throw std::invalid_argument("empirical_deviation_rate: trials must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("empirical_deviation_rate: delta must be > 0");
  const Vector base = predict_margin(d, beta);
  std::vector<std::size_t> exceed(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto outcome = sparsify(beta, kappa, derive_seed(seed, {t}));
    const Vector s = predict_margin(d, outcome.beta_prime);
    exceed[t] = static_cast<std::size_t>(((s - base).array().abs() > delta).count());
  });
  std::size_t total = 0;
  for (auto e : exceed) total += e;
  return static_cast<double>(total) / (static_cast<double>(trials) * static_cast<double>(d.n()));
}

}  // namespace l1persist
