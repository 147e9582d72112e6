#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "l1persist/risk.hpp"
#include "l1persist/rng.hpp"

namespace l1persist {

/// A kappa-sparse stand-in for a dense coefficient vector with the same l1 norm.
struct SparsifyOutcome {
  Coefficients beta_prime;
  std::size_t kappa = 0;
  /// Zero-based coordinates, in draw order.
  std::vector<std::size_t> draws;
  double source_l1 = 0.0;
};

/// Maurey's empirical method: draw kappa coordinates iid with probability
/// |beta_j| / ||beta||_1 and set beta'_j = sign(beta_j) (||beta||_1 / kappa) c_j,
/// where c_j counts the draws of j. Then E[<beta', x>] = <beta, x> for every x.
SparsifyOutcome sparsify(const Coefficients& beta, std::size_t kappa, Rng& rng);
SparsifyOutcome sparsify(const Coefficients& beta, std::size_t kappa, std::uint64_t seed);

/// min(1, M^2 b^2 / (delta^2 kappa)).
double deviation_bound(double big_m, double b, double delta, std::size_t kappa);

/// Fraction of (trial, observation) pairs with |<beta', x_i> - <beta, x_i>| > delta
/// over `trials` independent sparsifications. Trial t uses derive_seed(seed, {t}).
double empirical_deviation_rate(const Dataset& d, const Coefficients& beta, std::size_t kappa,
                                double delta, std::size_t trials, std::uint64_t seed,
                                unsigned threads = 1);

}  // namespace l1persist
