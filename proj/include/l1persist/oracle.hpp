#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "l1persist/risk.hpp"
#include "l1persist/solvers.hpp"

namespace l1persist {

/// Exhaustive search over all size-k supports. Desk scale only.
struct SubsetSolution {
  /// Zero-based, ascending.
  std::vector<std::size_t> subset;
  Coefficients beta;
  /// empirical_risk(d, beta, loss), recomputed on the full dataset.
  double risk = 0.0;
  /// The exponential-loss infimum on the winning subset is not attained: the
  /// iterate crossed the norm cutoff or already separates the data. beta is
  /// the last iterate.
  bool unbounded = false;
};

/// Thrown when a search would exceed its evaluation budget.
class BudgetExceededError : public std::invalid_argument {
 public:
  BudgetExceededError(const std::string& what, double count)
      : std::invalid_argument(what), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

struct OracleConfig {
  std::uint64_t budget = 1'000'000;
  /// Per-subset descent for losses without a closed form.
  SolveConfig descent{};
  double divergence_norm = 1e3;
};

/// Number of k-subsets of m items, saturating at +inf in double precision.
double binomial(std::size_t m, std::size_t k);

/// argmin over |S| = k of the empirical risk minimized on S. Squared loss
/// uses least squares per subset; exponential loss uses unpenalized descent.
/// Ties resolve to the lexicographically smallest subset.
SubsetSolution best_subset(const Dataset& d, std::size_t k, Loss loss,
                           const OracleConfig& cfg = {});

/// Best grid point over all size-k supports, where each support carries the
/// centers of a grid of cells of width `step` tiling [-cube_radius, cube_radius]^k.
SubsetSolution grid_best(const Dataset& d, std::size_t k, double cube_radius, double step,
                         Loss loss, std::uint64_t budget = 1'000'000);

/// Calls visit(subset) for every size-k subset of {0..m-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t m, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > m) return;
  for (;;) {
    visit(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace l1persist
