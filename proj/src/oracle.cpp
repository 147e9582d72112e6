#include "l1persist/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

namespace l1persist {

double binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0.0;
  k = std::min(k, m - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(m - k + i) / static_cast<double>(i);
    if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
  }
  return std::round(c);
}

namespace {

void check_k(const Dataset& d, std::size_t k) {
  if (k > d.m() || k > d.n()) {
    throw std::invalid_argument("subset size k=" + std::to_string(k) + " exceeds min(n, m)");
  }
}

SubsetSolution embed(const Dataset& d, const std::vector<std::size_t>& subset,
                     const Vector& sub_beta, Loss loss, bool unbounded) {
  Vector full = Vector::Zero(static_cast<Eigen::Index>(d.m()));
  for (std::size_t c = 0; c < subset.size(); ++c) {
    full[static_cast<Eigen::Index>(subset[c])] = sub_beta[static_cast<Eigen::Index>(c)];
  }
  SubsetSolution out{subset, Coefficients(std::move(full)), 0.0, unbounded};
  out.risk = empirical_risk(d, out.beta, loss);
  return out;
}

// All margins y_i <x_i, beta> >= 0 with at least one > 0: scaling beta up
// lowers every exponential term, so the infimum is not attained.
bool separates(const Dataset& d, const Vector& beta) {
  const Vector ys = d.y().cwiseProduct(d.x() * beta);
  return ys.size() > 0 && ys.minCoeff() >= 0.0 && ys.maxCoeff() > 0.0;
}

}  // namespace

SubsetSolution best_subset(const Dataset& d, std::size_t k, Loss loss, const OracleConfig& cfg) {
  check_k(d, k);
  if (loss == Loss::absolute) {
    throw std::invalid_argument("best_subset supports squared and exponential loss");
  }
  const double count = binomial(d.m(), k);
  if (count > static_cast<double>(cfg.budget)) {
    throw BudgetExceededError("best_subset: C(m, k) = " + std::to_string(count) +
                                  " subsets exceeds budget " + std::to_string(cfg.budget),
                              count);
  }

  SolveConfig descent = cfg.descent;
  descent.divergence_norm = cfg.divergence_norm;

  double best_risk = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_subset_idx;
  Vector best_beta;
  bool best_unbounded = false;
  for_each_subset(d.m(), k, [&](const std::vector<std::size_t>& subset) {
    const Dataset sub = d.select_columns(subset);
    Vector beta;
    bool unbounded = false;
    if (loss == Loss::squared) {
      beta = k == 0 ? Vector() : Vector(sub.x().colPivHouseholderQr().solve(sub.y()));
    } else {
      auto fit = solve_penalized(sub, loss, 0.0, descent);
      beta = fit.beta.values();
      unbounded = fit.report.diverged || separates(sub, beta);
    }
    const Vector s = sub.x() * beta;
    const auto risk = mean_loss(loss, sub.y(), s);
    if (risk && *risk < best_risk) {
      best_risk = *risk;
      best_subset_idx = subset;
      best_beta = beta;
      best_unbounded = unbounded;
    }
  });
  if (!std::isfinite(best_risk)) throw NonfiniteLossError("best_subset: no finite subset fit");
  return embed(d, best_subset_idx, best_beta, loss, best_unbounded);
}

SubsetSolution grid_best(const Dataset& d, std::size_t k, double cube_radius, double step,
                         Loss loss, std::uint64_t budget) {
  check_k(d, k);
  if (!(cube_radius > 0.0) || !(step > 0.0)) {
    throw std::invalid_argument("grid_best: cube_radius and step must be > 0");
  }
  const auto per_axis =
      static_cast<std::size_t>(std::floor(2.0 * cube_radius / step - 0.5 + 1e-9)) + 1;
  const double count =
      std::pow(static_cast<double>(per_axis), static_cast<double>(k)) * binomial(d.m(), k);
  if (count > static_cast<double>(budget)) {
    throw BudgetExceededError("grid_best: " + std::to_string(count) +
                                  " grid evaluations exceed budget " + std::to_string(budget),
                              count);
  }

  double best_risk = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_subset_idx;
  Vector best_beta;
  std::vector<std::size_t> cell(k);
  Vector beta(static_cast<Eigen::Index>(k));
  for_each_subset(d.m(), k, [&](const std::vector<std::size_t>& subset) {
    const Dataset sub = d.select_columns(subset);
    std::fill(cell.begin(), cell.end(), 0);
    for (;;) {
      for (std::size_t a = 0; a < k; ++a) {
        beta[static_cast<Eigen::Index>(a)] =
            -cube_radius + (static_cast<double>(cell[a]) + 0.5) * step;
      }
      const Vector s = sub.x() * beta;
      const auto risk = mean_loss(loss, sub.y(), s);
      if (risk && *risk < best_risk) {
        best_risk = *risk;
        best_subset_idx = subset;
        best_beta = beta;
      }
      std::size_t a = 0;
      while (a < k && ++cell[a] == per_axis) cell[a++] = 0;
      if (a == k) break;
    }
  });
  if (!std::isfinite(best_risk)) throw NonfiniteLossError("grid_best: no finite grid point");
  return embed(d, best_subset_idx, best_beta, loss, false);
}

}  // namespace l1persist
