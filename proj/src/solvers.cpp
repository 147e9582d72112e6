#include "l1persist/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "detail.hpp"

namespace l1persist {

void SolveConfig::validate() const {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(step_init > 0.0) || !std::isfinite(step_init)) {
    throw std::invalid_argument("step_init must be > 0");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("backtrack must lie in (0, 1)");
  }
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("armijo must lie in (0, 1)");
  if (!(certificate_tol > 0.0)) throw std::invalid_argument("certificate_tol must be > 0");
  if (!(divergence_norm >= 0.0)) throw std::invalid_argument("divergence_norm must be >= 0");
}

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

Vector project_l1(const Vector& v, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("project_l1: radius must be >= 0");
  if (v.lpNorm<1>() <= radius) return v;
  if (radius == 0.0) return Vector::Zero(v.size());

  const auto m = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v[static_cast<Eigen::Index>(a)]) > std::abs(v[static_cast<Eigen::Index>(b)]);
  });

  // Largest rho with u_rho > (sum_{i<=rho} u_i - radius) / rho.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double u = std::abs(v[static_cast<Eigen::Index>(order[k])]);
    cumsum += u;
    const double candidate = (cumsum - radius) / static_cast<double>(k + 1);
    if (u > candidate) {
      theta = candidate;
    } else {
      break;
    }
  }

  Vector w(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) w[j] = soft_threshold(v[j], theta);
  return w;
}

Vector project_l2(const Vector& v, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("project_l2: radius must be >= 0");
  const double norm = v.norm();
  if (norm <= radius) return v;
  if (radius == 0.0) return Vector::Zero(v.size());
  return v * (radius / norm);
}

namespace {

constexpr double kStepGrowth = 1.2;

double kkt_from_gradient(const Vector& beta, const Vector& g, double lambda) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double r = beta[j] != 0.0 ? std::abs(g[j] + lambda * (beta[j] > 0.0 ? 1.0 : -1.0))
                                    : std::max(std::abs(g[j]) - lambda, 0.0);
    worst = std::max(worst, r);
  }
  return worst;
}

enum class RegKind { l1_penalty, l1_ball, l2_ball };

struct Regularizer {
  RegKind kind;
  double param;

  double value(const Vector& beta) const {
    return kind == RegKind::l1_penalty ? param * beta.lpNorm<1>() : 0.0;
  }

  Vector prox(const Vector& v, double step) const {
    switch (kind) {
      case RegKind::l1_penalty: {
        const double t = step * param;
        Vector out(v.size());
        for (Eigen::Index j = 0; j < v.size(); ++j) out[j] = soft_threshold(v[j], t);
        return out;
      }
      case RegKind::l1_ball: return project_l1(v, param);
      case RegKind::l2_ball: return project_l2(v, param);
    }
    return v;
  }

  double certificate(const Vector& beta, const Vector& g, double step) const {
    if (kind == RegKind::l1_penalty) return kkt_from_gradient(beta, g, param);
    const Vector moved = prox(beta - step * g, step);
    return (beta - moved).norm() / step;
  }
};

// Proximal gradient with backtracking. In accelerated mode the extrapolation
// is reset whenever the trial point would increase the objective, so the
// accepted sequence is non-increasing in both modes.
SolveResult minimize(const Dataset& d, Loss loss, const Regularizer& reg, const SolveConfig& cfg) {
  cfg.validate();
  const Matrix& X = d.x();
  const Vector& yv = d.y();
  const auto m = static_cast<Eigen::Index>(d.m());
  const auto n = static_cast<Eigen::Index>(d.n());

  SolveReport rep;
  Vector x = Vector::Zero(m);
  Vector mx = Vector::Zero(n);
  Vector dm;
  // Every supported loss is finite at the origin.
  double F_x = *mean_loss(loss, yv, mx) + reg.value(x);
  if (cfg.record_trace) rep.objective_trace.push_back(F_x);

  Vector x_prev = x, mx_prev = mx;
  Vector y = x, my = mx;
  bool y_is_x = true;
  double t = 1.0;
  double step = cfg.step_init;
  const double min_step = cfg.step_init * 1e-20;
  const double max_step = cfg.step_init * 1e20;

  Vector g(m), z, mz, diff;
  auto certificate_at_x = [&] {
    mean_loss(loss, yv, mx, &dm);
    g.noalias() = X.transpose() * dm;
    return reg.certificate(x, g, step);
  };

  bool certified = false;
  double cert = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  while (iter < cfg.max_iter) {
    ++iter;
    auto f_y = mean_loss(loss, yv, my, &dm);
    if (!f_y) {
      y = x;
      my = mx;
      t = 1.0;
      y_is_x = true;
      f_y = mean_loss(loss, yv, my, &dm);
    }
    g.noalias() = X.transpose() * dm;

    bool stalled = false;
    double f_z = 0.0;
    for (;;) {
      z = reg.prox(y - step * g, step);
      diff = z - y;
      mz = detail::margin(X, z);
      const auto trial = mean_loss(loss, yv, mz);
      bool ok = trial.has_value();
      if (ok && cfg.accelerate) {
        const double model = *f_y + g.dot(diff) + diff.squaredNorm() / (2.0 * step);
        ok = *trial <= model + 1e-12 * (1.0 + std::abs(*f_y));
      } else if (ok) {
        ok = *trial + reg.value(z) <= F_x - cfg.armijo / step * diff.squaredNorm();
      }
      if (ok) {
        f_z = *trial;
        break;
      }
      ++rep.step_rejections;
      step *= cfg.backtrack;
      if (step < min_step) {
        stalled = true;
        break;
      }
    }
    if (stalled) break;

    const double F_z = f_z + reg.value(z);
    if (F_z <= F_x) {
      const double F_old = F_x;
      x_prev.swap(x);
      mx_prev.swap(mx);
      x = z;
      mx = mz;
      F_x = F_z;
      if (cfg.record_trace) rep.objective_trace.push_back(F_x);
      if (cfg.accelerate) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double c = (t - 1.0) / t_next;
        y = x + c * (x - x_prev);
        my = mx + c * (mx - mx_prev);
        y_is_x = c == 0.0;
        t = t_next;
      } else {
        y = x;
        my = mx;
      }
      if (cfg.divergence_norm > 0.0 && x.norm() > cfg.divergence_norm) {
        rep.diverged = true;
        break;
      }
      const double rel = (F_old - F_x) / std::max(std::abs(F_old), std::numeric_limits<double>::min());
      if (rel < cfg.tol) {
        cert = certificate_at_x();
        if (cert <= cfg.certificate_tol) {
          certified = true;
          break;
        }
      }
    } else {
      // Extrapolation overshot; a plain step from x cannot increase F, so a
      // rejection there means no further progress is representable.
      if (y_is_x) break;
      y = x;
      my = mx;
      t = 1.0;
      y_is_x = true;
    }
    step = std::min(step * kStepGrowth, max_step);
  }

  if (!certified) cert = certificate_at_x();
  rep.iterations = iter;
  rep.objective = F_x;
  rep.kkt_residual = cert;
  rep.converged = certified;
  rep.final_step = step;
  return {Coefficients(std::move(x)), std::move(rep)};
}

void require_nonnegative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be a finite value >= 0");
  }
}

}  // namespace

SolveResult solve_penalized(const Dataset& d, Loss loss, double lambda, const SolveConfig& cfg) {
  require_nonnegative(lambda, "lambda");
  return minimize(d, loss, {RegKind::l1_penalty, lambda}, cfg);
}

SolveResult solve_constrained(const Dataset& d, Loss loss, double budget, const SolveConfig& cfg) {
  require_nonnegative(budget, "budget");
  return minimize(d, loss, {RegKind::l1_ball, budget}, cfg);
}

SolveResult solve_ridge_constrained(const Dataset& d, Loss loss, double delta,
                                    const SolveConfig& cfg) {
  require_nonnegative(delta, "delta");
  return minimize(d, loss, {RegKind::l2_ball, delta}, cfg);
}

double kkt_residual(const Dataset& d, Loss loss, double lambda, const Coefficients& beta) {
  require_nonnegative(lambda, "lambda");
  const Vector g = risk_gradient(d, beta, loss);
  return kkt_from_gradient(beta.values(), g, lambda);
}

double projected_gradient_residual(const Dataset& d, Loss loss, double radius,
                                   const Coefficients& beta, double step, bool euclidean_ball) {
  require_nonnegative(radius, "radius");
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  const Vector g = risk_gradient(d, beta, loss);
  const Regularizer reg{euclidean_ball ? RegKind::l2_ball : RegKind::l1_ball, radius};
  return reg.certificate(beta.values(), g, step);
}

}  // namespace l1persist
