#pragma once

#include <cmath>
#include <random>

#include "l1persist/risk.hpp"

namespace l1persist::testing {

/// 4x3 design with orthogonal +-1 columns (X^T X / n = I) and
/// y = 3 h1 + 2 h2 + h3, so the per-column least-squares fit is (3, 2, 1).
inline Dataset hadamard_dataset() {
  Matrix x(4, 3);
  x << 1, 1, 1,
       1, -1, -1,
       -1, 1, -1,
       -1, -1, 1;
  Vector b(3);
  b << 3, 2, 1;
  return Dataset(x, x * b);
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) out[i++] = e;
  return out;
}

inline Matrix random_matrix(std::size_t n, std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = z(rng);
  return x;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  return random_matrix(n, 1, rng, scale).col(0);
}

/// Random regression dataset with a sparse signal on the first columns.
inline Dataset random_regression(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix x = random_matrix(n, m, rng);
  Vector b = Vector::Zero(static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < std::min<Eigen::Index>(3, b.size()); ++j) b[j] = 1.0 - 0.3 * static_cast<double>(j);
  Vector y = x * b + 0.5 * random_vector(n, rng);
  return Dataset(std::move(x), std::move(y));
}

/// Random classification dataset (labels +-1) with a noisy linear rule.
inline Dataset random_classification(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix x = random_matrix(n, m, rng);
  Vector noise = random_vector(n, rng);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double s = x(i, 0) - 0.5 * x(i, 1 % x.cols()) + noise[i];
    y[i] = s >= 0 ? 1.0 : -1.0;
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace l1persist::testing
