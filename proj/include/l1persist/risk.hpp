#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace l1persist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Zero-based, half-open range of columns [begin, end).
struct ColumnRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const ColumnRange&) const = default;
};

/// Where a dataset came from. `params` holds the scenario parameters.
struct DatasetMeta {
  std::string scenario;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::optional<ColumnRange> relevant;
  std::optional<ColumnRange> proxy;
};

/// n observations of (y, x_1..x_m); row i of x is observation i.
class Dataset {
 public:
  /// Throws std::invalid_argument on shape mismatch or non-finite entries.
  Dataset(Matrix x, Vector y, DatasetMeta meta = {});

  std::size_t n() const { return static_cast<std::size_t>(y_.size()); }
  std::size_t m() const { return static_cast<std::size_t>(x_.cols()); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  const DatasetMeta& meta() const { return meta_; }

  /// True when every response is -1 or +1.
  bool is_classification() const;

  /// Dataset restricted to the given columns (in the given order).
  Dataset select_columns(std::span<const std::size_t> columns) const;

 private:
  Matrix x_;
  Vector y_;
  DatasetMeta meta_;
};

/// Dense m-vector of linear-predictor weights.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(std::size_t m);
  /// Throws std::invalid_argument on non-finite entries.
  explicit Coefficients(Vector values);

  /// Builds from zero-based (index, value) pairs.
  static Coefficients from_nonzeros(
      std::size_t m, std::span<const std::pair<std::size_t, double>> nonzeros);

  std::size_t m() const { return static_cast<std::size_t>(values_.size()); }
  const Vector& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }

  double l1_norm() const { return values_.lpNorm<1>(); }
  double l2_norm() const { return values_.norm(); }
  std::size_t support() const;
  /// Zero-based indices in ascending order.
  std::vector<std::pair<std::size_t, double>> nonzeros() const;

 private:
  Vector values_;
};

enum class Loss { squared, exponential, absolute };

std::string_view to_string(Loss loss);
/// Accepts "squared", "exp"/"exponential", "abs"/"absolute".
Loss parse_loss(std::string_view name);

struct LossValue {
  double value;
  double d_margin;
};

/// Raised when a loss evaluates to inf/NaN (e.g. exp overflow).
class NonfiniteLossError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss and its derivative in the margin s = <beta, x>.
///   squared:     (y - s)^2,   -2 (y - s)
///   exponential: exp(-y s),   -y exp(-y s)
///   absolute:    |y - s|,     -sign(y - s), 0 at the kink
LossValue loss_eval(Loss loss, double y, double margin);

/// Margins <x_i, beta> for every observation.
Vector predict_margin(const Dataset& d, const Coefficients& beta);

/// (1/n) sum_i l(beta, Z_i). Throws NonfiniteLossError.
double empirical_risk(const Dataset& d, const Coefficients& beta, Loss loss);

/// Gradient of empirical_risk with respect to beta.
Vector risk_gradient(const Dataset& d, const Coefficients& beta, Loss loss);

/// Mean loss of `margin` against `y`. When `d_margin` is given it receives
/// dl/ds for each observation divided by n, so X^T d_margin is the risk
/// gradient. Returns nullopt if any loss value is not finite.
std::optional<double> mean_loss(Loss loss, const Vector& y, const Vector& margin,
                                Vector* d_margin = nullptr);

/// Sum of |beta_j| over zero-based indices. Throws on out-of-range index.
double group_l1(const Coefficients& beta, std::span<const std::size_t> index_set);
double group_l1(const Coefficients& beta, ColumnRange range);

void require_same_dim(const Dataset& d, const Coefficients& beta);

}  // namespace l1persist
