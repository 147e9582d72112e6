#include "l1persist/risk.hpp"

#include <cmath>
#include <limits>

#include "detail.hpp"

namespace l1persist {

Dataset::Dataset(Matrix x, Vector y, DatasetMeta meta)
    : x_(std::move(x)), y_(std::move(y)), meta_(std::move(meta)) {
  if (x_.rows() != y_.size()) {
    throw std::invalid_argument("dataset: x has " + std::to_string(x_.rows()) +
                                " rows but y has " + std::to_string(y_.size()) + " entries");
  }
  if (y_.size() == 0) throw std::invalid_argument("dataset: no observations");
  if (!x_.allFinite() || !y_.allFinite()) {
    throw std::invalid_argument("dataset: non-finite entry");
  }
  auto check_range = [&](const std::optional<ColumnRange>& r, const char* what) {
    if (r && (r->begin > r->end || r->end > m())) {
      throw std::invalid_argument(std::string("dataset: ") + what + " range out of bounds");
    }
  };
  check_range(meta_.relevant, "relevant");
  check_range(meta_.proxy, "proxy");
}

bool Dataset::is_classification() const {
  return (y_.array() == 1.0 || y_.array() == -1.0).all();
}

Dataset Dataset::select_columns(std::span<const std::size_t> columns) const {
  Matrix sub(x_.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= m()) throw std::invalid_argument("select_columns: index out of range");
    sub.col(static_cast<Eigen::Index>(c)) = x_.col(static_cast<Eigen::Index>(columns[c]));
  }
  DatasetMeta meta;
  meta.scenario = meta_.scenario;
  meta.seed = meta_.seed;
  meta.params = meta_.params;
  return Dataset(std::move(sub), y_, std::move(meta));
}

Coefficients::Coefficients(std::size_t m) : values_(Vector::Zero(static_cast<Eigen::Index>(m))) {}

Coefficients::Coefficients(Vector values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("coefficients: non-finite entry");
}

Coefficients Coefficients::from_nonzeros(
    std::size_t m, std::span<const std::pair<std::size_t, double>> nonzeros) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(m));
  for (const auto& [j, value] : nonzeros) {
    if (j >= m) throw std::invalid_argument("coefficients: index out of range");
    v[static_cast<Eigen::Index>(j)] = value;
  }
  return Coefficients(std::move(v));
}

std::size_t Coefficients::support() const {
  return static_cast<std::size_t>((values_.array() != 0.0).count());
}

std::vector<std::pair<std::size_t, double>> Coefficients::nonzeros() const {
  std::vector<std::pair<std::size_t, double>> out;
  for (Eigen::Index j = 0; j < values_.size(); ++j) {
    if (values_[j] != 0.0) out.emplace_back(static_cast<std::size_t>(j), values_[j]);
  }
  return out;
}

std::string_view to_string(Loss loss) {
  switch (loss) {
    case Loss::squared: return "squared";
    case Loss::exponential: return "exponential";
    case Loss::absolute: return "absolute";
  }
  return "unknown";
}

Loss parse_loss(std::string_view name) {
  if (name == "squared") return Loss::squared;
  if (name == "exp" || name == "exponential") return Loss::exponential;
  if (name == "abs" || name == "absolute") return Loss::absolute;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

LossValue loss_eval(Loss loss, double y, double margin) {
  LossValue out{0.0, 0.0};
  switch (loss) {
    case Loss::squared: {
      const double r = y - margin;
      out = {r * r, -2.0 * r};
      break;
    }
    case Loss::exponential: {
      const double e = std::exp(-y * margin);
      out = {e, -y * e};
      break;
    }
    case Loss::absolute: {
      const double r = y - margin;
      out = {std::abs(r), r > 0.0 ? -1.0 : (r < 0.0 ? 1.0 : 0.0)};
      break;
    }
  }
  if (!std::isfinite(out.value) || !std::isfinite(out.d_margin)) {
    throw NonfiniteLossError("loss is not finite at y=" + std::to_string(y) +
                             ", margin=" + std::to_string(margin));
  }
  return out;
}

void require_same_dim(const Dataset& d, const Coefficients& beta) {
  if (beta.m() != d.m()) {
    throw std::invalid_argument("dimension mismatch: dataset has m=" + std::to_string(d.m()) +
                                ", coefficients have m=" + std::to_string(beta.m()));
  }
}

Vector predict_margin(const Dataset& d, const Coefficients& beta) {
  require_same_dim(d, beta);
  return detail::margin(d.x(), beta.values());
}

std::optional<double> mean_loss(Loss loss, const Vector& y, const Vector& margin,
                                Vector* d_margin) {
  const Eigen::Index n = y.size();
  if (d_margin) d_margin->resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  switch (loss) {
    case Loss::squared:
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = y[i] - margin[i];
        total += r * r;
        if (d_margin) (*d_margin)[i] = -2.0 * r * inv_n;
      }
      break;
    case Loss::exponential:
      for (Eigen::Index i = 0; i < n; ++i) {
        const double e = std::exp(-y[i] * margin[i]);
        total += e;
        if (d_margin) (*d_margin)[i] = -y[i] * e * inv_n;
      }
      break;
    case Loss::absolute:
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = y[i] - margin[i];
        total += std::abs(r);
        if (d_margin) (*d_margin)[i] = (r > 0.0 ? -1.0 : (r < 0.0 ? 1.0 : 0.0)) * inv_n;
      }
      break;
  }
  const double mean = total * inv_n;
  if (!std::isfinite(mean)) return std::nullopt;
  return mean;
}

double empirical_risk(const Dataset& d, const Coefficients& beta, Loss loss) {
  const Vector s = predict_margin(d, beta);
  const auto risk = mean_loss(loss, d.y(), s);
  if (!risk) throw NonfiniteLossError("empirical risk is not finite");
  return *risk;
}

Vector risk_gradient(const Dataset& d, const Coefficients& beta, Loss loss) {
  const Vector s = predict_margin(d, beta);
  Vector dm;
  if (!mean_loss(loss, d.y(), s, &dm)) throw NonfiniteLossError("empirical risk is not finite");
  return d.x().transpose() * dm;
}

double group_l1(const Coefficients& beta, std::span<const std::size_t> index_set) {
  double total = 0.0;
  for (std::size_t j : index_set) {
    if (j >= beta.m()) {
      throw std::invalid_argument("group_l1: index " + std::to_string(j) + " out of range");
    }
    total += std::abs(beta[j]);
  }
  return total;
}

double group_l1(const Coefficients& beta, ColumnRange range) {
  if (range.begin > range.end || range.end > beta.m()) {
    throw std::invalid_argument("group_l1: range out of bounds");
  }
  return beta.values().segment(static_cast<Eigen::Index>(range.begin),
                               static_cast<Eigen::Index>(range.size()))
      .lpNorm<1>();
}

}  // namespace l1persist
