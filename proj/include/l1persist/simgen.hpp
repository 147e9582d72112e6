#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "l1persist/risk.hpp"

namespace l1persist {

/// How to read the second argument of N(0, s) for the classification
/// scenario's noise terms W and U_j.
enum class NoiseConvention {
  variance,  ///< N(0, 0.25) has sd 0.5 and N(0, 9) has sd 3.
  std_dev,   ///< N(0, 0.25) has sd 0.25 and N(0, 9) has sd 9.
};

std::string_view to_string(NoiseConvention c);
NoiseConvention parse_noise_convention(std::string_view name);  // "var" | "std"

/// Classification scenario: M standard normal columns, y = sign(V + W) with
/// V the mean-scaled sum of the first 25 columns, plus five proxy columns
/// V + U_j appended after column M.
struct Section4Spec {
  std::size_t n = 500;
  std::size_t big_m = 1000;
  NoiseConvention convention = NoiseConvention::variance;
};

/// y = <beta_star, x> + sigma * eps with iid standard normal x and eps.
struct SparseLinearSpec {
  std::size_t n = 100;
  Coefficients beta_star;
  double sigma = 1.0;
};

/// y independent of x, y ~ N(0, sigma^2).
struct NullSpec {
  std::size_t n = 100;
  std::size_t m = 1000;
  double sigma = 1.0;
};

using ScenarioSpec = std::variant<Section4Spec, SparseLinearSpec, NullSpec>;

inline constexpr std::size_t kRelevantColumns = 25;
inline constexpr std::size_t kProxyColumns = 5;

Dataset gen_section4(std::size_t n, std::size_t big_m, std::uint64_t seed,
                     NoiseConvention convention = NoiseConvention::variance);
Dataset gen_sparse_linear(std::size_t n, const Coefficients& beta_star, double sigma,
                          std::uint64_t seed);
Dataset gen_null(std::size_t n, std::size_t m, double sigma, std::uint64_t seed);

Dataset generate(const ScenarioSpec& spec, std::uint64_t seed);

/// Population squared-loss risk sigma^2 + ||beta - beta_star||_2^2 under the
/// iid standard normal design.
double true_risk_gaussian(const Coefficients& beta, const Coefficients& beta_star, double sigma);

/// s equal entries 1/sqrt(s) in the first s coordinates, so ||.||_2 = 1.
Coefficients unit_sparse_beta(std::size_t m, std::size_t s);

}  // namespace l1persist
