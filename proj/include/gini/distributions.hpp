#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "gini/kernels.hpp"

namespace gini {

/// Symmetric 2x2 scatter matrix [[s11, s12], [s12, s22]].
struct ScatterSpec {
  double s11 = 1.0;
  double s12 = 0.0;
  double s22 = 1.0;

  /// Throws InvalidScatter unless positive definite.
  void validate() const;
  double rho() const;
};

enum class Family { BivariateNormal, BivariateT, NormalLognormal };

const char* to_string(Family family) noexcept;
Family family_from_string(const std::string& name);

/// For NormalLognormal the pair is (X, exp(W)) where (X, W) has scatter `scatter`.
struct DistributionSpec {
  Family family = Family::BivariateNormal;
  ScatterSpec scatter;
  double df = 5.0;  // BivariateT only

  void validate() const;

  static DistributionSpec normal(ScatterSpec s) { return {Family::BivariateNormal, s, 5.0}; }
  static DistributionSpec t(ScatterSpec s, double df) { return {Family::BivariateT, s, df}; }
  static DistributionSpec normal_lognormal(ScatterSpec s) {
    return {Family::NormalLognormal, s, 5.0};
  }
};

using Rng = std::mt19937_64;

/// Independent 64-bit seed for stream `index` under `base_seed` (SplitMix64 mixing),
/// so that replication r always sees the same stream whatever the thread schedule.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

BivariateSample sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed);
BivariateSample sample(const DistributionSpec& dist, std::size_t n, Rng& rng);

/// Population Gini correlations of a family (closed form where available).
double true_gamma_xy(const DistributionSpec& dist);
double true_gamma_yx(const DistributionSpec& dist);
inline double true_delta(const DistributionSpec& dist) {
  return true_gamma_xy(dist) - true_gamma_yx(dist);
}

/// Asymptotic variance of gamma-hat under a bivariate normal with correlation rho.
double v_gamma_normal(double rho);

/// gamma(Y, X) when (X, log Y) is bivariate normal with correlation rho and
/// sd(log Y) = sigma2.
double gini_yx_normal_lognormal(double rho, double sigma2);

/// Asymptotic variance (1 - rho^2)^2 of the Pearson correlation under normality.
double v_p_normal(double rho);

/// Nested Monte Carlo estimate of the asymptotic variance of gamma-hat from the
/// influence-function representation (theta1, theta2, zeta1..3).
double v_gamma_monte_carlo(const DistributionSpec& dist, Orientation orientation,
                           std::size_t n_outer = 10000, std::size_t n_inner = 1000,
                           std::uint64_t seed = 1);

/// Population Pearson asymptotic variance from moment estimates on one large draw.
double v_p_monte_carlo(const DistributionSpec& dist, std::size_t n = 1000000,
                       std::uint64_t seed = 1);

}  // namespace gini
