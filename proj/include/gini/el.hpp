#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gini/jackknife.hpp"

namespace gini {

enum class ELStatus {
  Converged,
  /// Every pseudo-value is zero: the constraint holds under uniform weights, -2 log R = 0.
  ZeroPseudoValues,
  /// Zero is not interior to the convex hull; -2 log R is reported as +infinity.
  HullViolation,
  SingularCovariance,
  NotConverged,
};

const char* to_string(ELStatus status) noexcept;

/// Solution of the scalar empirical-likelihood dual.
struct ELSolution {
  double lambda = 0.0;
  double neg2_log_r = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  ELStatus status = ELStatus::NotConverged;

  bool ok() const noexcept {
    return status == ELStatus::Converged || status == ELStatus::ZeroPseudoValues;
  }
};

/// Solution of the two-dimensional empirical-likelihood dual.
struct ELSolution2 {
  std::array<double, 2> lambda{0.0, 0.0};
  double neg2_log_r = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  ELStatus status = ELStatus::NotConverged;

  bool ok() const noexcept {
    return status == ELStatus::Converged || status == ELStatus::ZeroPseudoValues;
  }
};

/// Adjusted empirical likelihood: one extra pseudo-value -(a_n / n) sum V_i.
struct AdjustmentPolicy {
  bool enabled = false;
  /// Overrides the default rule a_n = max(1, log(n) / 2) when set.
  std::optional<double> fixed_a;

  double a_n(std::size_t n) const;

  static AdjustmentPolicy none() { return {}; }
  static AdjustmentPolicy standard() { return {true, std::nullopt}; }
};

/// Root of n^{-1} sum V_i / (1 + lambda V_i) = 0 on the feasible interval
/// (-1/max V, -1/min V). Bracketed Newton; the iterate never leaves the interval.
/// A hull violation is returned as status HullViolation with neg2_log_r = +inf.
ELSolution solve_lambda_scalar(std::span<const double> values);
inline ELSolution solve_lambda_scalar(const PseudoValues& pseudo) {
  return solve_lambda_scalar(pseudo.values);
}

/// -2 log R = 2 sum log(1 + lambda V_i); +inf when zero is outside the hull.
double neg2_log_r_scalar(std::span<const double> values);
inline double neg2_log_r_scalar(const PseudoValues& pseudo) {
  return neg2_log_r_scalar(pseudo.values);
}

/// Damped Newton on the convex dual -sum log(1 + lambda'V_i) with step halving to
/// stay feasible; falls back to gradient descent before declaring non-convergence.
ELSolution2 solve_lambda_vector(std::span<const std::array<double, 2>> rows);
inline ELSolution2 solve_lambda_vector(const PseudoValues2& pseudo) {
  return solve_lambda_vector(pseudo.rows);
}

double neg2_log_r_vector(std::span<const std::array<double, 2>> rows);
inline double neg2_log_r_vector(const PseudoValues2& pseudo) {
  return neg2_log_r_vector(pseudo.rows);
}

/// Implied weights p_i = 1 / (n (1 + lambda V_i)).
std::vector<double> el_weights(std::span<const double> values, double lambda);
std::vector<double> el_weights(std::span<const std::array<double, 2>> rows,
                               const std::array<double, 2>& lambda);

/// Appends the balancing pseudo-value when the policy is enabled; otherwise a copy.
PseudoValues adjust_pseudo_values(const PseudoValues& pseudo, const AdjustmentPolicy& policy);
PseudoValues2 adjust_pseudo_values(const PseudoValues2& pseudo, const AdjustmentPolicy& policy);

/// Whether zero lies strictly inside the convex hull of the rows.
bool origin_in_hull_interior(std::span<const std::array<double, 2>> rows);

}  // namespace gini
