#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "gini/kernels.hpp"
#include "gini/ustat.hpp"

namespace gini {

/// Scalar jackknife pseudo-values V_i at a parameter value. mean(values) equals the
/// estimating functional of the full sample at `param`.
struct PseudoValues {
  std::vector<double> values;
  double param = 0.0;
  std::size_t n = 0;
};

/// Two-sample pseudo-values: n1 + n2 rows of 2-vectors, first sample's rows first.
struct PseudoValues2 {
  std::vector<std::array<double, 2>> rows;
  std::array<double, 2> param{0.0, 0.0};
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Pseudo-values of U1 and U2 for one orientation. Since the estimating functional is
/// affine in its parameter, V_i(theta) = (theta + offset) * v2[i] - v1[i], so inverting a
/// confidence interval costs O(n) per candidate after one O(n log n) setup.
class ScalarPseudoBasis {
 public:
  /// Basis for gamma(X,Y) (or gamma(Y,X) with Orientation::YX); offset 0.
  static ScalarPseudoBasis for_gamma(const BivariateSample& sample, Orientation orientation);
  /// Basis for Delta with the plug-in gamma2 = gamma-hat(Y,X) computed once from the
  /// full sample and held fixed in every leave-one-out term.
  static ScalarPseudoBasis for_delta(const BivariateSample& sample);

  PseudoValues at(double param) const;

  const GiniComponents& components() const noexcept { return components_; }
  double offset() const noexcept { return offset_; }
  /// Parameter value at which the pseudo-value mean vanishes.
  double estimate() const noexcept { return estimate_; }
  const std::vector<double>& v1() const noexcept { return v1_; }
  const std::vector<double>& v2() const noexcept { return v2_; }
  std::size_t size() const noexcept { return v1_.size(); }

 private:
  ScalarPseudoBasis(const BivariateSample& sample, Orientation orientation, double offset);

  GiniComponents components_;
  double offset_ = 0.0;
  double estimate_ = 0.0;
  std::vector<double> v1_;
  std::vector<double> v2_;
};

/// Precomputed leave-one-out components of two independent samples.
class TwoSamplePseudoBasis {
 public:
  TwoSamplePseudoBasis(const BivariateSample& s1, const BivariateSample& s2);

  PseudoValues2 at(double delta1, double delta2) const;
  /// Block pseudo-values V_{i,0} (first sample) and V_{0,j} (second sample).
  std::pair<std::vector<std::array<double, 2>>, std::vector<std::array<double, 2>>> blocks(
      double delta1, double delta2) const;
  /// Full-sample functional U_{n1,n2}(delta1, delta2).
  std::array<double, 2> functional(double delta1, double delta2) const;
  /// (gamma1^(1) - gamma1^(2), gamma2^(1) - gamma2^(2)).
  std::array<double, 2> estimate() const;

  std::size_t n1() const noexcept { return c1_.n; }
  std::size_t n2() const noexcept { return c2_.n; }

 private:
  GiniComponents c1_, c2_, c1yx_, c2yx_;
  std::vector<GiniComponents> loo1_, loo2_, loo1yx_, loo2yx_;
};

PseudoValues pseudo_values_gamma(const BivariateSample& sample, double gamma,
                                 Orientation orientation = Orientation::XY);
PseudoValues pseudo_values_delta(const BivariateSample& sample, double delta);
PseudoValues2 pseudo_values_two_sample(const BivariateSample& s1, const BivariateSample& s2,
                                       double delta1, double delta2);

using Estimator = std::function<double(const BivariateSample&)>;

/// Jackknife variance ((n-1)/n) sum (T_(-i) - mean)^2 by explicit leave-one-out
/// re-evaluation of any estimator.
double jackknife_variance(const Estimator& estimator, const BivariateSample& sample);

/// Same quantity for gamma-hat, from leave-one-out components in O(n log n).
double jackknife_variance_gamma(const BivariateSample& sample,
                                Orientation orientation = Orientation::XY);
/// Jackknife variance of Delta-hat = gamma-hat(X,Y) - gamma-hat(Y,X), jackknifed directly.
double jackknife_variance_delta(const BivariateSample& sample);
/// Jackknife variance of the sample Pearson correlation.
double jackknife_variance_pearson(const BivariateSample& sample);

}  // namespace gini
