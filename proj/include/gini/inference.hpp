#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gini/el.hpp"
#include "gini/jackknife.hpp"
#include "gini/kernels.hpp"

namespace gini {

enum class Method { JEL, AJEL, JackknifeNormal, AsymptoticNormal, Pearson };
enum class Target { GammaXY, GammaYX, Delta, Pearson };

const char* to_string(Method method) noexcept;
const char* to_string(Target target) noexcept;
/// Accepts jel, ajel, jackknife (alias vj), asymptotic, pearson.
Method method_from_string(const std::string& name);
/// Accepts gamma_xy, gamma_yx, delta, pearson.
Target target_from_string(const std::string& name);

struct IntervalEstimate {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  Method method = Method::JEL;
  Target target = Target::GammaXY;
  /// Endpoint sits on the parameter-domain boundary rather than at a threshold crossing.
  bool lower_clipped = false;
  bool upper_clipped = false;
  /// The likelihood-ratio curve dipped back under the threshold during the scan; the
  /// outermost crossing was kept.
  bool nonmonotone = false;

  double length() const noexcept { return upper - lower; }
  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

struct TestResult {
  double statistic = 0.0;
  int df = 1;
  double p_value = 1.0;
  std::map<double, bool> reject_at;
  ELStatus status = ELStatus::Converged;
  std::vector<std::string> warnings;
};

/// Parameter domain of a target: [-1, 1] for correlations, [-2, 2] for Delta.
std::array<double, 2> target_domain(Target target);

/// Point estimate of a target.
double point_estimate(const BivariateSample& sample, Target target);

/// -2 log R at `param` for a precomputed scalar basis; +inf on hull violation.
double jel_statistic(const ScalarPseudoBasis& basis, double param, bool adjusted);

/// JEL / adjusted-JEL interval {theta : -2 log R(theta) <= chi2_{1,level}} found by a
/// 0.02-step scan outward from the estimate across the whole domain, then bisection.
IntervalEstimate ci_jel(const BivariateSample& sample, Target target, double level, bool adjusted);
IntervalEstimate ci_jel(const ScalarPseudoBasis& basis, Target target, double level, bool adjusted);

/// point +/- z * sqrt(jackknife variance of the target estimator).
IntervalEstimate ci_normal_jackknife(const BivariateSample& sample, Target target, double level);

/// point +/- z * sqrt(variance / n) with an externally supplied asymptotic variance.
IntervalEstimate ci_normal_asymptotic(const BivariateSample& sample, Target target, double level,
                                      double variance);

enum class PearsonVariance { ClosedFormNormal, Jackknife, Moments, Supplied };

IntervalEstimate ci_pearson(const BivariateSample& sample, double level, PearsonVariance source,
                            std::optional<double> supplied = std::nullopt);

/// JEL test of gamma(X,Y) = gamma(Y,X) with the plug-in nuisance gamma(Y,X).
TestResult test_equality(const BivariateSample& sample, bool adjusted,
                         const std::vector<double>& levels = {0.90, 0.95});

/// Joint JEL test of (delta1, delta2) = (0, 0) for two independent samples; df = 2.
TestResult test_two_sample(const BivariateSample& s1, const BivariateSample& s2, bool adjusted,
                           const std::vector<double>& levels = {0.90, 0.95});

struct GridSpec {
  double x0 = -1.0, x1 = 1.0;
  double y0 = -1.0, y1 = 1.0;
  std::size_t resolution = 101;

  void validate() const;
};

struct RegionNode {
  double delta1 = 0.0;
  double delta2 = 0.0;
  bool member = false;
  double statistic = 0.0;
};

struct RegionGrid {
  std::vector<RegionNode> nodes;  // row-major in delta2, delta1 varying fastest
  std::array<double, 2> estimate{0.0, 0.0};
  double threshold = 0.0;
  double level = 0.9;
  std::size_t member_count() const;
};

/// Membership of every grid node in the joint region {-2 log R <= chi2_{2,level}}.
RegionGrid joint_region_grid(const BivariateSample& s1, const BivariateSample& s2, double level,
                             const GridSpec& grid, bool adjusted = false);

}  // namespace gini
