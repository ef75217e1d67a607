#include "gini/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <limits>
#include <sstream>

#include "gini/distributions.hpp"
#include "gini/error.hpp"
#include "gini/special.hpp"
#include "gini/ustat.hpp"

namespace gini {

namespace {

constexpr double kScanStep = 0.02;
constexpr double kBisectTol = 1e-12;
constexpr double kStatTol = 1e-9;
constexpr std::size_t kMinSample = 5;

void check_level(double level) {
  if (!(level > 0.5 && level < 1.0)) throw OutOfRange("level must lie in (0.5, 1)");
}

void check_size(const BivariateSample& sample) {
  if (sample.size() < kMinSample) throw SampleTooSmall(sample.size(), kMinSample);
}

double z_quantile(double level) { return normal_quantile(1.0 - (1.0 - level) / 2.0); }

ScalarPseudoBasis basis_for(const BivariateSample& sample, Target target) {
  switch (target) {
    case Target::GammaXY: return ScalarPseudoBasis::for_gamma(sample, Orientation::XY);
    case Target::GammaYX: return ScalarPseudoBasis::for_gamma(sample, Orientation::YX);
    case Target::Delta: return ScalarPseudoBasis::for_delta(sample);
    case Target::Pearson: break;
  }
  throw OutOfRange("JEL intervals are defined for gamma_xy, gamma_yx and delta only");
}

struct Side {
  double endpoint;
  bool clipped;
  bool nonmonotone;
};

// Scans from `start` toward `bound` and returns the outermost threshold crossing.
template <class Stat>
Side search_side(const Stat& stat, double start, double bound, double threshold) {
  const double dir = bound >= start ? 1.0 : -1.0;
  const double span = std::abs(bound - start);
  const auto steps = static_cast<std::size_t>(std::ceil(span / kScanStep - 1e-12));

  double inside = start;  // outermost grid point with stat <= threshold
  bool inside_is_bound = steps == 0;
  bool seen_outside = false;
  bool nonmonotone = false;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double theta = k == steps ? bound : start + dir * kScanStep * static_cast<double>(k);
    if (stat(theta) <= threshold) {
      if (seen_outside) nonmonotone = true;
      inside = theta;
      inside_is_bound = k == steps;
    } else {
      seen_outside = true;
    }
  }
  if (inside_is_bound) return {bound, true, nonmonotone};

  // The grid point just past `inside` is above the threshold.
  double outside = inside + dir * kScanStep;
  if (dir > 0 ? outside > bound : outside < bound) outside = bound;

  double a = inside, b = outside;
  for (int it = 0; it < 200 && std::abs(b - a) > kBisectTol; ++it) {
    const double mid = 0.5 * (a + b);
    const double s = stat(mid);
    if (std::isfinite(s) && std::abs(s - threshold) < kStatTol) {
      a = b = mid;
      break;
    }
    (s <= threshold ? a : b) = mid;
  }
  return {a, false, nonmonotone};
}

}  // namespace

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::JEL: return "JEL";
    case Method::AJEL: return "AJEL";
    case Method::JackknifeNormal: return "JackknifeNormal";
    case Method::AsymptoticNormal: return "AsymptoticNormal";
    case Method::Pearson: return "Pearson";
  }
  return "unknown";
}

const char* to_string(Target target) noexcept {
  switch (target) {
    case Target::GammaXY: return "gamma_xy";
    case Target::GammaYX: return "gamma_yx";
    case Target::Delta: return "delta";
    case Target::Pearson: return "pearson";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "jel") return Method::JEL;
  if (s == "ajel") return Method::AJEL;
  if (s == "jackknife" || s == "vj" || s == "jackknifenormal") return Method::JackknifeNormal;
  if (s == "asymptotic" || s == "av" || s == "asymptoticnormal") return Method::AsymptoticNormal;
  if (s == "pearson") return Method::Pearson;
  throw ConfigInvalid("method", "unknown method '" + name + "'");
}

Target target_from_string(const std::string& name) {
  if (name == "gamma_xy" || name == "gamma1") return Target::GammaXY;
  if (name == "gamma_yx" || name == "gamma2") return Target::GammaYX;
  if (name == "delta") return Target::Delta;
  if (name == "pearson" || name == "rho") return Target::Pearson;
  throw ConfigInvalid("target", "unknown target '" + name + "'");
}

std::array<double, 2> target_domain(Target target) {
  if (target == Target::Delta) return {-2.0, 2.0};
  return {-1.0, 1.0};
}

double point_estimate(const BivariateSample& sample, Target target) {
  switch (target) {
    case Target::GammaXY: return gini_gamma(sample, Orientation::XY);
    case Target::GammaYX: return gini_gamma(sample, Orientation::YX);
    case Target::Delta:
      return gini_gamma(sample, Orientation::XY) - gini_gamma(sample, Orientation::YX);
    case Target::Pearson: return pearson_r(sample);
  }
  return 0.0;
}

double jel_statistic(const ScalarPseudoBasis& basis, double param, bool adjusted) {
  const auto pv = basis.at(param);
  if (!adjusted) return neg2_log_r_scalar(pv);
  return neg2_log_r_scalar(adjust_pseudo_values(pv, AdjustmentPolicy::standard()));
}

IntervalEstimate ci_jel(const ScalarPseudoBasis& basis, Target target, double level,
                        bool adjusted) {
  check_level(level);
  if (basis.size() < kMinSample) throw SampleTooSmall(basis.size(), kMinSample);
  if (target == Target::Pearson)
    throw OutOfRange("JEL intervals are defined for gamma_xy, gamma_yx and delta only");
  const auto dom = target_domain(target);
  const double threshold = chisq_quantile(level, 1.0);
  const double point = std::clamp(basis.estimate(), dom[0], dom[1]);
  auto stat = [&](double theta) { return jel_statistic(basis, theta, adjusted); };

  const Side lo = search_side(stat, point, dom[0], threshold);
  const Side hi = search_side(stat, point, dom[1], threshold);

  IntervalEstimate out;
  out.point = point;
  out.lower = lo.endpoint;
  out.upper = hi.endpoint;
  out.level = level;
  out.method = adjusted ? Method::AJEL : Method::JEL;
  out.target = target;
  out.lower_clipped = lo.clipped;
  out.upper_clipped = hi.clipped;
  out.nonmonotone = lo.nonmonotone || hi.nonmonotone;
  return out;
}

IntervalEstimate ci_jel(const BivariateSample& sample, Target target, double level,
                        bool adjusted) {
  check_size(sample);
  check_level(level);
  return ci_jel(basis_for(sample, target), target, level, adjusted);
}

IntervalEstimate ci_normal_jackknife(const BivariateSample& sample, Target target, double level) {
  check_size(sample);
  check_level(level);
  double v = 0.0;
  switch (target) {
    case Target::GammaXY: v = jackknife_variance_gamma(sample, Orientation::XY); break;
    case Target::GammaYX: v = jackknife_variance_gamma(sample, Orientation::YX); break;
    case Target::Delta: v = jackknife_variance_delta(sample); break;
    case Target::Pearson: v = jackknife_variance_pearson(sample); break;
  }
  const double point = point_estimate(sample, target);
  const double half = z_quantile(level) * std::sqrt(std::max(0.0, v));
  IntervalEstimate out;
  out.point = point;
  out.lower = point - half;
  out.upper = point + half;
  out.level = level;
  out.method = Method::JackknifeNormal;
  out.target = target;
  return out;
}

IntervalEstimate ci_normal_asymptotic(const BivariateSample& sample, Target target, double level,
                                      double variance) {
  if (!(variance >= 0.0)) throw NegativeVariance("asymptotic variance must be non-negative");
  check_level(level);
  const double point = point_estimate(sample, target);
  const double half = z_quantile(level) * std::sqrt(variance / static_cast<double>(sample.size()));
  IntervalEstimate out;
  out.point = point;
  out.lower = point - half;
  out.upper = point + half;
  out.level = level;
  out.method = Method::AsymptoticNormal;
  out.target = target;
  return out;
}

IntervalEstimate ci_pearson(const BivariateSample& sample, double level, PearsonVariance source,
                            std::optional<double> supplied) {
  check_size(sample);
  check_level(level);
  const double r = pearson_r(sample);
  const double n = static_cast<double>(sample.size());
  double half = 0.0;
  const double z = z_quantile(level);
  switch (source) {
    case PearsonVariance::ClosedFormNormal: half = z * std::sqrt(v_p_normal(r) / n); break;
    case PearsonVariance::Jackknife: half = z * std::sqrt(jackknife_variance_pearson(sample)); break;
    case PearsonVariance::Moments:
      half = z * std::sqrt(std::max(0.0, pearson_variance_moments(sample)) / n);
      break;
    case PearsonVariance::Supplied:
      if (!supplied) throw ConfigInvalid("variance", "supplied variance source needs a value");
      if (!(*supplied >= 0.0)) throw NegativeVariance("supplied Pearson variance is negative");
      half = z * std::sqrt(*supplied / n);
      break;
  }
  IntervalEstimate out;
  out.point = r;
  out.lower = r - half;
  out.upper = r + half;
  out.level = level;
  out.method = Method::Pearson;
  out.target = Target::Pearson;
  return out;
}

namespace {

TestResult finish_test(double statistic, int df, ELStatus status,
                       const std::vector<double>& levels) {
  TestResult out;
  out.statistic = statistic;
  out.df = df;
  out.status = status;
  out.p_value = std::isfinite(statistic) ? std::clamp(chisq_survival(statistic, df), 0.0, 1.0) : 0.0;
  for (double level : levels) {
    check_level(level);
    out.reject_at[level] = statistic > chisq_quantile(level, df);
  }
  if (status == ELStatus::HullViolation)
    out.warnings.push_back("zero lies outside the convex hull of the pseudo-values");
  return out;
}

}  // namespace

TestResult test_equality(const BivariateSample& sample, bool adjusted,
                         const std::vector<double>& levels) {
  check_size(sample);
  const auto basis = ScalarPseudoBasis::for_delta(sample);
  auto pv = basis.at(0.0);
  if (adjusted) pv = adjust_pseudo_values(pv, AdjustmentPolicy::standard());
  const auto sol = solve_lambda_scalar(pv);
  return finish_test(sol.neg2_log_r, 1, sol.status, levels);
}

TestResult test_two_sample(const BivariateSample& s1, const BivariateSample& s2, bool adjusted,
                           const std::vector<double>& levels) {
  check_size(s1);
  check_size(s2);
  const TwoSamplePseudoBasis basis(s1, s2);
  auto pv = basis.at(0.0, 0.0);
  if (adjusted) pv = adjust_pseudo_values(pv, AdjustmentPolicy::standard());
  const auto sol = solve_lambda_vector(pv);
  if (sol.status == ELStatus::SingularCovariance && !std::isfinite(sol.neg2_log_r))
    throw SingularCovariance("two-sample pseudo-value covariance is singular");
  auto out = finish_test(sol.neg2_log_r, 2, sol.status, levels);
  const double ratio = static_cast<double>(s1.size()) / static_cast<double>(s2.size());
  if (ratio < 0.1 || ratio > 10.0) {
    std::ostringstream os;
    os << "sample size ratio n1/n2 = " << ratio << " is outside [0.1, 10]";
    out.warnings.push_back(os.str());
  }
  return out;
}

void GridSpec::validate() const {
  for (double v : {x0, x1, y0, y1})
    if (!(v >= -2.0 && v <= 2.0)) throw OutOfRange("grid rectangle must lie inside [-2, 2]^2");
  if (!(x0 < x1) || !(y0 < y1)) throw OutOfRange("grid rectangle must have x0 < x1 and y0 < y1");
  if (resolution < 2) throw OutOfRange("grid resolution must be at least 2");
}

std::size_t RegionGrid::member_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const RegionNode& v) { return v.member; }));
}

RegionGrid joint_region_grid(const BivariateSample& s1, const BivariateSample& s2, double level,
                             const GridSpec& grid, bool adjusted) {
  check_size(s1);
  check_size(s2);
  check_level(level);
  grid.validate();
  const TwoSamplePseudoBasis basis(s1, s2);
  RegionGrid out;
  out.level = level;
  out.threshold = chisq_quantile(level, 2.0);
  out.estimate = basis.estimate();
  const std::size_t r = grid.resolution;
  const double dx = (grid.x1 - grid.x0) / static_cast<double>(r - 1);
  const double dy = (grid.y1 - grid.y0) / static_cast<double>(r - 1);
  out.nodes.reserve(r * r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      RegionNode node;
      node.delta1 = grid.x0 + dx * static_cast<double>(i);
      node.delta2 = grid.y0 + dy * static_cast<double>(j);
      auto pv = basis.at(node.delta1, node.delta2);
      if (adjusted) pv = adjust_pseudo_values(pv, AdjustmentPolicy::standard());
      const auto sol = solve_lambda_vector(pv);
      node.statistic = sol.status == ELStatus::NotConverged ? std::numeric_limits<double>::infinity()
                                                             : sol.neg2_log_r;
      node.member = node.statistic <= out.threshold;
      out.nodes.push_back(node);
    }
  }
  return out;
}

}  // namespace gini
