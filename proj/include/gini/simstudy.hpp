#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gini/distributions.hpp"
#include "gini/inference.hpp"

namespace gini {

enum class StudyKind { Coverage, Equality, TwoSample };

const char* to_string(StudyKind kind) noexcept;
StudyKind study_kind_from_string(const std::string& name);

struct StudyConfig {
  StudyKind kind = StudyKind::Coverage;
  DistributionSpec dist;
  DistributionSpec dist2;  // second population, TwoSample only
  std::size_t n = 200;
  std::size_t n1 = 150;
  std::size_t n2 = 200;
  Target target = Target::GammaXY;  // Coverage only; Equality always studies delta
  std::vector<Method> methods{Method::JEL};
  std::vector<double> levels{0.90, 0.95};
  std::size_t replications = 500;
  std::size_t outer_repeats = 5;
  std::uint64_t seed = 20240101;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  /// Overrides the population value of the target derived from the family.
  std::optional<double> true_value;
  /// Asymptotic variance for AsymptoticNormal; derived from the family when absent.
  std::optional<double> variance;
  /// Largest tolerated fraction of failed replications per repeat.
  double max_failure_rate = 0.01;

  /// Throws ConfigInvalid naming the first offending key.
  void validate() const;
};

/// Aggregates of one (method, level) cell; means and sds are taken across outer repeats.
struct CellSummary {
  Method method = Method::JEL;
  double level = 0.95;
  double coverage_mean = 0.0, coverage_sd = 0.0;
  double length_mean = 0.0, length_sd = 0.0;
  double pvalue_mean = 0.0, pvalue_sd = 0.0;
  double power_mean = 0.0, power_sd = 0.0;
  std::size_t failures = 0;
  std::size_t hull_violations = 0;
  std::size_t nonmonotone = 0;
  std::size_t clipped = 0;
};

struct StudyReport {
  StudyKind kind = StudyKind::Coverage;
  Target target = Target::GammaXY;
  double true_value = 0.0;
  std::array<double, 2> true_pair{0.0, 0.0};  // TwoSample: (delta1, delta2)
  std::size_t replications = 0;
  std::size_t outer_repeats = 0;
  std::vector<CellSummary> cells;
  /// Set when some repeat exceeded max_failure_rate; aggregates are then NaN.
  bool guard_tripped = false;

  const CellSummary& cell(Method method, double level) const;
};

/// Per replication: draw, build every method's interval, record containment of the true
/// value and the length.
StudyReport run_coverage_study(const StudyConfig& config);

/// Per replication on the delta target: JEL/AJEL test p-value at 0, rejection rate at 0
/// (reported as power), and coverage of the true delta by each method's interval.
StudyReport run_equality_study(const StudyConfig& config);

/// Per replication: two independent samples, joint test at (0, 0), mean p-value and
/// rejection rate per method.
StudyReport run_two_sample_study(const StudyConfig& config);

/// Dispatches on config.kind.
StudyReport run_study(const StudyConfig& config);

/// Sample mean and (K-1)-denominator sd; sd = 0 for fewer than two values.
std::pair<double, double> mean_sd(const std::vector<double>& values);

}  // namespace gini
