#include "gini/simstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "gini/el.hpp"
#include "gini/error.hpp"
#include "gini/special.hpp"
#include "gini/ustat.hpp"

namespace gini {

const char* to_string(StudyKind kind) noexcept {
  switch (kind) {
    case StudyKind::Coverage: return "coverage";
    case StudyKind::Equality: return "equality";
    case StudyKind::TwoSample: return "two_sample";
  }
  return "unknown";
}

StudyKind study_kind_from_string(const std::string& name) {
  if (name == "coverage") return StudyKind::Coverage;
  if (name == "equality") return StudyKind::Equality;
  if (name == "two_sample") return StudyKind::TwoSample;
  throw ConfigInvalid("kind", "unknown study kind '" + name + "'");
}

void StudyConfig::validate() const {
  if (replications < 1) throw ConfigInvalid("replications", "must be at least 1");
  if (outer_repeats < 1) throw ConfigInvalid("repeats", "must be at least 1");
  if (levels.empty()) throw ConfigInvalid("levels", "at least one level is required");
  for (double l : levels)
    if (!(l > 0.5 && l < 1.0)) throw ConfigInvalid("levels", "each level must lie in (0.5, 1)");
  if (methods.empty()) throw ConfigInvalid("methods", "at least one method is required");
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0))
    throw ConfigInvalid("max_failure_rate", "must lie in [0, 1]");
  if (variance && !(*variance >= 0.0)) throw ConfigInvalid("variance", "must be non-negative");
  try {
    dist.validate();
  } catch (const Error& e) {
    throw ConfigInvalid("family", e.what());
  }
  if (kind == StudyKind::TwoSample) {
    try {
      dist2.validate();
    } catch (const Error& e) {
      throw ConfigInvalid("family2", e.what());
    }
    if (n1 < 5) throw ConfigInvalid("n1", "must be at least 5");
    if (n2 < 5) throw ConfigInvalid("n2", "must be at least 5");
    for (Method m : methods)
      if (m != Method::JEL && m != Method::AJEL)
        throw ConfigInvalid("methods", "two-sample studies support jel and ajel only");
    return;
  }
  if (n < 5) throw ConfigInvalid("n", "must be at least 5");
  for (Method m : methods) {
    if (kind == StudyKind::Equality && m == Method::Pearson)
      throw ConfigInvalid("methods", "pearson does not estimate delta");
    if (m == Method::Pearson && dist.family == Family::NormalLognormal)
      throw ConfigInvalid("methods", "pearson coverage needs an elliptical family");
  }
  if (kind == StudyKind::Coverage && target == Target::Pearson)
    throw ConfigInvalid("target", "use method pearson for the Pearson correlation");
}

const CellSummary& StudyReport::cell(Method method, double level) const {
  for (const auto& c : cells)
    if (c.method == method && std::abs(c.level - level) < 1e-12) return c;
  throw OutOfRange(std::string("no cell for method ") + to_string(method));
}

std::pair<double, double> mean_sd(const std::vector<double>& values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  double m = 0.0;
  for (double v : values) m += v;
  m /= static_cast<double>(values.size());
  if (values.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

namespace {

// Outcome of one replication for one (method, level) cell.
struct Outcome {
  bool failed = false;
  bool hull = false;
  bool covered = false;
  bool reject = false;
  bool nonmonotone = false;
  bool clipped = false;
  double length = 0.0;
  double pvalue = 0.0;
};

using Replicate = std::function<std::vector<Outcome>(std::uint64_t seed)>;

std::size_t thread_count(const StudyConfig& config) {
  std::size_t t = config.threads;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

// Runs every replication of every repeat on a pool; outcomes land in index order so the
// reduction below never depends on scheduling.
std::vector<std::vector<Outcome>> run_all(const StudyConfig& config, const Replicate& replicate) {
  const std::size_t total = config.replications * config.outer_repeats;
  std::vector<std::vector<Outcome>> results(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g = next.fetch_add(1); g < total; g = next.fetch_add(1))
      results[g] = replicate(derive_seed(config.seed, g));
  };
  const std::size_t nt = std::min(thread_count(config), total);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  }
  return results;
}

StudyReport aggregate(const StudyConfig& config, const std::vector<std::vector<Outcome>>& results,
                      StudyReport report) {
  const std::size_t R = config.replications;
  const std::size_t K = config.outer_repeats;
  report.replications = R;
  report.outer_repeats = K;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t cell_index = 0;
  for (Method m : config.methods) {
    for (double level : config.levels) {
      CellSummary cell;
      cell.method = m;
      cell.level = level;
      std::vector<double> cov, len, pv, pow;
      bool tripped = false;
      for (std::size_t k = 0; k < K; ++k) {
        double c = 0, l = 0, p = 0, w = 0;
        std::size_t valid = 0, failed = 0;
        for (std::size_t r = 0; r < R; ++r) {
          const Outcome& o = results[k * R + r][cell_index];
          if (o.hull) ++cell.hull_violations;
          if (o.nonmonotone) ++cell.nonmonotone;
          if (o.clipped) ++cell.clipped;
          if (o.failed) {
            ++failed;
            continue;
          }
          ++valid;
          c += o.covered;
          l += o.length;
          p += o.pvalue;
          w += o.reject;
        }
        cell.failures += failed;
        if (static_cast<double>(failed) > config.max_failure_rate * static_cast<double>(R) ||
            valid == 0) {
          tripped = true;
          continue;
        }
        const double v = static_cast<double>(valid);
        cov.push_back(c / v);
        len.push_back(l / v);
        pv.push_back(p / v);
        pow.push_back(w / v);
      }
      if (tripped) {
        report.guard_tripped = true;
        cell.coverage_mean = cell.length_mean = cell.pvalue_mean = cell.power_mean = nan;
        cell.coverage_sd = cell.length_sd = cell.pvalue_sd = cell.power_sd = nan;
      } else {
        std::tie(cell.coverage_mean, cell.coverage_sd) = mean_sd(cov);
        std::tie(cell.length_mean, cell.length_sd) = mean_sd(len);
        std::tie(cell.pvalue_mean, cell.pvalue_sd) = mean_sd(pv);
        std::tie(cell.power_mean, cell.power_sd) = mean_sd(pow);
      }
      report.cells.push_back(cell);
      ++cell_index;
    }
  }
  return report;
}

bool is_el(Method m) { return m == Method::JEL || m == Method::AJEL; }

Orientation orientation_of(Target t) {
  return t == Target::GammaYX ? Orientation::YX : Orientation::XY;
}

double population_value(const DistributionSpec& dist, Target target) {
  switch (target) {
    case Target::GammaXY: return true_gamma_xy(dist);
    case Target::GammaYX: return true_gamma_yx(dist);
    case Target::Delta: return true_delta(dist);
    case Target::Pearson: return dist.scatter.rho();
  }
  return 0.0;
}

// Population asymptotic variance of the target estimator for AsymptoticNormal.
double population_variance(const StudyConfig& config, Target target) {
  if (config.variance) return *config.variance;
  if (target == Target::Delta)
    throw ConfigInvalid("variance", "asymptotic intervals for delta need an explicit variance");
  if (config.dist.family == Family::BivariateNormal) return v_gamma_normal(config.dist.scatter.rho());
  return v_gamma_monte_carlo(config.dist, orientation_of(target), 10000, 1000,
                             derive_seed(config.seed, ~std::uint64_t{0}));
}

double population_pearson_variance(const StudyConfig& config) {
  if (config.dist.family == Family::BivariateNormal) return v_p_normal(config.dist.scatter.rho());
  return v_p_monte_carlo(config.dist, 1000000, derive_seed(config.seed, ~std::uint64_t{0} - 1));
}

ScalarPseudoBasis make_basis(const BivariateSample& s, Target target) {
  return target == Target::Delta ? ScalarPseudoBasis::for_delta(s)
                                 : ScalarPseudoBasis::for_gamma(s, orientation_of(target));
}

ELSolution solve_at(const ScalarPseudoBasis& basis, double param, bool adjusted) {
  auto pv = basis.at(param);
  if (adjusted) pv = adjust_pseudo_values(pv, AdjustmentPolicy::standard());
  return solve_lambda_scalar(pv);
}

void record_interval(Outcome& o, const IntervalEstimate& ci, double truth) {
  o.covered = ci.contains(truth);
  o.length = ci.length();
  o.nonmonotone = ci.nonmonotone;
  o.clipped = ci.lower_clipped || ci.upper_clipped;
}

std::size_t cell_count(const StudyConfig& c) { return c.methods.size() * c.levels.size(); }

std::vector<Outcome> all_failed(const StudyConfig& c) {
  std::vector<Outcome> out(cell_count(c));
  for (auto& o : out) o.failed = true;
  return out;
}

}  // namespace

StudyReport run_coverage_study(const StudyConfig& config) {
  config.validate();
  const Target target = config.target;
  const double truth = config.true_value.value_or(population_value(config.dist, target));
  const double rho = config.dist.scatter.rho();

  double av = 0.0, vp = 0.0;
  for (Method m : config.methods) {
    if (m == Method::AsymptoticNormal) av = population_variance(config, target);
    if (m == Method::Pearson) vp = population_pearson_variance(config);
  }

  auto replicate = [&](std::uint64_t seed) {
    std::vector<Outcome> out(cell_count(config));
    try {
      const auto s = sample(config.dist, config.n, seed);
      std::optional<ScalarPseudoBasis> basis;
      std::size_t idx = 0;
      for (Method m : config.methods) {
        bool failed = false, hull = false;
        if (is_el(m)) {
          if (!basis) basis = make_basis(s, target);
          const auto sol = solve_at(*basis, truth, m == Method::AJEL);
          failed = sol.status == ELStatus::NotConverged;
          hull = sol.status == ELStatus::HullViolation;
        }
        for (double level : config.levels) {
          Outcome& o = out[idx++];
          o.failed = failed;
          o.hull = hull;
          if (failed) continue;
          switch (m) {
            case Method::JEL:
            case Method::AJEL:
              record_interval(o, ci_jel(*basis, target, level, m == Method::AJEL), truth);
              break;
            case Method::JackknifeNormal:
              record_interval(o, ci_normal_jackknife(s, target, level), truth);
              break;
            case Method::AsymptoticNormal:
              record_interval(o, ci_normal_asymptotic(s, target, level, av), truth);
              break;
            case Method::Pearson:
              record_interval(o, ci_pearson(s, level, PearsonVariance::Supplied, vp),
                              config.true_value.value_or(rho));
              break;
          }
        }
      }
    } catch (const Error&) {
      return all_failed(config);
    }
    return out;
  };

  StudyReport report;
  report.kind = StudyKind::Coverage;
  report.target = target;
  report.true_value = truth;
  return aggregate(config, run_all(config, replicate), report);
}

StudyReport run_equality_study(const StudyConfig& config) {
  config.validate();
  const double truth = config.true_value.value_or(true_delta(config.dist));
  double av = 0.0;
  for (Method m : config.methods)
    if (m == Method::AsymptoticNormal) av = population_variance(config, Target::Delta);

  auto replicate = [&](std::uint64_t seed) {
    std::vector<Outcome> out(cell_count(config));
    try {
      const auto s = sample(config.dist, config.n, seed);
      const auto basis = ScalarPseudoBasis::for_delta(s);
      const double point = basis.estimate();
      std::size_t idx = 0;
      for (Method m : config.methods) {
        bool failed = false, hull = false;
        double stat0 = 0.0, pvalue = 1.0, zabs = 0.0;
        if (is_el(m)) {
          const bool adj = m == Method::AJEL;
          const auto at_truth = solve_at(basis, truth, adj);
          const auto at_zero = solve_at(basis, 0.0, adj);
          failed = at_truth.status == ELStatus::NotConverged ||
                   at_zero.status == ELStatus::NotConverged;
          hull = at_zero.status == ELStatus::HullViolation;
          stat0 = at_zero.neg2_log_r;
          pvalue = std::isfinite(stat0) ? chisq_survival(stat0, 1.0) : 0.0;
        } else {
          const double v = m == Method::JackknifeNormal
                               ? jackknife_variance_delta(s)
                               : av / static_cast<double>(config.n);
          zabs = v > 0.0 ? std::abs(point) / std::sqrt(v)
                         : (point == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
          pvalue = std::isfinite(zabs) ? 2.0 * (1.0 - normal_cdf(zabs)) : 0.0;
        }
        for (double level : config.levels) {
          Outcome& o = out[idx++];
          o.failed = failed;
          o.hull = hull;
          if (failed) continue;
          o.pvalue = pvalue;
          switch (m) {
            case Method::JEL:
            case Method::AJEL:
              o.reject = stat0 > chisq_quantile(level, 1.0);
              record_interval(o, ci_jel(basis, Target::Delta, level, m == Method::AJEL), truth);
              break;
            case Method::JackknifeNormal:
              o.reject = zabs > normal_quantile(1.0 - (1.0 - level) / 2.0);
              record_interval(o, ci_normal_jackknife(s, Target::Delta, level), truth);
              break;
            case Method::AsymptoticNormal:
              o.reject = zabs > normal_quantile(1.0 - (1.0 - level) / 2.0);
              record_interval(o, ci_normal_asymptotic(s, Target::Delta, level, av), truth);
              break;
            case Method::Pearson: break;
          }
        }
      }
    } catch (const Error&) {
      return all_failed(config);
    }
    return out;
  };

  StudyReport report;
  report.kind = StudyKind::Equality;
  report.target = Target::Delta;
  report.true_value = truth;
  return aggregate(config, run_all(config, replicate), report);
}

StudyReport run_two_sample_study(const StudyConfig& config) {
  config.validate();
  const std::array<double, 2> truth{true_gamma_xy(config.dist) - true_gamma_xy(config.dist2),
                                    true_gamma_yx(config.dist) - true_gamma_yx(config.dist2)};

  auto replicate = [&](std::uint64_t seed) {
    std::vector<Outcome> out(cell_count(config));
    try {
      Rng rng(seed);
      const auto s1 = sample(config.dist, config.n1, rng);
      const auto s2 = sample(config.dist2, config.n2, rng);
      const TwoSamplePseudoBasis basis(s1, s2);
      std::size_t idx = 0;
      for (Method m : config.methods) {
        const AdjustmentPolicy policy =
            m == Method::AJEL ? AdjustmentPolicy::standard() : AdjustmentPolicy::none();
        const auto at_zero = solve_lambda_vector(adjust_pseudo_values(basis.at(0.0, 0.0), policy));
        const auto at_truth =
            solve_lambda_vector(adjust_pseudo_values(basis.at(truth[0], truth[1]), policy));
        const bool failed = at_zero.status == ELStatus::NotConverged ||
                            (at_zero.status == ELStatus::SingularCovariance &&
                             !std::isfinite(at_zero.neg2_log_r)) ||
                            at_truth.status == ELStatus::NotConverged;
        const double stat0 = at_zero.neg2_log_r;
        const double pvalue = std::isfinite(stat0) ? chisq_survival(stat0, 2.0) : 0.0;
        for (double level : config.levels) {
          Outcome& o = out[idx++];
          o.failed = failed;
          o.hull = at_zero.status == ELStatus::HullViolation;
          if (failed) continue;
          const double q = chisq_quantile(level, 2.0);
          o.pvalue = pvalue;
          o.reject = stat0 > q;
          o.covered = at_truth.neg2_log_r <= q;
        }
      }
    } catch (const Error&) {
      return all_failed(config);
    }
    return out;
  };

  StudyReport report;
  report.kind = StudyKind::TwoSample;
  report.target = Target::Delta;
  report.true_pair = truth;
  return aggregate(config, run_all(config, replicate), report);
}

StudyReport run_study(const StudyConfig& config) {
  switch (config.kind) {
    case StudyKind::Coverage: return run_coverage_study(config);
    case StudyKind::Equality: return run_equality_study(config);
    case StudyKind::TwoSample: return run_two_sample_study(config);
  }
  throw ConfigInvalid("kind", "unknown study kind");
}

}  // namespace gini
