#include "gini/el.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gini {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kScalarMaxIter = 200;
constexpr std::size_t kNewtonMaxIter = 100;
constexpr std::size_t kGradientFallbackIter = 50;
constexpr double kScalarTol = 1e-10;
constexpr double kGradTol = 1e-10;
constexpr double kGradPolish = 1e-14;

struct Dual2 {
  double value = 0.0;  // -sum log(1 + lambda'w)
  std::array<double, 2> grad{0.0, 0.0};
  std::array<double, 3> hess{0.0, 0.0, 0.0};  // (xx, xy, yy)
  bool feasible = true;
};

Dual2 evaluate_dual(std::span<const std::array<double, 2>> w, const std::array<double, 2>& lam,
                    bool with_derivatives) {
  Dual2 d;
  for (const auto& r : w) {
    const double t = 1.0 + lam[0] * r[0] + lam[1] * r[1];
    if (!(t > 0.0)) {
      d.feasible = false;
      return d;
    }
    d.value -= std::log(t);
    if (with_derivatives) {
      const double inv = 1.0 / t;
      d.grad[0] -= r[0] * inv;
      d.grad[1] -= r[1] * inv;
      const double inv2 = inv * inv;
      d.hess[0] += r[0] * r[0] * inv2;
      d.hess[1] += r[0] * r[1] * inv2;
      d.hess[2] += r[1] * r[1] * inv2;
    }
  }
  return d;
}

}  // namespace

const char* to_string(ELStatus status) noexcept {
  switch (status) {
    case ELStatus::Converged: return "converged";
    case ELStatus::ZeroPseudoValues: return "zero_pseudo_values";
    case ELStatus::HullViolation: return "hull_violation";
    case ELStatus::SingularCovariance: return "singular_covariance";
    case ELStatus::NotConverged: return "not_converged";
  }
  return "unknown";
}

double AdjustmentPolicy::a_n(std::size_t n) const {
  if (fixed_a) return *fixed_a;
  return std::max(1.0, std::log(static_cast<double>(n)) / 2.0);
}

ELSolution solve_lambda_scalar(std::span<const double> values) {
  ELSolution sol;
  const std::size_t n = values.size();
  double scale = 0.0, vmin = kInf, vmax = -kInf;
  for (double v : values) {
    scale = std::max(scale, std::abs(v));
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (n == 0 || scale == 0.0) {
    sol.status = ELStatus::ZeroPseudoValues;
    sol.converged = true;
    return sol;
  }
  if (!(vmin < 0.0 && vmax > 0.0)) {
    sol.status = ELStatus::HullViolation;
    sol.neg2_log_r = kInf;
    return sol;
  }

  // Work with w = v / scale so that w lies in [-1, 1]; lambda_v = lambda_w / scale.
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = values[i] / scale;
  double lo = -scale / vmax;  // -1 / max w
  double hi = -scale / vmin;  // -1 / min w
  const double dn = static_cast<double>(n);

  auto eval = [&](double lam, double& f, double& df) {
    f = 0.0;
    df = 0.0;
    for (double wi : w) {
      const double inv = 1.0 / (1.0 + lam * wi);
      f += wi * inv;
      df -= wi * wi * inv * inv;
    }
    f /= dn;
    df /= dn;
  };

  double lam = 0.0, f = 0.0, df = 0.0;
  std::size_t it = 0;
  for (; it < kScalarMaxIter; ++it) {
    eval(lam, f, df);
    if (f > 0.0)
      lo = lam;
    else
      hi = lam;
    if (std::abs(f) < kScalarTol * 1e-2 || hi - lo < 1e-14) break;
    double next = lam - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - lam) < 1e-16 && std::abs(f) < kScalarTol) break;
    lam = next;
  }
  eval(lam, f, df);
  sol.iterations = it + 1;
  sol.converged = std::abs(f) < kScalarTol;
  sol.status = sol.converged ? ELStatus::Converged : ELStatus::NotConverged;
  sol.lambda = lam / scale;
  double s = 0.0;
  for (double wi : w) s += std::log1p(lam * wi);
  sol.neg2_log_r = std::max(0.0, 2.0 * s);
  return sol;
}

double neg2_log_r_scalar(std::span<const double> values) {
  const auto sol = solve_lambda_scalar(values);
  if (sol.status == ELStatus::HullViolation) return kInf;
  return sol.neg2_log_r;
}

bool origin_in_hull_interior(std::span<const std::array<double, 2>> rows) {
  std::vector<double> angles;
  angles.reserve(rows.size());
  for (const auto& r : rows)
    if (r[0] != 0.0 || r[1] != 0.0) angles.push_back(std::atan2(r[1], r[0]));
  if (angles.size() < 3) return false;
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t k = 1; k < angles.size(); ++k)
    max_gap = std::max(max_gap, angles[k] - angles[k - 1]);
  return max_gap < std::numbers::pi * (1.0 - 1e-12);
}

ELSolution2 solve_lambda_vector(std::span<const std::array<double, 2>> rows) {
  ELSolution2 sol;
  const std::size_t n = rows.size();
  std::array<double, 2> scale{0.0, 0.0};
  for (const auto& r : rows) {
    scale[0] = std::max(scale[0], std::abs(r[0]));
    scale[1] = std::max(scale[1], std::abs(r[1]));
  }
  if (n == 0 || (scale[0] == 0.0 && scale[1] == 0.0)) {
    sol.status = ELStatus::ZeroPseudoValues;
    sol.converged = true;
    return sol;
  }
  if (scale[0] == 0.0 || scale[1] == 0.0 || n < 3) {
    sol.status = ELStatus::SingularCovariance;
    sol.neg2_log_r = kInf;
    return sol;
  }

  std::vector<std::array<double, 2>> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = {rows[i][0] / scale[0], rows[i][1] / scale[1]};

  // Rank check on the centered covariance of the (scaled) rows.
  {
    double m0 = 0.0, m1 = 0.0;
    for (const auto& r : w) {
      m0 += r[0];
      m1 += r[1];
    }
    m0 /= static_cast<double>(n);
    m1 /= static_cast<double>(n);
    double c00 = 0.0, c01 = 0.0, c11 = 0.0;
    for (const auto& r : w) {
      c00 += (r[0] - m0) * (r[0] - m0);
      c01 += (r[0] - m0) * (r[1] - m1);
      c11 += (r[1] - m1) * (r[1] - m1);
    }
    const double tr = c00 + c11;
    if (!(c00 * c11 - c01 * c01 > 1e-12 * tr * tr)) {
      // lambda is not identified, but a zero row mean is met by uniform weights (R = 1).
      sol.status = ELStatus::SingularCovariance;
      sol.neg2_log_r = std::hypot(m0, m1) <= 1e-12 ? 0.0 : kInf;
      return sol;
    }
  }
  if (!origin_in_hull_interior(w)) {
    sol.status = ELStatus::HullViolation;
    sol.neg2_log_r = kInf;
    return sol;
  }

  const double dn = static_cast<double>(n);
  std::array<double, 2> lam{0.0, 0.0};
  Dual2 cur = evaluate_dual(w, lam, true);
  std::size_t it = 0;
  bool done = false;
  for (; it < kNewtonMaxIter + kGradientFallbackIter; ++it) {
    const double gnorm = std::hypot(cur.grad[0], cur.grad[1]) / dn;
    if (gnorm < kGradPolish) break;
    std::array<double, 2> dir;
    if (it < kNewtonMaxIter) {
      const double det = cur.hess[0] * cur.hess[2] - cur.hess[1] * cur.hess[1];
      dir = {-(cur.hess[2] * cur.grad[0] - cur.hess[1] * cur.grad[1]) / det,
             -(-cur.hess[1] * cur.grad[0] + cur.hess[0] * cur.grad[1]) / det};
    } else {
      dir = {-cur.grad[0] / dn, -cur.grad[1] / dn};
    }
    double t = 1.0;
    Dual2 trial;
    bool accepted = false;
    for (int halvings = 0; halvings < 80; ++halvings, t *= 0.5) {
      const std::array<double, 2> cand{lam[0] + t * dir[0], lam[1] + t * dir[1]};
      trial = evaluate_dual(w, cand, true);
      if (trial.feasible && trial.value <= cur.value + 1e-14 * std::abs(cur.value)) {
        lam = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    cur = trial;
  }
  done = std::hypot(cur.grad[0], cur.grad[1]) / dn < kGradTol;
  sol.iterations = it;
  sol.converged = done;
  sol.status = done ? ELStatus::Converged : ELStatus::NotConverged;
  sol.lambda = {lam[0] / scale[0], lam[1] / scale[1]};
  sol.neg2_log_r = std::max(0.0, -2.0 * cur.value);
  return sol;
}

double neg2_log_r_vector(std::span<const std::array<double, 2>> rows) {
  const auto sol = solve_lambda_vector(rows);
  if (sol.status == ELStatus::HullViolation) return kInf;
  return sol.neg2_log_r;
}

std::vector<double> el_weights(std::span<const double> values, double lambda) {
  std::vector<double> p(values.size());
  const double dn = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) p[i] = 1.0 / (dn * (1.0 + lambda * values[i]));
  return p;
}

std::vector<double> el_weights(std::span<const std::array<double, 2>> rows,
                               const std::array<double, 2>& lambda) {
  std::vector<double> p(rows.size());
  const double dn = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    p[i] = 1.0 / (dn * (1.0 + lambda[0] * rows[i][0] + lambda[1] * rows[i][1]));
  return p;
}

PseudoValues adjust_pseudo_values(const PseudoValues& pseudo, const AdjustmentPolicy& policy) {
  PseudoValues out = pseudo;
  if (!policy.enabled || pseudo.values.empty()) return out;
  const std::size_t n = pseudo.values.size();
  double sum = 0.0;
  for (double v : pseudo.values) sum += v;
  out.values.push_back(-policy.a_n(n) / static_cast<double>(n) * sum);
  return out;
}

PseudoValues2 adjust_pseudo_values(const PseudoValues2& pseudo, const AdjustmentPolicy& policy) {
  PseudoValues2 out = pseudo;
  if (!policy.enabled || pseudo.rows.empty()) return out;
  const std::size_t n = pseudo.rows.size();
  std::array<double, 2> sum{0.0, 0.0};
  for (const auto& r : pseudo.rows) {
    sum[0] += r[0];
    sum[1] += r[1];
  }
  const double k = -policy.a_n(n) / static_cast<double>(n);
  out.rows.push_back({k * sum[0], k * sum[1]});
  return out;
}

}  // namespace gini
