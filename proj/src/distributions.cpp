#include "gini/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gini/error.hpp"
#include "gini/special.hpp"
#include "gini/ustat.hpp"

namespace gini {

void ScatterSpec::validate() const {
  if (!(s11 > 0.0) || !(s22 > 0.0) || !(s11 * s22 - s12 * s12 > 0.0) || !std::isfinite(s12))
    throw InvalidScatter("scatter matrix is not positive definite");
}

double ScatterSpec::rho() const { return s12 / std::sqrt(s11 * s22); }

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::BivariateNormal: return "normal";
    case Family::BivariateT: return "t";
    case Family::NormalLognormal: return "normal_lognormal";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "normal") return Family::BivariateNormal;
  if (name == "t") return Family::BivariateT;
  if (name == "normal_lognormal" || name == "lognormal") return Family::NormalLognormal;
  throw ConfigInvalid("family", "unknown family '" + name + "'");
}

void DistributionSpec::validate() const {
  scatter.validate();
  if (family == Family::BivariateT && !(df >= 3.0))
    throw InvalidScatter("t family requires df >= 3 (finite second moments)");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(base_seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

BivariateSample sample(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  dist.validate();
  const auto& s = dist.scatter;
  const double a = std::sqrt(s.s11);
  const double b = s.s12 / a;
  const double c = std::sqrt(s.s22 - b * b);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::chi_squared_distribution<double> chi(dist.df);
  std::vector<BivariateObs> obs;
  obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = norm(rng);
    const double z2 = norm(rng);
    double x = a * z1;
    double y = b * z1 + c * z2;
    switch (dist.family) {
      case Family::BivariateNormal: break;
      case Family::BivariateT: {
        const double scale = 1.0 / std::sqrt(chi(rng) / dist.df);
        x *= scale;
        y *= scale;
        break;
      }
      case Family::NormalLognormal: y = std::exp(y); break;
    }
    obs.push_back({x, y});
  }
  return BivariateSample(std::move(obs));
}

BivariateSample sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(dist, n, rng);
}

double v_gamma_normal(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw OutOfRange("rho must lie in [-1, 1]");
  const double pi = std::numbers::pi;
  const double r2 = rho * rho;
  const double v = pi / 3.0 + (pi / 3.0 + 4.0 * std::sqrt(3.0)) * r2 -
                   4.0 * rho * std::asin(rho / 2.0) - 4.0 * r2 * std::sqrt(4.0 - r2);
  return std::max(0.0, v);
}

double gini_yx_normal_lognormal(double rho, double sigma2) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw OutOfRange("rho must lie in [-1, 1]");
  if (!(sigma2 > 0.0)) throw OutOfRange("sigma2 must be positive");
  const double r2 = std::numbers::sqrt2;
  return (2.0 * normal_cdf(rho * sigma2 / r2) - 1.0) / (2.0 * normal_cdf(sigma2 / r2) - 1.0);
}

double v_p_normal(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw OutOfRange("rho must lie in [-1, 1]");
  const double q = 1.0 - rho * rho;
  return q * q;
}

double true_gamma_xy(const DistributionSpec& dist) {
  dist.validate();
  return dist.scatter.rho();
}

double true_gamma_yx(const DistributionSpec& dist) {
  dist.validate();
  if (dist.family == Family::NormalLognormal)
    return gini_yx_normal_lognormal(dist.scatter.rho(), std::sqrt(dist.scatter.s22));
  return dist.scatter.rho();
}

namespace {

// Conditional kernel means E_{Z2}[h1(z, Z2)] and E_{Z2}[h2(z, Z2)] over a fixed
// reference sample, each in O(log N) after sorting.
class ConditionalMeans {
 public:
  explicit ConditionalMeans(const BivariateSample& ref) : n_(ref.size()) {
    std::vector<BivariateObs> by_y(ref.begin(), ref.end());
    std::sort(by_y.begin(), by_y.end(),
              [](const BivariateObs& a, const BivariateObs& b) { return a.y < b.y; });
    ys_.resize(n_);
    ypre_.assign(n_ + 1, 0.0L);
    for (std::size_t k = 0; k < n_; ++k) {
      ys_[k] = by_y[k].y;
      ypre_[k + 1] = ypre_[k] + by_y[k].x;
    }
    xs_ = ref.xs();
    std::sort(xs_.begin(), xs_.end());
    xpre_.assign(n_ + 1, 0.0L);
    for (std::size_t k = 0; k < n_; ++k) xpre_[k + 1] = xpre_[k] + xs_[k];
  }

  double h1(const BivariateObs& z) const {
    const auto lo = static_cast<std::size_t>(std::lower_bound(ys_.begin(), ys_.end(), z.y) - ys_.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(ys_.begin(), ys_.end(), z.y) - ys_.begin());
    const long double s = static_cast<long double>(z.x) * (static_cast<double>(lo) - static_cast<double>(n_ - hi)) -
                          ypre_[lo] + (ypre_[n_] - ypre_[hi]);
    return static_cast<double>(0.25L * s / static_cast<long double>(n_));
  }

  double h2(const BivariateObs& z) const {
    const auto lo = static_cast<std::size_t>(std::lower_bound(xs_.begin(), xs_.end(), z.x) - xs_.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), z.x) - xs_.begin());
    const long double s = static_cast<long double>(z.x) * (static_cast<double>(lo) - static_cast<double>(n_ - hi)) -
                          xpre_[lo] + (xpre_[n_] - xpre_[hi]);
    return static_cast<double>(0.25L * s / static_cast<long double>(n_));
  }

 private:
  std::size_t n_;
  std::vector<double> ys_, xs_;
  std::vector<long double> ypre_, xpre_;
};

}  // namespace

double v_gamma_monte_carlo(const DistributionSpec& dist, Orientation orientation,
                           std::size_t n_outer, std::size_t n_inner, std::uint64_t seed) {
  dist.validate();
  if (n_outer < 100 || n_inner < 100) throw OutOfRange("n_outer and n_inner must be >= 100");
  auto draw = [&](std::size_t n, std::uint64_t stream) {
    auto s = sample(dist, n, derive_seed(seed, stream));
    return orientation == Orientation::XY ? s : s.swapped();
  };
  // Each block of outer points gets its own pair of independent inner samples. Products of
  // the two conditional means are unbiased for E{E[h|Z1]^2}; fresh pairs per block keep
  // the error of any single reference sample from correlating across all outer points.
  const std::size_t blocks = std::clamp<std::size_t>(n_outer / 150, 1, 64);
  long double t1 = 0, t2 = 0, m11 = 0, m22 = 0, m12 = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = n_outer * b / blocks, hi = n_outer * (b + 1) / blocks;
    const ConditionalMeans inner_a(draw(n_inner, 3 * b + 1));
    const ConditionalMeans inner_b(draw(n_inner, 3 * b + 2));
    const auto outer = draw(hi - lo, 3 * b);
    for (const auto& z : outer) {
      const double a1 = inner_a.h1(z), b1 = inner_b.h1(z);
      const double a2 = inner_a.h2(z), b2 = inner_b.h2(z);
      t1 += 0.5 * (a1 + b1);
      t2 += 0.5 * (a2 + b2);
      m11 += a1 * b1;
      m22 += a2 * b2;
      m12 += 0.5 * (a1 * b2 + b1 * a2);
    }
  }
  const long double no = static_cast<long double>(n_outer);
  const double theta1 = static_cast<double>(t1 / no);
  const double theta2 = static_cast<double>(t2 / no);
  const double zeta1 = static_cast<double>(m11 / no) - theta1 * theta1;
  const double zeta2 = static_cast<double>(m22 / no) - theta2 * theta2;
  const double zeta3 = static_cast<double>(m12 / no) - theta1 * theta2;
  const double th2sq = theta2 * theta2;
  return 4.0 / th2sq * zeta1 + 4.0 * theta1 * theta1 / (th2sq * th2sq) * zeta2 -
         8.0 * theta1 / (th2sq * theta2) * zeta3;
}

double v_p_monte_carlo(const DistributionSpec& dist, std::size_t n, std::uint64_t seed) {
  return pearson_variance_moments(sample(dist, n, seed));
}

}  // namespace gini
