#include "gini/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gini {

namespace {

struct Oriented {
  double x;
  double y;
};

std::vector<Oriented> orient(const BivariateSample& sample, Orientation orientation) {
  std::vector<Oriented> out;
  out.reserve(sample.size());
  for (const auto& o : sample) {
    if (orientation == Orientation::XY)
      out.push_back({o.x, o.y});
    else
      out.push_back({o.y, o.x});
  }
  return out;
}

std::vector<std::size_t> order_by(const std::vector<Oriented>& pts, double Oriented::*key) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].*key < pts[b].*key; });
  return idx;
}

// For each observation, the number of strictly smaller / larger keys and the sums of x
// over those observations. Tie groups share their boundaries.
struct SplitSums {
  std::vector<double> less_count, greater_count;
  std::vector<long double> less_sum, greater_sum;
};

SplitSums split_sums(const std::vector<Oriented>& pts, double Oriented::*key) {
  const std::size_t n = pts.size();
  const auto idx = order_by(pts, key);
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + pts[idx[k]].x;

  SplitSums out{std::vector<double>(n), std::vector<double>(n), std::vector<long double>(n),
                std::vector<long double>(n)};
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a + 1;
    while (b < n && pts[idx[b]].*key == pts[idx[a]].*key) ++b;
    for (std::size_t k = a; k < b; ++k) {
      const std::size_t i = idx[k];
      out.less_count[i] = static_cast<double>(a);
      out.greater_count[i] = static_cast<double>(n - b);
      out.less_sum[i] = prefix[a];
      out.greater_sum[i] = prefix[n] - prefix[b];
    }
    a = b;
  }
  return out;
}

}  // namespace

GiniComponents gini_components_fast(const BivariateSample& sample, Orientation orientation) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  const auto pts = orient(sample, orientation);

  // U2: sum_k (2k - 1 - n) x_(k).
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = pts[i].x;
  std::sort(xs.begin(), xs.end());
  long double s2 = 0.0L;
  for (std::size_t k = 0; k < n; ++k)
    s2 += static_cast<long double>(2.0 * static_cast<double>(k) + 1.0 - static_cast<double>(n)) *
          xs[k];

  // U1: concomitants of the y order statistics; tie groups get the mid-rank coefficient
  // (#smaller - #larger), which reproduces the zero weight h1 gives to tied pairs.
  const auto idx = order_by(pts, &Oriented::y);
  long double s1 = 0.0L;
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a + 1;
    while (b < n && pts[idx[b]].y == pts[idx[a]].y) ++b;
    const double coef = static_cast<double>(a) - static_cast<double>(n - b);
    for (std::size_t k = a; k < b; ++k) s1 += static_cast<long double>(coef) * pts[idx[k]].x;
    a = b;
  }

  const long double denom = 4.0L * static_cast<long double>(pairs(n));
  return {static_cast<double>(s1 / denom), static_cast<double>(s2 / denom), n};
}

double gini_gamma(const GiniComponents& c) {
  if (!(c.u2 >= kDegenerateU2))
    throw DegenerateSample("Gini mean difference is zero (all values of the first coordinate equal)");
  return std::clamp(c.u1 / c.u2, -1.0, 1.0);
}

double gini_gamma(const BivariateSample& sample, Orientation orientation) {
  return gini_gamma(gini_components_fast(sample, orientation));
}

double pearson_r(const BivariateSample& sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  double mx = 0.0, my = 0.0;
  for (const auto& o : sample) {
    mx += o.x;
    my += o.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& o : sample) {
    const double dx = o.x - mx, dy = o.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw DegenerateSample("zero variance in a coordinate");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_variance_moments(const BivariateSample& sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  const double dn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (const auto& o : sample) {
    mx += o.x;
    my += o.y;
  }
  mx /= dn;
  my /= dn;
  // s[k][l] = mean of dx^k dy^l
  double s20 = 0, s02 = 0, s11 = 0, s22 = 0, s40 = 0, s04 = 0, s31 = 0, s13 = 0;
  for (const auto& o : sample) {
    const double dx = o.x - mx, dy = o.y - my;
    const double dx2 = dx * dx, dy2 = dy * dy;
    s20 += dx2;
    s02 += dy2;
    s11 += dx * dy;
    s22 += dx2 * dy2;
    s40 += dx2 * dx2;
    s04 += dy2 * dy2;
    s31 += dx2 * dx * dy;
    s13 += dx * dy2 * dy;
  }
  s20 /= dn, s02 /= dn, s11 /= dn, s22 /= dn, s40 /= dn, s04 /= dn, s31 /= dn, s13 /= dn;
  if (s20 <= 0.0 || s02 <= 0.0) throw DegenerateSample("zero variance in a coordinate");
  const double rho = s11 / std::sqrt(s20 * s02);
  const double r2 = rho * rho;
  // rho^2 / s11 is rewritten as rho / sqrt(s20 s02) so s11 = 0 is harmless.
  const double inv = 1.0 / (s20 * s02);
  return (1.0 + r2 / 2.0) * s22 * inv +
         r2 / 4.0 * (s40 / (s20 * s20) + s04 / (s02 * s02)) -
         rho * s31 / (s20 * std::sqrt(s20 * s02)) - rho * s13 / (s02 * std::sqrt(s20 * s02));
}

RowSums row_sums(const BivariateSample& sample, Orientation orientation) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  const auto pts = orient(sample, orientation);
  const auto by_y = split_sums(pts, &Oriented::y);
  const auto by_x = split_sums(pts, &Oriented::x);

  RowSums out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const long double x = pts[i].x;
    // sum_j (x_i - x_j) sgn(y_i - y_j)
    const long double r1 = x * (by_y.less_count[i] - by_y.greater_count[i]) - by_y.less_sum[i] +
                           by_y.greater_sum[i];
    // sum_j |x_i - x_j|
    const long double r2 = x * (by_x.less_count[i] - by_x.greater_count[i]) - by_x.less_sum[i] +
                           by_x.greater_sum[i];
    out.s1[i] = static_cast<double>(0.25L * r1);
    out.s2[i] = static_cast<double>(0.25L * r2);
  }
  return out;
}

RowSums row_sums_naive(const BivariateSample& sample, Orientation orientation) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  const BivariateSample s = orientation == Orientation::XY ? sample : sample.swapped();
  RowSums out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      out.s1[i] += kernel_h1(s[i], s[j]);
      out.s2[i] += kernel_h2(s[i], s[j]);
    }
  }
  return out;
}

GiniComponents leave_one_out_components(const GiniComponents& c, const RowSums& rows,
                                        std::size_t i) {
  if (c.n < 3) throw SampleTooSmall(c.n, 3);
  if (i >= c.n || i >= rows.s1.size() || i >= rows.s2.size())
    throw IndexOutOfRange("leave-one-out index " + std::to_string(i) + " out of range");
  const double full = pairs(c.n);
  const double reduced = pairs(c.n - 1);
  return {(full * c.u1 - rows.s1[i]) / reduced, (full * c.u2 - rows.s2[i]) / reduced, c.n - 1};
}

std::array<double, 2> two_sample_functional(const GiniComponents& c1, const GiniComponents& c2,
                                            double delta1, double delta2,
                                            const GiniComponents& c1yx,
                                            const GiniComponents& c2yx) {
  if (c1.n < 2) throw SampleTooSmall(c1.n, 2);
  if (c2.n < 2) throw SampleTooSmall(c2.n, 2);
  return {c1.u2 * c2.u2 * delta1 - c1.u1 * c2.u2 + c1.u2 * c2.u1,
          c1yx.u2 * c2yx.u2 * delta2 - c1yx.u1 * c2yx.u2 + c1yx.u2 * c2yx.u1};
}

std::size_t count_y_ties(const BivariateSample& sample) {
  auto ys = sample.ys();
  std::sort(ys.begin(), ys.end());
  std::size_t ties = 0;
  std::size_t a = 0;
  while (a < ys.size()) {
    std::size_t b = a + 1;
    while (b < ys.size() && ys[b] == ys[a]) ++b;
    const std::size_t g = b - a;
    ties += g * (g - 1) / 2;
    a = b;
  }
  return ties;
}

}  // namespace gini
