#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace gini {

struct BivariateObs {
  double x = 0.0;
  double y = 0.0;

  BivariateObs swapped() const noexcept { return {y, x}; }
  friend bool operator==(const BivariateObs&, const BivariateObs&) = default;
};

/// Ordered collection of finite paired observations.
///
/// Construction rejects NaN and infinite coordinates (NonFiniteValue); the
/// size requirements of individual estimators are checked where they are used.
class BivariateSample {
 public:
  BivariateSample() = default;
  explicit BivariateSample(std::vector<BivariateObs> obs);
  BivariateSample(std::initializer_list<BivariateObs> obs);
  BivariateSample(std::span<const double> xs, std::span<const double> ys);

  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  const BivariateObs& operator[](std::size_t i) const noexcept { return obs_[i]; }
  std::span<const BivariateObs> obs() const noexcept { return obs_; }
  auto begin() const noexcept { return obs_.begin(); }
  auto end() const noexcept { return obs_.end(); }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

  /// Same sample with the roles of x and y exchanged.
  BivariateSample swapped() const;
  /// Copy with observation i removed.
  BivariateSample without(std::size_t i) const;

 private:
  std::vector<BivariateObs> obs_;
};

enum class Orientation { XY, YX };

inline double sgn(double v) noexcept { return static_cast<double>((v > 0.0) - (v < 0.0)); }

/// 1/4 (x1 - x2) sgn(y1 - y2); zero on y-ties.
inline double kernel_h1(const BivariateObs& a, const BivariateObs& b) noexcept {
  return 0.25 * (a.x - b.x) * sgn(a.y - b.y);
}

/// 1/4 |x1 - x2|.
inline double kernel_h2(const BivariateObs& a, const BivariateObs& b) noexcept {
  return 0.25 * std::abs(a.x - b.x);
}

/// Estimating kernel for a single Gini correlation: h2 * gamma - h1.
inline double kernel_h(const BivariateObs& a, const BivariateObs& b, double gamma) noexcept {
  return kernel_h2(a, b) * gamma - kernel_h1(a, b);
}

/// Vector kernel for the difference of the two Gini correlations of one sample.
/// First coordinate targets gamma(X,Y) = delta + gamma2, second gamma(Y,X) = gamma2.
inline std::array<double, 2> kernel_G(const BivariateObs& a, const BivariateObs& b, double delta,
                                      double gamma2) noexcept {
  return {kernel_h(a, b, delta + gamma2), kernel_h(a.swapped(), b.swapped(), gamma2)};
}

/// Two-sample (2,2) kernel: (a1, a2) from the first sample, (b1, b2) from the second.
inline std::array<double, 2> kernel_H(const BivariateObs& a1, const BivariateObs& a2,
                                      const BivariateObs& b1, const BivariateObs& b2,
                                      double delta1, double delta2) noexcept {
  const double h1a = kernel_h1(a1, a2), h2a = kernel_h2(a1, a2);
  const double h1b = kernel_h1(b1, b2), h2b = kernel_h2(b1, b2);
  const BivariateObs a1s = a1.swapped(), a2s = a2.swapped();
  const BivariateObs b1s = b1.swapped(), b2s = b2.swapped();
  const double g1a = kernel_h1(a1s, a2s), g2a = kernel_h2(a1s, a2s);
  const double g1b = kernel_h1(b1s, b2s), g2b = kernel_h2(b1s, b2s);
  return {h2a * h2b * delta1 - h1a * h2b + h2a * h1b, g2a * g2b * delta2 - g1a * g2b + g2a * g1b};
}

}  // namespace gini
