#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gini/error.hpp"
#include "gini/kernels.hpp"

namespace gini {

/// The two U-statistics whose ratio estimates a Gini correlation.
/// u1 averages h1, u2 averages h2 (a quarter of the Gini mean difference).
struct GiniComponents {
  double u1 = 0.0;
  double u2 = 0.0;
  std::size_t n = 0;

  /// gamma(u) = gamma * u2 - u1, the estimating functional at gamma.
  double functional(double gamma) const noexcept { return gamma * u2 - u1; }
};

/// Per-observation kernel sums s1[i] = sum_{j != i} h1(Z_i, Z_j), likewise s2.
struct RowSums {
  std::vector<double> s1;
  std::vector<double> s2;
};

/// U2 values below this are treated as zero (all x equal).
inline constexpr double kDegenerateU2 = 1e-300;

inline double pairs(std::size_t n) noexcept {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

/// Exact average of `kernel` over all C(n,2) pairs. Reference path for the fast forms.
template <class Kernel>
double u_naive(const BivariateSample& sample, Kernel&& kernel) {
  const std::size_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += kernel(sample[i], sample[j]);
  return sum / pairs(n);
}

/// U1 and U2 via linear combinations of order statistics, O(n log n).
/// Y-ties are handled exactly through mid-rank coefficients.
GiniComponents gini_components_fast(const BivariateSample& sample,
                                    Orientation orientation = Orientation::XY);

/// gamma-hat = U1 / U2 for the given orientation. Throws DegenerateSample when U2 = 0.
double gini_gamma(const BivariateSample& sample, Orientation orientation = Orientation::XY);
double gini_gamma(const GiniComponents& components);

/// Sample Pearson correlation.
double pearson_r(const BivariateSample& sample);

/// Asymptotic variance of the Pearson correlation from sample central moments
/// (plug-in form valid under finite fourth moments; (1 - rho^2)^2 under normality).
double pearson_variance_moments(const BivariateSample& sample);

/// Row sums of h1 and h2 in O(n log n) using y-sorted and x-sorted prefix sums.
RowSums row_sums(const BivariateSample& sample, Orientation orientation = Orientation::XY);

/// O(n^2) direct row sums; kept for cross-checking row_sums.
RowSums row_sums_naive(const BivariateSample& sample, Orientation orientation = Orientation::XY);

/// Components of the sample with observation i deleted:
/// U^{(-i)} = [C(n,2) U - s_i] / C(n-1,2).
GiniComponents leave_one_out_components(const GiniComponents& components, const RowSums& rows,
                                        std::size_t i);

/// Factorized two-sample functional. c1/c2 are XY components of the two samples,
/// c1yx/c2yx their YX components.
std::array<double, 2> two_sample_functional(const GiniComponents& c1, const GiniComponents& c2,
                                            double delta1, double delta2,
                                            const GiniComponents& c1yx,
                                            const GiniComponents& c2yx);

/// Number of pairs (i<j) with y_i == y_j; a nonzero count means the
/// continuous-marginal assumption is violated for the XY orientation.
std::size_t count_y_ties(const BivariateSample& sample);

}  // namespace gini
