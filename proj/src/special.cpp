#include "gini/special.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gini/error.hpp"

namespace gini {

double normal_cdf(double x) {
  if (std::isnan(x)) throw OutOfRange("normal_cdf: NaN argument");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("normal_quantile: p must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double chisq_cdf(double x, double df) {
  if (!(df > 0.0) || std::isnan(x)) throw OutOfRange("chisq_cdf: invalid arguments");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(df / 2.0, x / 2.0);
}

double chisq_survival(double x, double df) {
  if (!(df > 0.0) || std::isnan(x)) throw OutOfRange("chisq_survival: invalid arguments");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chisq_quantile(double p, double df) {
  if (!(df > 0.0) || !(p >= 0.0 && p < 1.0)) throw OutOfRange("chisq_quantile: invalid arguments");
  if (p == 0.0) return 0.0;
  return 2.0 * boost::math::gamma_p_inv(df / 2.0, p);
}

}  // namespace gini
