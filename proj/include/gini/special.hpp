#pragma once

namespace gini {

// Standard normal and chi-square distribution functions. Arguments outside the
// domain throw OutOfRange.

double normal_cdf(double x);
double normal_quantile(double p);
double chisq_cdf(double x, double df);
double chisq_quantile(double p, double df);
/// Upper tail 1 - chisq_cdf, computed without cancellation.
double chisq_survival(double x, double df);

}  // namespace gini
