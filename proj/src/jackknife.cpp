#include "gini/jackknife.hpp"

#include <cmath>

namespace gini {

namespace {

std::vector<GiniComponents> leave_one_out_all(const BivariateSample& sample,
                                              Orientation orientation,
                                              const GiniComponents& full) {
  const auto rows = row_sums(sample, orientation);
  std::vector<GiniComponents> out;
  out.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i)
    out.push_back(leave_one_out_components(full, rows, i));
  return out;
}

double loo_variance(const std::vector<double>& loo) {
  const double n = static_cast<double>(loo.size());
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return (n - 1.0) / n * ss;
}

}  // namespace

ScalarPseudoBasis::ScalarPseudoBasis(const BivariateSample& sample, Orientation orientation,
                                     double offset)
    : offset_(offset) {
  const std::size_t n = sample.size();
  if (n < 3) throw SampleTooSmall(n, 3);
  components_ = gini_components_fast(sample, orientation);
  estimate_ = gini_gamma(components_) - offset_;
  const auto loo = leave_one_out_all(sample, orientation, components_);
  const double dn = static_cast<double>(n);
  v1_.resize(n);
  v2_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v1_[i] = dn * components_.u1 - (dn - 1.0) * loo[i].u1;
    v2_[i] = dn * components_.u2 - (dn - 1.0) * loo[i].u2;
  }
}

ScalarPseudoBasis ScalarPseudoBasis::for_gamma(const BivariateSample& sample,
                                               Orientation orientation) {
  return ScalarPseudoBasis(sample, orientation, 0.0);
}

ScalarPseudoBasis ScalarPseudoBasis::for_delta(const BivariateSample& sample) {
  if (sample.size() < 3) throw SampleTooSmall(sample.size(), 3);
  const double gamma2 = gini_gamma(sample, Orientation::YX);
  return ScalarPseudoBasis(sample, Orientation::XY, gamma2);
}

PseudoValues ScalarPseudoBasis::at(double param) const {
  PseudoValues out{std::vector<double>(v1_.size()), param, v1_.size()};
  const double slope = param + offset_;
  for (std::size_t i = 0; i < v1_.size(); ++i) out.values[i] = slope * v2_[i] - v1_[i];
  return out;
}

TwoSamplePseudoBasis::TwoSamplePseudoBasis(const BivariateSample& s1, const BivariateSample& s2) {
  if (s1.size() < 3) throw SampleTooSmall(s1.size(), 3);
  if (s2.size() < 3) throw SampleTooSmall(s2.size(), 3);
  c1_ = gini_components_fast(s1, Orientation::XY);
  c2_ = gini_components_fast(s2, Orientation::XY);
  c1yx_ = gini_components_fast(s1, Orientation::YX);
  c2yx_ = gini_components_fast(s2, Orientation::YX);
  for (const auto* c : {&c1_, &c2_, &c1yx_, &c2yx_})
    if (!(c->u2 >= kDegenerateU2)) throw DegenerateSample("a coordinate is constant in one sample");
  loo1_ = leave_one_out_all(s1, Orientation::XY, c1_);
  loo2_ = leave_one_out_all(s2, Orientation::XY, c2_);
  loo1yx_ = leave_one_out_all(s1, Orientation::YX, c1yx_);
  loo2yx_ = leave_one_out_all(s2, Orientation::YX, c2yx_);
}

std::array<double, 2> TwoSamplePseudoBasis::functional(double delta1, double delta2) const {
  return two_sample_functional(c1_, c2_, delta1, delta2, c1yx_, c2yx_);
}

std::array<double, 2> TwoSamplePseudoBasis::estimate() const {
  return {gini_gamma(c1_) - gini_gamma(c2_), gini_gamma(c1yx_) - gini_gamma(c2yx_)};
}

std::pair<std::vector<std::array<double, 2>>, std::vector<std::array<double, 2>>>
TwoSamplePseudoBasis::blocks(double delta1, double delta2) const {
  const auto u = functional(delta1, delta2);
  const double n1 = static_cast<double>(c1_.n), n2 = static_cast<double>(c2_.n);
  std::vector<std::array<double, 2>> b1(c1_.n), b2(c2_.n);
  for (std::size_t i = 0; i < c1_.n; ++i) {
    const auto ui = two_sample_functional(loo1_[i], c2_, delta1, delta2, loo1yx_[i], c2yx_);
    b1[i] = {n1 * u[0] - (n1 - 1.0) * ui[0], n1 * u[1] - (n1 - 1.0) * ui[1]};
  }
  for (std::size_t j = 0; j < c2_.n; ++j) {
    const auto uj = two_sample_functional(c1_, loo2_[j], delta1, delta2, c1yx_, loo2yx_[j]);
    b2[j] = {n2 * u[0] - (n2 - 1.0) * uj[0], n2 * u[1] - (n2 - 1.0) * uj[1]};
  }
  return {std::move(b1), std::move(b2)};
}

PseudoValues2 TwoSamplePseudoBasis::at(double delta1, double delta2) const {
  const auto u = functional(delta1, delta2);
  const auto [b1, b2] = blocks(delta1, delta2);
  const double n1 = static_cast<double>(c1_.n), n2 = static_cast<double>(c2_.n);
  const double n = n1 + n2;
  PseudoValues2 out;
  out.param = {delta1, delta2};
  out.n1 = c1_.n;
  out.n2 = c2_.n;
  out.rows.reserve(c1_.n + c2_.n);
  const double w1 = (n - 1.0) / (n1 - 1.0), k1 = n2 / (n1 - 1.0);
  for (const auto& v : b1) out.rows.push_back({w1 * v[0] - k1 * u[0], w1 * v[1] - k1 * u[1]});
  const double w2 = (n - 1.0) / (n2 - 1.0), k2 = n1 / (n2 - 1.0);
  for (const auto& v : b2) out.rows.push_back({w2 * v[0] - k2 * u[0], w2 * v[1] - k2 * u[1]});
  return out;
}

PseudoValues pseudo_values_gamma(const BivariateSample& sample, double gamma,
                                 Orientation orientation) {
  return ScalarPseudoBasis::for_gamma(sample, orientation).at(gamma);
}

PseudoValues pseudo_values_delta(const BivariateSample& sample, double delta) {
  return ScalarPseudoBasis::for_delta(sample).at(delta);
}

PseudoValues2 pseudo_values_two_sample(const BivariateSample& s1, const BivariateSample& s2,
                                       double delta1, double delta2) {
  return TwoSamplePseudoBasis(s1, s2).at(delta1, delta2);
}

double jackknife_variance(const Estimator& estimator, const BivariateSample& sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw SampleTooSmall(n, 3);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = estimator(sample.without(i));
  return loo_variance(loo);
}

double jackknife_variance_gamma(const BivariateSample& sample, Orientation orientation) {
  const std::size_t n = sample.size();
  if (n < 3) throw SampleTooSmall(n, 3);
  const auto full = gini_components_fast(sample, orientation);
  const auto loo = leave_one_out_all(sample, orientation, full);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = gini_gamma(loo[i]);
  return loo_variance(g);
}

double jackknife_variance_delta(const BivariateSample& sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw SampleTooSmall(n, 3);
  const auto fxy = gini_components_fast(sample, Orientation::XY);
  const auto fyx = gini_components_fast(sample, Orientation::YX);
  const auto lxy = leave_one_out_all(sample, Orientation::XY, fxy);
  const auto lyx = leave_one_out_all(sample, Orientation::YX, fyx);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = gini_gamma(lxy[i]) - gini_gamma(lyx[i]);
  return loo_variance(d);
}

double jackknife_variance_pearson(const BivariateSample& sample) {
  return jackknife_variance([](const BivariateSample& s) { return pearson_r(s); }, sample);
}

}  // namespace gini
