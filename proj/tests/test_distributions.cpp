#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gini/distributions.hpp"
#include "gini/error.hpp"
#include "gini/jackknife.hpp"
#include "gini/special.hpp"
#include "gini/ustat.hpp"

TEST(Special, Examples) {
  EXPECT_DOUBLE_EQ(gini::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(gini::chisq_quantile(0.90, 2.0), -2.0 * std::log(0.1), 1e-10);
  EXPECT_NEAR(gini::chisq_quantile(0.95, 1.0), 3.841459, 1e-6);
  EXPECT_NEAR(gini::chisq_quantile(0.95, 1.0), std::pow(gini::normal_quantile(0.975), 2), 1e-10);
  EXPECT_NEAR(gini::normal_cdf(0.70711), 0.760250, 1e-6);
  EXPECT_NEAR(gini::normal_quantile(0.975), 1.959964, 1e-6);
  EXPECT_THROW(gini::normal_quantile(1.0), gini::OutOfRange);
  EXPECT_THROW(gini::chisq_cdf(1.0, 0.0), gini::OutOfRange);
}

TEST(Special, QuantileInvertsCdf) {
  for (double df : {1.0, 2.0, 5.0})
    for (double p = 0.001; p < 0.9995; p += 0.0125)
      EXPECT_NEAR(gini::chisq_cdf(gini::chisq_quantile(p, df), df), p, 1e-8);
  for (double p = 0.001; p < 0.9995; p += 0.0125)
    EXPECT_NEAR(gini::normal_cdf(gini::normal_quantile(p)), p, 1e-12);
  EXPECT_NEAR(gini::chisq_survival(3.0, 1.0), 1.0 - gini::chisq_cdf(3.0, 1.0), 1e-14);
}

TEST(ClosedForms, VGammaNormal) {
  EXPECT_NEAR(gini::v_gamma_normal(0.0), std::numbers::pi / 3.0, 1e-12);
  EXPECT_NEAR(gini::v_gamma_normal(1.0), 0.0, 1e-12);
  EXPECT_NEAR(gini::v_gamma_normal(0.5), 0.599196, 1e-6);
  for (double r = -1.0; r <= 1.0; r += 0.05) {
    EXPECT_GE(gini::v_gamma_normal(r), 0.0);
    EXPECT_NEAR(gini::v_gamma_normal(r), gini::v_gamma_normal(-r), 1e-14);
  }
  EXPECT_THROW(gini::v_gamma_normal(1.5), gini::OutOfRange);
}

TEST(ClosedForms, NormalLognormal) {
  // Independent evaluation with scipy.stats.norm gives 0.530887 (0.53092 rounds the same Delta0).
  EXPECT_NEAR(gini::gini_yx_normal_lognormal(0.5, 1.0), 0.530887, 1e-6);
  EXPECT_NEAR(0.5 - gini::gini_yx_normal_lognormal(0.5, 1.0), -0.031, 5e-4);
  EXPECT_NEAR(0.1 - gini::gini_yx_normal_lognormal(0.1, 1.0), -0.008, 5e-4);
  EXPECT_NEAR(gini::gini_yx_normal_lognormal(0.5, 4.0), 0.84666, 1e-5);
  EXPECT_DOUBLE_EQ(gini::gini_yx_normal_lognormal(0.0, 2.0), 0.0);
  EXPECT_THROW(gini::gini_yx_normal_lognormal(0.5, 0.0), gini::OutOfRange);
}

TEST(ClosedForms, VPNormal) {
  EXPECT_DOUBLE_EQ(gini::v_p_normal(0.0), 1.0);
  EXPECT_DOUBLE_EQ(gini::v_p_normal(1.0), 0.0);
  EXPECT_DOUBLE_EQ(gini::v_p_normal(-1.0), 0.0);
  EXPECT_NEAR(gini::v_p_normal(0.9), 0.0361, 1e-12);
}

TEST(Sampler, MomentsAndDeterminism) {
  const auto n = gini::DistributionSpec::normal({1.0, 1.0, 4.0});
  const auto s = gini::sample(n, 100000, 5);
  EXPECT_NEAR(gini::pearson_r(s), 0.5, 0.01);
  const auto again = gini::sample(n, 100000, 5);
  for (std::size_t i = 0; i < s.size(); i += 997) EXPECT_EQ(s[i], again[i]);

  const auto t = gini::DistributionSpec::t({1.0, 0.5, 1.0}, 5.0);
  const auto st = gini::sample(t, 100000, 6);
  double m = 0, v = 0;
  for (const auto& o : st) m += o.x;
  m /= st.size();
  for (const auto& o : st) v += (o.x - m) * (o.x - m);
  v /= (st.size() - 1);
  EXPECT_NEAR(v, 5.0 / 3.0, 0.05 * 5.0 / 3.0);

  const auto big = gini::sample(n, 1000000, 8);
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& o : big) sxx += o.x * o.x, sxy += o.x * o.y, syy += o.y * o.y;
  const double N = static_cast<double>(big.size());
  EXPECT_NEAR(sxx / N, 1.0, 0.01);
  EXPECT_NEAR(sxy / N, 1.0, 0.01);
  EXPECT_NEAR(syy / N, 4.0, 0.04);
}

TEST(Sampler, InvalidScatter) {
  EXPECT_THROW(gini::sample(gini::DistributionSpec::normal({1.0, 2.0, 1.0}), 10, 1), gini::InvalidScatter);
  EXPECT_THROW(gini::sample(gini::DistributionSpec::t({1.0, 0.0, 1.0}, 2.0), 10, 1), gini::InvalidScatter);
  EXPECT_THROW(gini::family_from_string("cauchy"), gini::ConfigInvalid);
}

TEST(Sampler, EllipticalEquality) {
  for (auto dist : {gini::DistributionSpec::normal({1.0, 1.0, 4.0}),
                    gini::DistributionSpec::t({1.0, 1.0, 4.0}, 5.0)}) {
    const auto s = gini::sample(dist, 100000, 12);
    const double se1 = std::sqrt(gini::jackknife_variance_gamma(s, gini::Orientation::XY));
    const double se2 = std::sqrt(gini::jackknife_variance_gamma(s, gini::Orientation::YX));
    EXPECT_NEAR(gini::gini_gamma(s, gini::Orientation::XY), 0.5, 3.0 * se1);
    EXPECT_NEAR(gini::gini_gamma(s, gini::Orientation::YX), 0.5, 3.0 * se2);
  }
}

TEST(MonteCarloVariance, MatchesClosedForm) {
  const auto n5 = gini::DistributionSpec::normal({1.0, 1.0, 4.0});
  EXPECT_NEAR(gini::v_gamma_monte_carlo(n5, gini::Orientation::XY), 0.599196, 0.05 * 0.599196);
  const auto n0 = gini::DistributionSpec::normal({1.0, 0.0, 4.0});
  EXPECT_NEAR(gini::v_gamma_monte_carlo(n0, gini::Orientation::XY), std::numbers::pi / 3.0,
              0.05 * std::numbers::pi / 3.0);
  const auto t5 = gini::DistributionSpec::t({1.0, 1.0, 4.0}, 5.0);
  const double a = gini::v_gamma_monte_carlo(t5, gini::Orientation::XY, 10000, 1000, 3);
  const double b = gini::v_gamma_monte_carlo(t5, gini::Orientation::XY, 10000, 1000, 3);
  EXPECT_GT(a, 0.0);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_EQ(a, b);
  EXPECT_THROW(gini::v_gamma_monte_carlo(n5, gini::Orientation::XY, 50, 1000), gini::OutOfRange);
}

TEST(MonteCarloVariance, PearsonMoments) {
  const auto n5 = gini::DistributionSpec::normal({1.0, 1.0, 4.0});
  EXPECT_NEAR(gini::v_p_monte_carlo(n5, 100000, 4), 0.5625, 0.05 * 0.5625);
}
