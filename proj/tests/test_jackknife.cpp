#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gini/distributions.hpp"
#include "gini/error.hpp"
#include "gini/jackknife.hpp"
#include "oracle.hpp"

namespace {
const gini::BivariateSample S3{{1, 1}, {2, 2}, {3, 3}};
const gini::BivariateSample S3m{{1, 3}, {2, 2}, {3, 1}};
const gini::BivariateSample S4{{1, 2}, {2, 1}, {3, 4}, {4, 3}};

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
}  // namespace

TEST(PseudoGamma, Examples) {
  for (double v : gini::pseudo_values_gamma(S3, 1.0).values) EXPECT_NEAR(v, 0.0, 1e-15);
  EXPECT_NEAR(mean(gini::pseudo_values_gamma(S4, 0.6).values), 0.0, 1e-14);
  const auto pv = gini::pseudo_values_gamma(S4, 0.0);
  EXPECT_NEAR(mean(pv.values), -0.25, 1e-14);
  const auto naive = oracle::pseudo_gamma(S4, 0.0, false);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(pv.values[i], naive[i], 1e-13);
  EXPECT_THROW(gini::pseudo_values_gamma(gini::BivariateSample{{1, 1}, {2, 2}}, 0.0),
               gini::SampleTooSmall);
}

TEST(PseudoDelta, Examples) {
  EXPECT_NEAR(mean(gini::pseudo_values_delta(S4, 0.0).values), 0.0, 1e-14);
  for (double v : gini::pseudo_values_delta(S3, 0.0).values) EXPECT_NEAR(v, 0.0, 1e-15);
  const auto pv = gini::pseudo_values_delta(S4, 0.5);
  EXPECT_NEAR(mean(pv.values), 0.5 * 2.5 / 6.0, 1e-14);
  const auto naive = oracle::pseudo_delta(S4, 0.5);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(pv.values[i], naive[i], 1e-13);
}

TEST(PseudoTwoSample, Examples) {
  auto rowmean = [](const gini::PseudoValues2& p) {
    std::array<double, 2> m{0, 0};
    for (const auto& r : p.rows) m[0] += r[0], m[1] += r[1];
    m[0] /= static_cast<double>(p.rows.size());
    m[1] /= static_cast<double>(p.rows.size());
    return m;
  };
  auto m = rowmean(gini::pseudo_values_two_sample(S4, S4, 0.0, 0.0));
  EXPECT_NEAR(m[0], 0.0, 1e-14);
  EXPECT_NEAR(m[1], 0.0, 1e-14);
  m = rowmean(gini::pseudo_values_two_sample(S3, S3m, 2.0, 2.0));
  EXPECT_NEAR(m[0], 0.0, 1e-14);
  EXPECT_NEAR(m[1], 0.0, 1e-14);
  std::mt19937_64 rng(2);
  const auto a = oracle::random_sample(rng, 5, false), b = oracle::random_sample(rng, 5, false);
  const auto pv = gini::pseudo_values_two_sample(a, b, 0.2, -0.1);
  const auto naive = oracle::pseudo_two_sample(a, b, 0.2, -0.1, true);
  ASSERT_EQ(pv.rows.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(pv.rows[i][0], naive[i][0], 1e-10);
    EXPECT_NEAR(pv.rows[i][1], naive[i][1], 1e-10);
  }
  EXPECT_THROW(gini::pseudo_values_two_sample(S4, gini::BivariateSample{{1, 1}, {2, 2}}, 0, 0),
               gini::SampleTooSmall);
}

TEST(PseudoTwoSample, BlockIdentity) {
  std::mt19937_64 rng(4);
  const auto a = oracle::random_sample(rng, 12, false), b = oracle::random_sample(rng, 17, false);
  const gini::TwoSamplePseudoBasis basis(a, b);
  const auto u = basis.functional(0.1, 0.3);
  const auto [b1, b2] = basis.blocks(0.1, 0.3);
  std::array<double, 2> m1{0, 0}, m2{0, 0};
  for (const auto& r : b1) m1[0] += r[0] / 12.0, m1[1] += r[1] / 12.0;
  for (const auto& r : b2) m2[0] += r[0] / 17.0, m2[1] += r[1] / 17.0;
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(m1[c], u[c], 1e-13);
    EXPECT_NEAR(m2[c], u[c], 1e-13);
  }
}

TEST(JackknifeVariance, Examples) {
  const gini::BivariateSample s{{1, 0}, {2, 5}, {3, 1}};
  const gini::Estimator xbar = [](const gini::BivariateSample& t) {
    double m = 0;
    for (const auto& o : t) m += o.x;
    return m / static_cast<double>(t.size());
  };
  EXPECT_NEAR(gini::jackknife_variance(xbar, s), 1.0 / 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(gini::jackknife_variance([](const gini::BivariateSample&) { return 4.2; }, s), 0.0);
}

TEST(JackknifeVariance, FastMatchesGeneric) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_sample(rng, 30, k % 3 == 0);
    for (auto o : {gini::Orientation::XY, gini::Orientation::YX}) {
      const double generic = gini::jackknife_variance(
          [o](const gini::BivariateSample& t) { return gini::gini_gamma(t, o); }, s);
      EXPECT_NEAR(gini::jackknife_variance_gamma(s, o), generic, 1e-12);
    }
    const double dgen = gini::jackknife_variance(
        [](const gini::BivariateSample& t) {
          return gini::gini_gamma(t, gini::Orientation::XY) - gini::gini_gamma(t, gini::Orientation::YX);
        },
        s);
    EXPECT_NEAR(gini::jackknife_variance_delta(s), dgen, 1e-12);
  }
}

TEST(JackknifeVariance, ScaledVarianceNearClosedForm) {
  const auto dist = gini::DistributionSpec::normal({1.0, 1.0, 4.0});
  double total = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto s = gini::sample(dist, 200, gini::derive_seed(77, r));
    total += 200.0 * gini::jackknife_variance_gamma(s);
  }
  EXPECT_NEAR(total / reps, gini::v_gamma_normal(0.5), 0.25 * gini::v_gamma_normal(0.5));
}

TEST(PseudoValues, MeanZeroAtTruth) {
  const auto dist = gini::DistributionSpec::normal({1.0, 1.0, 4.0});
  std::vector<double> means;
  for (int r = 0; r < 2000; ++r) {
    const auto s = gini::sample(dist, 50, gini::derive_seed(91, r));
    means.push_back(mean(gini::pseudo_values_gamma(s, 0.5).values));
  }
  const double m = mean(means);
  double ss = 0;
  for (double v : means) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / (means.size() - 1) / means.size());
  EXPECT_LT(std::abs(m), 3.0 * se);
}
