#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <vector>

#include "wbi/math/bessel.hpp"
#include "wbi/math/optim.hpp"
#include "wbi/math/quadrature.hpp"
#include "wbi/math/rng.hpp"
#include "wbi/math/stats.hpp"

namespace wm = wbi::math;

TEST(Bessel, AgreesWithBoostOnModerateRange) {
  // independent implementation cross-check
  for (double nu : {0.0, 0.13, 0.5, 0.9, 1.7, 3.2, -0.6, -2.5}) {
    for (double x : {1e-3, 0.05, 0.7, 1.0, 4.0, 25.0, 180.0}) {
      const double ours = wm::log_bessel_k(nu, x);
      const double ref = std::log(boost::math::cyl_bessel_k(std::fabs(nu), x));
      EXPECT_NEAR(ours, ref, 1e-12 * (1.0 + std::fabs(ref)))
          << "nu=" << nu << " x=" << x;
    }
  }
}

TEST(Bessel, LargeArgumentAsymptotics) {
  // lnK ~ -x + 0.5 log(pi/2x) + log(1 + (4nu^2-1)/8x + ...)
  for (double nu : {0.4, 1.5}) {
    for (double x : {800.0, 5000.0, 2e5}) {
      const double a1 = (4.0 * nu * nu - 1.0) / (8.0 * x);
      const double a2 = (4.0 * nu * nu - 1.0) * (4.0 * nu * nu - 9.0) /
                        (2.0 * 64.0 * x * x);
      const double ref =
          -x + 0.5 * std::log(M_PI / (2.0 * x)) + std::log1p(a1 + a2);
      EXPECT_NEAR(wm::log_bessel_k(nu, x), ref, 1e-6);
    }
  }
}

TEST(Bessel, RatioAndSymmetry) {
  EXPECT_NEAR(wm::bessel_k(0.5, 1.0),
              std::sqrt(M_PI / 2.0) * std::exp(-1.0), 1e-14);
  EXPECT_DOUBLE_EQ(wm::log_bessel_k(-1.3, 2.0), wm::log_bessel_k(1.3, 2.0));
  EXPECT_NEAR(wm::bessel_k_ratio(1.5, 0.5, 2.0),
              boost::math::cyl_bessel_k(1.5, 2.0) /
                  boost::math::cyl_bessel_k(0.5, 2.0),
              1e-13);
  EXPECT_THROW(wm::log_bessel_k(1.0, -1.0), wbi::NumericalError);
}

TEST(Quadrature, KnownIntegrals) {
  EXPECT_NEAR(wm::integrate([](double x) { return std::exp(-x * x); },
                            -wm::kInf, wm::kInf),
              std::sqrt(M_PI), 1e-12);
  EXPECT_NEAR(wm::integrate_singular(
                  [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0),
              2.0, 1e-9);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& p) {
    const double a = 1.0 - p[0];
    const double b = p[1] - p[0] * p[0];
    return a * a + 100.0 * b * b;
  };
  auto res = wm::nelder_mead(f, {-1.2, 1.0}, {0.5, 0.5});
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-5);
  EXPECT_NEAR(res.x[1], 1.0, 1e-5);
}

TEST(NelderMead, Quadratic6D) {
  auto f = [](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - static_cast<double>(i);
      s += (1.0 + static_cast<double>(i)) * d * d;
    }
    return s;
  };
  auto res = wm::nelder_mead(f, std::vector<double>(6, 0.5),
                             std::vector<double>(6, 1.0));
  for (std::size_t i = 0; i < 6; ++i)
    EXPECT_NEAR(res.x[i], static_cast<double>(i), 1e-4);
}

TEST(RootFinding, BrentClassics) {
  auto f1 = [](double x) { return x * x * x - 2.0 * x - 5.0; };
  auto r1 = wm::brent_root(f1, 2.0, 3.0, f1(2.0), f1(3.0));
  EXPECT_NEAR(r1.x, 2.0945514815423265, 1e-12);

  auto f2 = [](double x) { return std::cos(x) - x; };
  auto r2 = wm::brent_root(f2, 0.0, 1.0, f2(0.0), f2(1.0));
  EXPECT_NEAR(r2.x, 0.7390851332151607, 1e-12);

  EXPECT_THROW(wm::brent_root(f1, 3.0, 4.0, f1(3.0), f1(4.0)),
               wbi::NumericalError);
}

TEST(RootFinding, GoldenSectionMax) {
  auto f = [](double x) { return -(x - 1.3) * (x - 1.3); };
  EXPECT_NEAR(wm::golden_section_max(f, -4.0, 9.0), 1.3, 1e-8);
}

TEST(Rng, DeterministicGivenSeed) {
  wm::Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double xa = a.normal();
    const double xb = b.normal();
    const double xc = c.normal();
    all_equal = all_equal && (xa == xb);
    any_diff = any_diff || (xa != xc);
  }
  EXPECT_TRUE(all_equal);
  EXPECT_TRUE(any_diff);
}

TEST(Rng, NormalMoments) {
  wm::Rng rng(7);
  const std::size_t n = 400000;
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  EXPECT_NEAR(wm::mean(x), 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(wm::variance(x), 1.0, 0.02);
  EXPECT_NEAR(wm::skewness(x), 0.0, 0.03);
  EXPECT_NEAR(wm::excess_kurtosis(x), 0.0, 0.06);
}

TEST(Rng, GammaMoments) {
  for (double shape : {0.6, 1.0, 2.5, 8.0}) {
    wm::Rng rng(11);
    const std::size_t n = 200000;
    std::vector<double> x(n);
    for (auto& v : x) v = rng.gamma(shape);
    EXPECT_NEAR(wm::mean(x), shape, 0.03 * (1.0 + shape)) << shape;
    EXPECT_NEAR(wm::variance(x), shape, 0.05 * (1.0 + shape)) << shape;
  }
}

TEST(Rng, SeedDerivationSeparatesStreams) {
  const auto s1 = wm::derive_seed(123, "simulate", 0);
  const auto s2 = wm::derive_seed(123, "simulate", 1);
  const auto s3 = wm::derive_seed(123, "price", 0);
  EXPECT_NE(s1, s2);
  EXPECT_NE(s1, s3);
  EXPECT_EQ(s1, wm::derive_seed(123, "simulate", 0));
}

TEST(Stats, LowerQuantileConvention) {
  // ceil(q n)-th smallest
  std::vector<double> x = {-3, -2, -1, 0, 1, 2, 3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(wm::lower_quantile(x, 0.10), -3.0);
  EXPECT_DOUBLE_EQ(wm::lower_quantile(x, 0.05), -3.0);
  EXPECT_DOUBLE_EQ(wm::lower_quantile(x, 0.20), -2.0);
  EXPECT_DOUBLE_EQ(wm::lower_quantile(x, 0.11), -2.0);
  EXPECT_DOUBLE_EQ(wm::lower_quantile(x, 0.999), 6.0);
  EXPECT_THROW(wm::lower_quantile(x, 0.0), wbi::ValidationError);
}

TEST(Stats, MedianAndMoments) {
  EXPECT_DOUBLE_EQ(wm::median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(wm::median({4.0, 1.0, 2.0, 3.0}), 2.5);
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(wm::mean(x), 2.5);
  EXPECT_NEAR(wm::variance(x), 5.0 / 3.0, 1e-15);
}

TEST(Stats, NormalHelpers) {
  EXPECT_NEAR(wm::normal_quantile(0.05), -1.6448536269514729, 1e-12);
  EXPECT_NEAR(wm::normal_quantile(0.10), -1.2815515655446004, 1e-12);
  EXPECT_NEAR(wm::normal_cdf(-1.6448536269514729), 0.05, 1e-14);
  EXPECT_NEAR(wm::normal_pdf(0.0), 0.3989422804014327, 1e-15);
}

TEST(Stats, KsPvalueFrozen) {
  // scipy.stats.kstwobign.sf reference values
  EXPECT_NEAR(wm::ks_pvalue(0.01, 10000), 0.269999671677, 1e-9);
  EXPECT_NEAR(wm::ks_pvalue(0.0163, 10000), 0.009846364888, 1e-9);
  EXPECT_NEAR(wm::ks_pvalue(0.05, 1000), 0.013475889876, 1e-9);
  EXPECT_NEAR(wm::ks_pvalue(0.2, 100), 0.000670925256, 1e-9);
  EXPECT_DOUBLE_EQ(wm::ks_pvalue(1e-6, 100), 1.0);
}

TEST(Stats, KsStatisticPerfectQuantiles) {
  // data at levels (i-0.5)/n of the null law -> D = 0.5/n
  const std::size_t n = 100;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = wm::normal_quantile((static_cast<double>(i) + 0.5) /
                               static_cast<double>(n));
  const double d =
      wm::ks_statistic(x, [](double v) { return wm::normal_cdf(v); });
  EXPECT_LE(d, 0.5 / static_cast<double>(n) + 1e-12);
}

TEST(Stats, AdAsymptoticCdfSpotValues) {
  // oracle: numeric evaluation of the exact series for the asymptotic law
  EXPECT_NEAR(wm::ad_cdf_asymptotic(0.5), 0.2531856265, 1e-8);
  EXPECT_NEAR(wm::ad_cdf_asymptotic(1.0), 0.6427333268, 1e-8);
  EXPECT_NEAR(wm::ad_cdf_asymptotic(1.933), 0.9000055908, 1e-8);
  EXPECT_NEAR(wm::ad_cdf_asymptotic(2.492), 0.9499850261, 1e-8);
  EXPECT_NEAR(wm::ad_cdf_asymptotic(3.857), 0.9903002046, 1e-8);
  EXPECT_LT(wm::ad_cdf_asymptotic(0.01), 1e-6);
  EXPECT_GT(wm::ad_cdf_asymptotic(10.0), 0.9999);
}

TEST(Stats, ChiSquaredSurvival) {
  EXPECT_NEAR(wm::chi_squared_sf(18.307038053275146, 10), 0.05, 1e-12);
  EXPECT_NEAR(wm::chi_squared_sf(3.5, 2), 0.1737739434504451, 1e-12);
}

TEST(Stats, CompensatedSum) {
  std::vector<double> x = {1e16, 1.0, -1e16};
  EXPECT_DOUBLE_EQ(wm::compensated_sum(x), 1.0);
}
