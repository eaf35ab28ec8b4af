#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "wbi/errors.hpp"
#include "wbi/math/quadrature.hpp"

namespace wbi::math {

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample variance with T-1 denominator.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("variance: need at least 2 points");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double stddev(std::span<const double> x) {
  return std::sqrt(variance(x));
}

/// Central moment of order k about the sample mean (1/n normalization).
inline double central_moment(std::span<const double> x, int k) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += std::pow(v - m, k);
  return s / static_cast<double>(x.size());
}

inline double skewness(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) throw ValidationError("skewness: zero variance");
  return central_moment(x, 3) / std::pow(m2, 1.5);
}

inline double excess_kurtosis(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) throw ValidationError("excess_kurtosis: zero variance");
  return central_moment(x, 4) / (m2 * m2) - 3.0;
}

inline double median(std::vector<double> x) {
  if (x.empty()) throw ValidationError("median: empty sample");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return (n % 2 == 1) ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// Lower empirical quantile: the ceil(q*n)-th smallest value. This is the
/// quantile convention shared by every module (VaR, CoVaR, tail sets).
inline double lower_quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile: empty sample");
  if (!(q > 0.0 && q < 1.0))
    throw ValidationError("quantile: level must lie in (0,1), got " +
                          std::to_string(q));
  const double nq = q * static_cast<double>(sorted.size());
  std::size_t k = static_cast<std::size_t>(std::ceil(nq - 1e-12));
  if (k < 1) k = 1;
  if (k > sorted.size()) k = sorted.size();
  return sorted[k - 1];
}

inline double lower_quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  return lower_quantile_sorted(x, q);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double chi_squared_sf(double x, double dof) {
  return boost::math::cdf(
      boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

/// Two-sided Kolmogorov-Smirnov statistic of a sorted sample against a CDF.
inline double ks_statistic(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw ValidationError("ks_statistic: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - u;
    const double lo = u - static_cast<double>(i) / static_cast<double>(n);
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

/// Asymptotic KS p-value (parameters treated as known):
/// P(sqrt(n) D > t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
inline double ks_pvalue(double d, std::size_t n) {
  const double t = std::sqrt(static_cast<double>(n)) * d;
  if (t < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-14) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

/// Anderson-Darling statistic of a sorted sample against a CDF.
inline double ad_statistic(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw ValidationError("ad_statistic: empty sample");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = std::clamp(cdf(sorted[i]), 1e-15, 1.0 - 1e-15);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += (2.0 * static_cast<double>(i) + 1.0) *
         (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

/// Asymptotic CDF of the Anderson-Darling statistic with all parameters
/// known, via the exact series
///   F(z) = sqrt(2 pi)/z sum_j (-1)^j C(-1/2, j) (4j+1)
///          exp(-(4j+1)^2 pi^2 / (8z)) I_j(z),
///   I_j(z) = int_0^inf exp(z/(8(1+w^2)) - (4j+1)^2 pi^2 w^2/(8z)) dw.
inline double ad_cdf_asymptotic(double z) {
  if (z <= 0.0) return 0.0;
  if (z > 32.0) return 1.0;  // tail below double resolution
  constexpr double pi = 3.14159265358979323846;
  double sum = 0.0;
  double binom = 1.0;  // (-1)^j C(-1/2, j) = (2j-1)!!/(2j)!!, positive
  for (int j = 0; j < 24; ++j) {
    if (j > 0) binom *= (2.0 * j - 1.0) / (2.0 * j);
    const double a = 4.0 * j + 1.0;
    const double pref = binom * a * std::exp(-a * a * pi * pi / (8.0 * z));
    if (pref < 1e-17 && j > 0) break;
    const double integral = integrate(
        [&](double w) {
          return std::exp(z / (8.0 * (1.0 + w * w)) -
                          a * a * pi * pi * w * w / (8.0 * z));
        },
        0.0, kInf, 1e-12);
    sum += pref * integral;
  }
  return std::clamp(std::sqrt(2.0 * pi) / z * sum, 0.0, 1.0);
}

inline double ad_pvalue(double a2) {
  return std::clamp(1.0 - ad_cdf_asymptotic(a2), 0.0, 1.0);
}

/// Compensated (Neumaier) summation; used where algebraic identities are
/// asserted at 1e-12 on large sums.
inline double compensated_sum(std::span<const double> x) {
  double s = 0.0;
  double c = 0.0;
  for (double v : x) {
    const double t = s + v;
    if (std::fabs(s) >= std::fabs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  return s + c;
}

}  // namespace wbi::math
