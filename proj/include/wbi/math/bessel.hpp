#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <string>

#include "wbi/errors.hpp"

namespace wbi::math {

namespace detail {
// GSL aborts on error by default; evaluation errors must surface as
// exceptions instead. Done once per process.
inline const int gsl_handler_disabled = [] {
  gsl_set_error_handler_off();
  return 0;
}();
}  // namespace detail

/// log K_nu(x) for x > 0. K is symmetric in the order, so any real nu is
/// accepted. Stays finite in the log scale where K itself would under- or
/// overflow.
inline double log_bessel_k(double nu, double x) {
  (void)detail::gsl_handler_disabled;
  if (!(x > 0.0)) {
    throw NumericalError("log_bessel_k: argument must be positive, got x=" +
                         std::to_string(x));
  }
  gsl_sf_result r;
  const int status = gsl_sf_bessel_lnKnu_e(std::fabs(nu), x, &r);
  if (status != GSL_SUCCESS) {
    throw NumericalError("log_bessel_k failed (nu=" + std::to_string(nu) +
                         ", x=" + std::to_string(x) +
                         "): " + gsl_strerror(status));
  }
  return r.val;
}

/// Modified Bessel function of the second kind K_nu(x).
inline double bessel_k(double nu, double x) {
  return std::exp(log_bessel_k(nu, x));
}

/// Ratio K_{nu1}(x) / K_{nu2}(x) evaluated through the log scale.
inline double bessel_k_ratio(double nu1, double nu2, double x) {
  return std::exp(log_bessel_k(nu1, x) - log_bessel_k(nu2, x));
}

}  // namespace wbi::math
