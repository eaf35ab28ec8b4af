#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <limits>

namespace wbi::math {

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Infinite bounds are
/// allowed (pass +-infinity).
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-10,
                 unsigned max_depth = 12) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, tol);
}

/// Non-adaptive 15-point Gauss-Legendre rule; for short smooth pieces where
/// adaptive refinement would chase unreachable relative tolerances.
template <class F>
double integrate_fixed(const F& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

/// tanh-sinh integration of f over [a, b]; handles integrable endpoint
/// singularities.
template <class F>
double integrate_singular(const F& f, double a, double b, double tol = 1e-10) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b, tol);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace wbi::math
