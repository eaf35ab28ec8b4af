#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "wbi/errors.hpp"

namespace wbi::math {

struct NelderMeadOptions {
  double ftol = 1e-10;      // absolute spread of simplex function values
  double xtol = 1e-9;       // simplex diameter
  std::size_t max_evals = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimization with adaptive coefficients
/// (Gao & Han scaling for higher dimensions). Deterministic for a given
/// start and step.
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, std::vector<double> step,
    const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty start point");
  if (step.size() != n) throw ValidationError("nelder_mead: step size mismatch");

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;    // expansion
  const double gamma = 0.75 - 0.5 / dn;  // contraction
  const double delta = 1.0 - 1.0 / dn;   // shrink

  std::vector<std::vector<double>> sim(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    sim[i + 1][i] += (step[i] != 0.0 ? step[i] : 1e-4);
  }

  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    const double v = f(p);
    return std::isfinite(v) ? v : 1e300;
  };

  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(sim[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = sim[order[i]];
      f2[i] = fv[order[i]];
    }
    sim.swap(s2);
    fv.swap(f2);
  };

  NelderMeadResult res;
  while (evals < opt.max_evals) {
    sort_simplex();

    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        diam = std::max(diam, std::fabs(sim[i][j] - sim[0][j]));
    }
    if (fv[n] - fv[0] < opt.ftol && diam < opt.xtol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += sim[i][j] / dn;

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + t * (centroid[j] - sim[n][j]);
      return p;
    };

    const auto xr = blend(alpha);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const auto xe = blend(alpha * beta);
      const double fe = eval(xe);
      if (fe < fr) {
        sim[n] = xe;
        fv[n] = fe;
      } else {
        sim[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      sim[n] = xr;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      const auto xc = blend(outside ? alpha * gamma : -gamma);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[n])) {
        sim[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            sim[i][j] = sim[0][j] + delta * (sim[i][j] - sim[0][j]);
          fv[i] = eval(sim[i]);
        }
      }
    }
  }

  sort_simplex();
  res.x = sim[0];
  res.fmin = fv[0];
  res.evals = evals;
  return res;
}

/// Golden-section maximization of a unimodal function on [a, b].
inline double golden_section_max(const std::function<double(double)>& f,
                                 double a, double b, double tol = 1e-10) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol * (1.0 + std::fabs(a) + std::fabs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t iterations = 0;
};

/// Bracketed root finding, bisection/secant hybrid (Brent). Requires
/// f(a) and f(b) of opposite sign.
inline RootResult brent_root(const std::function<double(double)>& f, double a,
                             double b, double fa, double fb,
                             double xtol = 1e-14, double ftol = 1e-13,
                             std::size_t max_iter = 200) {
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError("brent_root: endpoints do not bracket a root");

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  RootResult res;
  for (std::size_t it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || std::fabs(fb) <= ftol) break;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic / secant step
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  res.x = b;
  res.fx = fb;
  return res;
}

}  // namespace wbi::math
