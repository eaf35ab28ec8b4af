#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wbi/errors.hpp"
#include "wbi/ghdist.hpp"
#include "wbi/math/optim.hpp"
#include "wbi/math/stats.hpp"

namespace wbi {

struct FitOptions {
  /// Pin the location parameter (symmetry studies, centered residuals).
  std::optional<double> fix_mu;
  /// Stage-one subsample size for large data sets; the final optimum is
  /// always polished on the full sample.
  std::size_t subsample = 20000;
  std::size_t max_evals = 4000;
  int restarts = 5;  // perturbed restarts before declaring non-convergence
};

struct UnivariateFit {
  GHParams params;
  double loglik = 0.0;
  std::size_t evaluations = 0;
};

namespace ghdetail {

/// Per-point log-density with the normalization constant hoisted out of the
/// loop; |x - mu| is floored to keep the VG likelihood bounded when a data
/// point collides with the location parameter.
class LogLik {
 public:
  LogLik(std::span<const double> data, double floor_scale)
      : data_(data), floor_(floor_scale) {}

  double operator()(const GHParams& p) const {
    const double logc = log_norm_const(p);
    const double nu = p.lambda - 0.5;
    double ll = 0.0;
    if (p.variant == GHVariant::VG) {
      for (double x : data_) {
        double ax = std::fabs(x - p.mu);
        if (ax < floor_) ax = floor_;
        ll += logc + nu * std::log(ax) +
              math::log_bessel_k(nu, p.alpha * ax) + p.beta * (x - p.mu);
      }
      return ll;
    }
    for (double x : data_) {
      const double dx = x - p.mu;
      const double q = std::sqrt(p.delta * p.delta + dx * dx);
      ll += logc + nu * std::log(q) + math::log_bessel_k(nu, p.alpha * q) +
            p.beta * dx;
    }
    return ll;
  }

 private:
  std::span<const double> data_;
  double floor_;
};

/// Transform between the optimizer vector and constrained parameters.
/// Layout: [lambda-part?] [log(alpha-|beta|)] [beta] [log delta?] [mu?]
struct ParamCodec {
  GHVariant variant;
  std::optional<double> fix_mu;

  std::size_t size() const {
    std::size_t n = 2;                              // gap, beta
    if (variant != GHVariant::NIG) ++n;             // lambda
    if (variant != GHVariant::VG) ++n;              // delta
    if (!fix_mu) ++n;                               // mu
    return n;
  }

  std::vector<double> encode(const GHParams& p) const {
    std::vector<double> v;
    if (variant == GHVariant::GH) v.push_back(p.lambda);
    if (variant == GHVariant::VG) v.push_back(std::log(p.lambda));
    v.push_back(std::log(p.alpha - std::fabs(p.beta)));
    v.push_back(p.beta);
    if (variant != GHVariant::VG) v.push_back(std::log(p.delta));
    if (!fix_mu) v.push_back(p.mu);
    return v;
  }

  GHParams decode(const std::vector<double>& v) const {
    GHParams p;
    p.variant = variant;
    std::size_t i = 0;
    if (variant == GHVariant::GH) p.lambda = v[i++];
    else if (variant == GHVariant::VG) p.lambda = std::exp(v[i++]);
    else p.lambda = -0.5;
    const double gap = std::exp(v[i++]);
    p.beta = v[i++];
    p.alpha = std::fabs(p.beta) + gap;
    p.delta = (variant == GHVariant::VG) ? 0.0 : std::exp(v[i++]);
    p.mu = fix_mu ? *fix_mu : v[i++];
    return p;
  }
};

/// Moment-matched starting points.
inline std::vector<GHParams> moment_starts(std::span<const double> data,
                                           GHVariant variant,
                                           std::optional<double> fix_mu) {
  const double m = math::mean(data);
  const double v = std::max(math::variance(data), 1e-12);
  double kurt = 0.0;
  try {
    kurt = math::excess_kurtosis(data);
  } catch (const ValidationError&) {
  }
  kurt = std::clamp(kurt, 0.3, 30.0);
  const double mu0 = fix_mu.value_or(m);

  std::vector<GHParams> starts;
  auto push = [&](GHParams p) {
    try {
      p.validate();
      starts.push_back(p);
    } catch (const ValidationError&) {
    }
  };

  switch (variant) {
    case GHVariant::VG: {
      // VG excess kurtosis at beta = 0 is 3/lambda; variance is 2 lambda/psi
      for (double lam : {3.0 / kurt, 1.0, 2.5}) {
        const double psi = 2.0 * lam / v;
        push(GHParams{GHVariant::VG, lam, std::sqrt(psi), 0.0, 0.0, mu0});
      }
      break;
    }
    case GHVariant::NIG: {
      // NIG: Var = delta/gamma, excess kurtosis ~ 3/(delta gamma)
      const double dg = std::clamp(3.0 / kurt, 0.05, 50.0);
      const double delta = std::sqrt(v * dg);
      const double gamma = delta / v;
      for (double s : {1.0, 0.35, 3.0}) {
        push(GHParams{GHVariant::NIG, -0.5, gamma * s, 0.0, delta * s, mu0});
      }
      break;
    }
    case GHVariant::GH: {
      for (double lam : {-0.5, 0.5, 1.5}) {
        // omega = delta * gamma = 1; delta/gamma tuned to the variance
        const double r = math::bessel_k_ratio(lam + 1.0, lam, 1.0);
        const double t = v / r;
        push(GHParams{GHVariant::GH, lam, 1.0 / std::sqrt(t), 0.0,
                      std::sqrt(t), mu0});
      }
      break;
    }
  }
  if (starts.empty())
    throw NumericalError("gh fit: no admissible starting point");
  return starts;
}

inline std::string describe(const GHParams& p) {
  std::ostringstream os;
  os << to_string(p.variant) << "(lambda=" << p.lambda << ", alpha=" << p.alpha
     << ", beta=" << p.beta << ", delta=" << p.delta << ", mu=" << p.mu << ")";
  return os.str();
}

}  // namespace ghdetail

/// Maximum-likelihood fit of a GH-family law by direct numerical
/// maximization under constraint-enforcing transforms, multi-started from
/// moment-based initial values. Deterministic given data and options.
inline UnivariateFit fit_univariate(std::span<const double> data,
                                    GHVariant variant,
                                    const FitOptions& opt = {}) {
  if (data.size() < 10)
    throw ValidationError("gh fit: need at least 10 observations");
  for (double x : data) {
    if (!std::isfinite(x))
      throw ValidationError("gh fit: non-finite observation");
  }

  const double scale = std::sqrt(std::max(math::variance(data), 1e-12));
  const ghdetail::ParamCodec codec{variant, opt.fix_mu};
  const ghdetail::LogLik full(data, 1e-10 * scale);

  // stage one on a deterministic subsample keeps large fits affordable
  const bool staged = data.size() > opt.subsample;
  const std::span<const double> head =
      staged ? data.subspan(0, opt.subsample) : data;
  const ghdetail::LogLik stage_one(head, 1e-10 * scale);

  std::size_t evals = 0;
  auto objective = [&](const ghdetail::LogLik& ll) {
    return [&](const std::vector<double>& v) {
      GHParams p = codec.decode(v);
      try {
        p.validate();
      } catch (const ValidationError&) {
        return 1e300;
      }
      return -ll(p);
    };
  };

  auto run = [&](const ghdetail::LogLik& ll, const std::vector<double>& x0,
                 std::size_t max_evals) {
    math::NelderMeadOptions nm;
    nm.max_evals = max_evals;
    nm.ftol = 1e-9;
    nm.xtol = 1e-7;
    auto res = math::nelder_mead(objective(ll), x0,
                                 std::vector<double>(x0.size(), 0.25), nm);
    evals += res.evals;
    return res;
  };

  const auto starts = ghdetail::moment_starts(data, variant, opt.fix_mu);
  math::NelderMeadResult best;
  best.fmin = 1e301;
  for (const auto& s : starts) {
    const auto r = run(stage_one, codec.encode(s), opt.max_evals);
    if (r.fmin < best.fmin) best = r;
  }
  if (best.fmin >= 1e300)
    throw NumericalError("gh fit: likelihood not finite at any start");

  // polish on the full sample, then the retry ladder
  auto polished = run(full, best.x, opt.max_evals);
  bool converged = polished.converged;
  for (int k = 0; k < opt.restarts && !converged; ++k) {
    auto x = polished.x;
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] += (k % 2 == 0 ? 1.0 : -1.0) * 0.05 * (1.0 + std::fabs(x[j])) *
              static_cast<double>((j + k) % 3 + 1) / 3.0;
    const auto r = run(full, x, opt.max_evals);
    if (r.fmin <= polished.fmin) polished = r;
    converged = r.converged;
  }

  UnivariateFit fit;
  fit.params = codec.decode(polished.x);
  fit.params.validate();
  fit.loglik = -polished.fmin;
  fit.evaluations = evals;
  if (!converged) {
    throw NumericalError("gh fit: optimizer failed to converge; best so far " +
                         ghdetail::describe(fit.params) +
                         ", loglik=" + std::to_string(fit.loglik));
  }
  return fit;
}

/// Kolmogorov-Smirnov and Anderson-Darling tests against a fitted GH law.
/// The numeric CDF treats the parameters as known; estimation effects on the
/// p-values are deliberately ignored.
struct GofReport {
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  double ad_statistic = 0.0;
  double ad_pvalue = 0.0;
  std::size_t sample_size = 0;

  void validate() const {
    if (ks_statistic < 0.0 || ad_statistic < -1.0)
      throw NumericalError("gof: negative statistic");
    if (ks_pvalue < 0.0 || ks_pvalue > 1.0 || ad_pvalue < 0.0 ||
        ad_pvalue > 1.0)
      throw NumericalError("gof: p-value outside [0,1]");
  }
};

inline GofReport gof(std::span<const double> data, const GHParams& p) {
  if (data.empty()) throw ValidationError("gof: empty sample");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const GHCdf cdf(p);
  GofReport r;
  r.sample_size = sorted.size();
  r.ks_statistic =
      math::ks_statistic(sorted, [&](double x) { return cdf(x); });
  r.ks_pvalue = math::ks_pvalue(r.ks_statistic, sorted.size());
  r.ad_statistic =
      math::ad_statistic(sorted, [&](double x) { return cdf(x); });
  r.ad_pvalue = math::ad_pvalue(r.ad_statistic);
  r.validate();
  return r;
}

}  // namespace wbi
