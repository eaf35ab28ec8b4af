#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wbi/errors.hpp"
#include "wbi/math/bessel.hpp"
#include "wbi/math/optim.hpp"
#include "wbi/math/quadrature.hpp"
#include "wbi/math/rng.hpp"

namespace wbi {

enum class GHVariant { GH, VG, NIG };

inline const char* to_string(GHVariant v) {
  switch (v) {
    case GHVariant::GH: return "gh";
    case GHVariant::VG: return "vg";
    case GHVariant::NIG: return "nig";
  }
  return "?";
}

inline GHVariant gh_variant_from_string(const std::string& s) {
  if (s == "gh") return GHVariant::GH;
  if (s == "vg") return GHVariant::VG;
  if (s == "nig") return GHVariant::NIG;
  throw ValidationError("unknown distribution variant '" + s + "'");
}

/// Parameters (lambda, alpha, beta, delta, mu) of a univariate generalized
/// hyperbolic law. The VG special case has lambda > 0 and delta = 0; NIG has
/// lambda = -1/2 and delta > 0.
struct GHParams {
  GHVariant variant = GHVariant::GH;
  double lambda = 1.0;
  double alpha = 1.0;
  double beta = 0.0;
  double delta = 1.0;
  double mu = 0.0;

  static GHParams gh(double lambda, double alpha, double beta, double delta,
                     double mu) {
    GHParams p{GHVariant::GH, lambda, alpha, beta, delta, mu};
    p.validate();
    return p;
  }
  static GHParams vg(double lambda, double alpha, double beta, double mu) {
    GHParams p{GHVariant::VG, lambda, alpha, beta, 0.0, mu};
    p.validate();
    return p;
  }
  static GHParams nig(double alpha, double beta, double delta, double mu) {
    GHParams p{GHVariant::NIG, -0.5, alpha, beta, delta, mu};
    p.validate();
    return p;
  }

  void validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(alpha) ||
        !std::isfinite(beta) || !std::isfinite(delta) || !std::isfinite(mu))
      throw ValidationError("gh params: non-finite parameter");
    if (!(alpha > 0.0)) throw ValidationError("gh params: alpha must be > 0");
    if (!(alpha * alpha - beta * beta > 0.0))
      throw ValidationError("gh params: alpha^2 - beta^2 must be > 0");
    switch (variant) {
      case GHVariant::VG:
        if (!(lambda > 0.0))
          throw ValidationError("vg params: lambda must be > 0");
        if (delta != 0.0)
          throw ValidationError("vg params: delta must be 0");
        break;
      case GHVariant::NIG:
        if (lambda != -0.5)
          throw ValidationError("nig params: lambda must be -1/2");
        if (!(delta > 0.0))
          throw ValidationError("nig params: delta must be > 0");
        break;
      case GHVariant::GH:
        if (!(delta > 0.0))
          throw ValidationError("gh params: delta must be > 0");
        break;
    }
  }

  /// Exponential tilt: shifts the skewness parameter. Throws when the tilted
  /// law would leave the admissible set.
  GHParams tilted(double shift) const {
    GHParams p = *this;
    p.beta += shift;
    p.validate();
    return p;
  }
};

namespace ghdetail {

inline constexpr double kLog2Pi = 1.8378770664093454836;
inline constexpr double kLogPi = 1.1447298858494001741;

/// log of the x-free part of the GH log-density.
inline double log_norm_const(const GHParams& p) {
  const double g2 = p.alpha * p.alpha - p.beta * p.beta;
  if (p.variant == GHVariant::VG) {
    return p.lambda * std::log(g2) - 0.5 * kLogPi - std::lgamma(p.lambda) -
           (p.lambda - 0.5) * std::log(2.0 * p.alpha);
  }
  const double zeta = p.delta * std::sqrt(g2);
  return 0.5 * p.lambda * std::log(g2) - 0.5 * kLog2Pi -
         (p.lambda - 0.5) * std::log(p.alpha) - p.lambda * std::log(p.delta) -
         math::log_bessel_k(p.lambda, zeta);
}

}  // namespace ghdetail

/// Log-density of the GH law. For VG with lambda <= 1/2 the density diverges
/// at x = mu; +infinity is returned there.
inline double gh_log_density(const GHParams& p, double x) {
  p.validate();
  const double dx = x - p.mu;
  // far outside any support of interest; avoids overflow of dx^2 when
  // quadrature probes extreme abscissas
  if (std::fabs(dx) > 1e150) return -std::numeric_limits<double>::infinity();
  const double nu = p.lambda - 0.5;
  if (p.variant == GHVariant::VG) {
    const double ax = std::fabs(dx);
    const double z = p.alpha * ax;
    double kernel;
    if (z < 1e-12) {
      if (nu > 1e-10) {
        // limit of |dx|^nu K_nu(alpha |dx|) as dx -> 0
        kernel = (nu - 1.0) * std::log(2.0) + std::lgamma(nu) -
                 nu * std::log(p.alpha);
      } else {
        return std::numeric_limits<double>::infinity();
      }
    } else {
      kernel = nu * std::log(ax) + math::log_bessel_k(nu, z);
    }
    return ghdetail::log_norm_const(p) + kernel + p.beta * dx;
  }
  const double q = std::sqrt(p.delta * p.delta + dx * dx);
  return ghdetail::log_norm_const(p) + nu * std::log(q) +
         math::log_bessel_k(nu, p.alpha * q) + p.beta * dx;
}

inline double gh_density(const GHParams& p, double x) {
  return std::exp(gh_log_density(p, x));
}

/// log of the moment generating function; defined on |beta + u| < alpha.
inline double gh_log_mgf(const GHParams& p, double u) {
  p.validate();
  const double bu = p.beta + u;
  if (!(std::fabs(bu) < p.alpha))
    throw NumericalError(
        "gh mgf: u=" + std::to_string(u) +
        " lies outside the convergence strip (|beta+u| < alpha)");
  const double g2 = p.alpha * p.alpha - p.beta * p.beta;
  const double g2u = p.alpha * p.alpha - bu * bu;
  if (p.variant == GHVariant::VG) {
    return p.mu * u + p.lambda * (std::log(g2) - std::log(g2u));
  }
  return p.mu * u + 0.5 * p.lambda * (std::log(g2) - std::log(g2u)) +
         math::log_bessel_k(p.lambda, p.delta * std::sqrt(g2u)) -
         math::log_bessel_k(p.lambda, p.delta * std::sqrt(g2));
}

inline double gh_mgf(const GHParams& p, double u) {
  return std::exp(gh_log_mgf(p, u));
}

/// First two moments of the GIG/Gamma mixing law and of the GH law itself.
struct GHMoments {
  double mix_mean = 0.0;
  double mix_variance = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

inline GHMoments gh_moments(const GHParams& p) {
  p.validate();
  GHMoments m;
  const double psi = p.alpha * p.alpha - p.beta * p.beta;
  if (p.variant == GHVariant::VG) {
    // mixing law Gamma(lambda, rate psi/2)
    const double rate = 0.5 * psi;
    m.mix_mean = p.lambda / rate;
    m.mix_variance = p.lambda / (rate * rate);
  } else {
    const double chi = p.delta * p.delta;
    const double omega = std::sqrt(chi * psi);
    const double r1 = math::bessel_k_ratio(p.lambda + 1.0, p.lambda, omega);
    const double r2 = math::bessel_k_ratio(p.lambda + 2.0, p.lambda, omega);
    const double s = std::sqrt(chi / psi);
    m.mix_mean = s * r1;
    m.mix_variance = s * s * (r2 - r1 * r1);
  }
  m.mean = p.mu + p.beta * m.mix_mean;
  m.variance = m.mix_mean + p.beta * p.beta * m.mix_variance;
  return m;
}

/// Generalized inverse Gaussian sampler, density w^{lambda-1}
/// exp(-(chi/w + psi w)/2) for chi, psi > 0. Ratio-of-uniforms with mode
/// shift; the acceptance region is bounded, so expected iterations are O(1).
class GigSampler {
 public:
  GigSampler(double lambda, double chi, double psi)
      : lambda_(lambda), chi_(chi), psi_(psi) {
    if (!(chi > 0.0) || !(psi > 0.0))
      throw ValidationError("gig sampler: chi and psi must be > 0");
    mode_ = ((lambda - 1.0) +
             std::sqrt((lambda - 1.0) * (lambda - 1.0) + chi * psi)) /
            psi;
    log_g_mode_ = log_kernel(mode_);

    auto t_plus = [this](double w) {
      return std::log(w - mode_) + 0.5 * (log_kernel(w) - log_g_mode_);
    };
    auto t_minus = [this](double w) {
      return std::log(mode_ - w) + 0.5 * (log_kernel(w) - log_g_mode_);
    };

    // bracket the maximum of t_plus on (mode, inf) by doubling
    double hi = mode_ + std::max(mode_, 1.0 / psi_ + std::sqrt(chi_ / psi_));
    while (t_plus(2.0 * hi) > t_plus(hi)) {
      hi *= 2.0;
      if (hi > 1e300) throw NumericalError("gig sampler: unbounded support scan");
    }
    const double wp = scan_max(t_plus, mode_ * (1.0 + 1e-9) + 1e-300, 2.0 * hi);
    v_max_ = std::exp(t_plus(wp)) * (1.0 + 1e-9);

    const double wm = scan_max(t_minus, mode_ * 1e-12, mode_ * (1.0 - 1e-9));
    v_min_ = -std::exp(t_minus(wm)) * (1.0 + 1e-9);
  }

  double draw(math::Rng& rng) const {
    for (int it = 0; it < 100000; ++it) {
      const double u = rng.uniform();
      const double v = rng.uniform(v_min_, v_max_);
      const double w = mode_ + v / u;
      if (w <= 0.0) continue;
      if (2.0 * std::log(u) <= log_kernel(w) - log_g_mode_) return w;
    }
    throw NumericalError("gig sampler: rejection loop failed to accept");
  }

  double mode() const { return mode_; }

 private:
  double log_kernel(double w) const {
    return (lambda_ - 1.0) * std::log(w) - 0.5 * (chi_ / w + psi_ * w);
  }

  // coarse log-spaced scan followed by golden refinement
  static double scan_max(const std::function<double(double)>& f, double a,
                         double b) {
    const int n = 64;
    const double la = std::log(a);
    const double lb = std::log(b);
    int best = 0;
    double fbest = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double w = std::exp(la + (lb - la) * i / n);
      const double v = f(w);
      if (v > fbest) {
        fbest = v;
        best = i;
      }
    }
    const double lo = std::exp(la + (lb - la) * std::max(best - 1, 0) / n);
    const double hi = std::exp(la + (lb - la) * std::min(best + 1, n) / n);
    return math::golden_section_max(f, lo, hi, 1e-12);
  }

  double lambda_, chi_, psi_;
  double mode_ = 0.0;
  double log_g_mode_ = 0.0;
  double v_min_ = 0.0, v_max_ = 0.0;
};

/// Draws from the GH mixing law W (GIG for delta > 0, Gamma for VG).
class GHMixingSampler {
 public:
  explicit GHMixingSampler(const GHParams& p) : params_(p) {
    p.validate();
    const double psi = p.alpha * p.alpha - p.beta * p.beta;
    if (p.variant == GHVariant::VG) {
      gamma_rate_ = 0.5 * psi;
    } else {
      gig_.emplace(p.lambda, p.delta * p.delta, psi);
    }
  }

  double draw(math::Rng& rng) const {
    if (gig_) return gig_->draw(rng);
    return rng.gamma(params_.lambda) / gamma_rate_;
  }

 private:
  GHParams params_;
  std::optional<GigSampler> gig_;
  double gamma_rate_ = 1.0;
};

/// Seeded sampler for the GH law via the normal mean-variance mixture
/// X = mu + beta W + sqrt(W) Z.
class GHSampler {
 public:
  explicit GHSampler(const GHParams& p) : params_(p), mixing_(p) {}

  double draw(math::Rng& rng) const {
    const double w = mixing_.draw(rng);
    return params_.mu + params_.beta * w + std::sqrt(w) * rng.normal();
  }

 private:
  GHParams params_;
  GHMixingSampler mixing_;
};

inline std::vector<double> gh_sample(const GHParams& p, std::size_t n,
                                     std::uint64_t seed) {
  if (n < 1) throw ValidationError("gh_sample: n must be >= 1");
  GHSampler sampler(p);
  math::Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sampler.draw(rng);
  return out;
}

/// Integral of the density over [a, b]; splits at mu for VG where the
/// integrand may have an integrable singularity. The singular point itself
/// is reassigned a value of 0 (measure zero) so quadrature stays finite.
inline double gh_density_integral(const GHParams& p, double a, double b,
                                  double tol = 1e-9) {
  auto f = [&](double x) {
    const double v = gh_density(p, x);
    return std::isfinite(v) ? v : 0.0;
  };
  if (p.variant == GHVariant::VG && a < p.mu && p.mu < b) {
    return math::integrate_singular(f, a, p.mu, tol) +
           math::integrate_singular(f, p.mu, b, tol);
  }
  return math::integrate(f, a, b, tol);
}

/// Numeric CDF: piecewise quadrature of the density from a far-left anchor,
/// cached on a grid with monotone cubic interpolation (slopes are the exact
/// density values, Fritsch-Carlson limited).
class GHCdf {
 public:
  explicit GHCdf(const GHParams& p, std::size_t grid_size = 4001) : params_(p) {
    p.validate();
    const GHMoments mom = gh_moments(p);
    const double scale = std::sqrt(std::max(mom.variance, 1e-300));
    double left = mom.mean - 40.0 * scale;
    double right = mom.mean + 40.0 * scale;
    // widen until the tails are negligible
    for (int i = 0; i < 60 && gh_density(p, left) * scale > 1e-18; ++i)
      left -= 10.0 * scale;
    for (int i = 0; i < 60 && gh_density(p, right) * scale > 1e-18; ++i)
      right += 10.0 * scale;

    const std::size_t n0 = std::max<std::size_t>(grid_size, 101);
    x_.resize(n0);
    for (std::size_t i = 0; i < n0; ++i)
      x_[i] = left + (right - left) * static_cast<double>(i) /
                         static_cast<double>(n0 - 1);
    const bool vg = p.variant == GHVariant::VG;
    if (p.mu > left && p.mu < right) {
      // pin a node on mu so the VG kink/singularity sits on a boundary
      const std::size_t k = static_cast<std::size_t>(
          std::llround((p.mu - left) / (right - left) *
                       static_cast<double>(n0 - 1)));
      if (k > 0 && k + 1 < n0) x_[k] = p.mu;
      if (vg) {
        // geometric refinement toward mu: keeps the mass of the pieces
        // touching the (possibly singular) point negligible, so the
        // monotone interpolant stays accurate there
        const double step = (right - left) / static_cast<double>(n0 - 1);
        for (int j = 1; j <= 45; ++j) {
          const double off = step * std::pow(0.5, j);
          x_.push_back(p.mu - off);
          x_.push_back(p.mu + off);
        }
        std::sort(x_.begin(), x_.end());
        x_.erase(std::unique(x_.begin(), x_.end()), x_.end());
      }
    }

    const std::size_t n = x_.size();
    f_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = gh_density(p, x_[i]);
      f_[i] = std::isfinite(d) ? d : 0.0;  // singular node slope capped below
    }

    F_.resize(n);
    auto pdf = [&](double x) {
      const double v = gh_density(p, x);
      return std::isfinite(v) ? v : 0.0;
    };
    F_[0] = math::integrate(pdf, -math::kInf, x_[0], 1e-12, 8);
    for (std::size_t i = 1; i < n; ++i) {
      const bool singular = vg && (x_[i - 1] == p.mu || x_[i] == p.mu);
      const double piece =
          singular ? math::integrate_singular(pdf, x_[i - 1], x_[i], 1e-10)
                   : math::integrate_fixed(pdf, x_[i - 1], x_[i]);
      F_[i] = F_[i - 1] + piece;
    }
    total_mass_ =
        F_.back() + math::integrate(pdf, x_.back(), math::kInf, 1e-12, 8);

    // Fritsch-Carlson slope limiting keeps the interpolant monotone.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = x_[i + 1] - x_[i];
      const double d = (F_[i + 1] - F_[i]) / h;
      if (d <= 0.0) {
        f_[i] = 0.0;
        f_[i + 1] = 0.0;
        continue;
      }
      const double a = f_[i] / d;
      const double b = f_[i + 1] / d;
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double tau = 3.0 / std::sqrt(s);
        f_[i] *= tau;
        f_[i + 1] *= tau;
      }
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return F_.front();
    if (x >= x_.back()) return F_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double v = (2.0 * t3 - 3.0 * t2 + 1.0) * F_[i] +
                     (t3 - 2.0 * t2 + t) * h * f_[i] +
                     (-2.0 * t3 + 3.0 * t2) * F_[i + 1] +
                     (t3 - t2) * h * f_[i + 1];
    return std::clamp(v, 0.0, 1.0);
  }

  double quantile(double q) const {
    if (!(q > 0.0 && q < 1.0))
      throw ValidationError("gh quantile: level must lie in (0,1)");
    double lo = x_.front();
    double hi = x_.back();
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::fabs(lo)); ++i) {
      const double mid = 0.5 * (lo + hi);
      ((*this)(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  /// Total quadrature mass; should be 1 up to quadrature error.
  double total_mass() const { return total_mass_; }
  double support_left() const { return x_.front(); }
  double support_right() const { return x_.back(); }

 private:
  GHParams params_;
  std::vector<double> x_, F_, f_;
  double total_mass_ = 0.0;
};

}  // namespace wbi
