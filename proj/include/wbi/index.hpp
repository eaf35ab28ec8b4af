#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "wbi/errors.hpp"
#include "wbi/panel.hpp"

namespace wbi {

struct IndexOptions {
  /// Whether the zeroed base-year column enters the per-factor means and
  /// standard deviations (and the output series).
  bool include_base_year = true;
};

/// The composite index return series: per-factor standardization, equal
/// 1/sqrt(N) weighting, then rescaling by the grand mean and grand scale.
struct IndexSeries {
  std::vector<int> years;
  std::vector<double> values;        // r_t
  std::vector<double> standardized;  // R(t), before rescaling
  double grand_mean = 0.0;           // m, average of factor means
  double grand_scale = 0.0;          // s, average of factor standard deviations
  std::vector<double> factor_means;
  std::vector<double> factor_scales;

  void validate() const {
    if (values.size() != years.size() || standardized.size() != years.size())
      throw ValidationError("index: length mismatch");
    if (factor_means.size() != factor_scales.size() || factor_means.empty())
      throw ValidationError("index: factor statistics missing");
    double m = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < factor_means.size(); ++i) {
      m += factor_means[i];
      s += factor_scales[i];
    }
    m /= static_cast<double>(factor_means.size());
    s /= static_cast<double>(factor_scales.size());
    if (std::fabs(m - grand_mean) > 1e-12 * (1.0 + std::fabs(m)) ||
        std::fabs(s - grand_scale) > 1e-12 * (1.0 + std::fabs(s)))
      throw ValidationError("index: grand mean/scale inconsistent");
    for (std::size_t t = 0; t < values.size(); ++t) {
      const double rec = grand_mean + grand_scale * standardized[t];
      if (std::fabs(rec - values[t]) > 1e-12 * (1.0 + std::fabs(values[t])))
        throw ValidationError("index: r_t does not reproduce m + s*R(t)");
    }
  }
};

inline IndexSeries build_index(const ReturnPanel& panel,
                               const IndexOptions& opt = {}) {
  panel.validate();
  const std::size_t n_factors = panel.factor_count();
  const std::size_t t0 = opt.include_base_year ? 0 : 1;
  if (panel.year_count() <= t0 + 1)
    throw ValidationError("index: too few years");
  const std::size_t n_years = panel.year_count() - t0;

  IndexSeries out;
  out.years.assign(panel.years.begin() + static_cast<std::ptrdiff_t>(t0),
                   panel.years.end());
  out.factor_means.resize(n_factors);
  out.factor_scales.resize(n_factors);

  Eigen::MatrixXd z(static_cast<Eigen::Index>(n_factors),
                    static_cast<Eigen::Index>(n_years));
  for (std::size_t i = 0; i < n_factors; ++i) {
    double m = 0.0;
    for (std::size_t t = 0; t < n_years; ++t)
      m += panel.returns(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(t + t0));
    m /= static_cast<double>(n_years);
    double v = 0.0;
    for (std::size_t t = 0; t < n_years; ++t) {
      const double d = panel.returns(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(t + t0)) - m;
      v += d * d;
    }
    v /= static_cast<double>(n_years - 1);
    const double s = std::sqrt(v);
    if (!(s > 0.0))
      throw ValidationError("index: factor " + panel.factor_names[i] +
                            " has zero variance");
    out.factor_means[i] = m;
    out.factor_scales[i] = s;
    for (std::size_t t = 0; t < n_years; ++t) {
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          (panel.returns(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(t + t0)) -
           m) /
          s;
    }
  }

  out.grand_mean = 0.0;
  out.grand_scale = 0.0;
  for (std::size_t i = 0; i < n_factors; ++i) {
    out.grand_mean += out.factor_means[i];
    out.grand_scale += out.factor_scales[i];
  }
  out.grand_mean /= static_cast<double>(n_factors);
  out.grand_scale /= static_cast<double>(n_factors);

  const double w = 1.0 / std::sqrt(static_cast<double>(n_factors));
  out.standardized.resize(n_years);
  out.values.resize(n_years);
  for (std::size_t t = 0; t < n_years; ++t) {
    double r = 0.0;
    for (std::size_t i = 0; i < n_factors; ++i)
      r += z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
    out.standardized[t] = w * r;
    out.values[t] = out.grand_mean + out.grand_scale * out.standardized[t];
  }
  out.validate();
  return out;
}

/// Eigendecomposition of the factor-return correlation matrix.
struct PcaSummary {
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::VectorXd proportions;  // eigenvalue / N
  Eigen::VectorXd cumulative;
  Eigen::MatrixXd loadings;     // columns are components

  void validate() const {
    const Eigen::Index n = eigenvalues.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (eigenvalues(i) < -1e-10)
        throw ValidationError("pca: negative eigenvalue");
      if (i > 0 && eigenvalues(i) > eigenvalues(i - 1) + 1e-12)
        throw ValidationError("pca: eigenvalues not descending");
      sum += proportions(i);
    }
    if (std::fabs(sum - 1.0) > 1e-10)
      throw ValidationError("pca: proportions do not sum to 1");
  }
};

inline PcaSummary pca(const ReturnPanel& panel) {
  panel.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(panel.factor_count());
  const Eigen::Index t_count = static_cast<Eigen::Index>(panel.year_count());
  if (n < 2) throw ValidationError("pca: need at least 2 factors");
  if (t_count < 3) throw ValidationError("pca: need at least 3 observations");

  Eigen::VectorXd means = panel.returns.rowwise().mean();
  Eigen::MatrixXd centered = panel.returns.colwise() - means;
  Eigen::MatrixXd cov =
      centered * centered.transpose() / static_cast<double>(t_count - 1);
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sd(i) > 0.0))
      throw ValidationError("pca: factor " +
                            panel.factor_names[static_cast<std::size_t>(i)] +
                            " has zero variance");
  }
  Eigen::MatrixXd corr = cov.array() / (sd * sd.transpose()).array();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success)
    throw NumericalError("pca: eigendecomposition failed");

  PcaSummary out;
  out.eigenvalues.resize(n);
  out.loadings.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Eigen returns ascending order; flip to descending.
    out.eigenvalues(i) = std::max(solver.eigenvalues()(n - 1 - i), 0.0);
    out.loadings.col(i) = solver.eigenvectors().col(n - 1 - i);
    // sign convention: first nonzero loading positive
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::fabs(out.loadings(k, i)) > 1e-12) {
        if (out.loadings(k, i) < 0.0) out.loadings.col(i) = -out.loadings.col(i);
        break;
      }
    }
  }
  out.proportions = out.eigenvalues / static_cast<double>(n);
  out.cumulative.resize(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += out.proportions(i);
    out.cumulative(i) = acc;
  }
  // guard against rounding drift in the proportion sum
  const double total = out.eigenvalues.sum();
  if (std::fabs(total - static_cast<double>(n)) > 1e-8)
    throw NumericalError("pca: eigenvalue sum deviates from factor count");
  out.validate();
  return out;
}

}  // namespace wbi
