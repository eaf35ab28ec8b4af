#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wbi/errors.hpp"
#include "wbi/tabular.hpp"

namespace wbi {

/// Factors whose raw movements work against well-being; their log-returns
/// enter the index with the sign flipped. Override through PanelConfig.
inline const std::vector<std::string>& default_reversal_set() {
  static const std::vector<std::string> set = {
      "CPI",        "Unemploy",     "Inequality", "CrimeRate",
      "Uncertainty", "GenderParity", "VXO"};
  return set;
}

struct PanelConfig {
  /// Ordered factor selection; empty selects every file column in file order.
  std::vector<std::string> factors;
  /// Factors to flag for sign reversal. When explicit_reversals is set,
  /// naming an absent factor is an error; the default set is intersected
  /// with the available factors silently.
  std::vector<std::string> reversals = default_reversal_set();
  bool explicit_reversals = false;
  std::optional<int> year_min;
  std::optional<int> year_max;
};

/// Aligned multi-factor annual level series.
struct FactorPanel {
  std::vector<std::string> factor_names;
  std::vector<int> years;     // strictly increasing, contiguous
  Eigen::MatrixXd values;     // factor x year levels, strictly positive
  std::vector<bool> reverse_sign;

  std::size_t factor_count() const { return factor_names.size(); }
  std::size_t year_count() const { return years.size(); }

  void validate() const {
    if (factor_names.empty()) throw ValidationError("panel: no factors");
    if (years.empty()) throw ValidationError("panel: no years");
    if (values.rows() != static_cast<Eigen::Index>(factor_names.size()) ||
        values.cols() != static_cast<Eigen::Index>(years.size()))
      throw ValidationError("panel: value matrix shape mismatch");
    if (reverse_sign.size() != factor_names.size())
      throw ValidationError("panel: reversal flag count mismatch");
    for (std::size_t t = 1; t < years.size(); ++t) {
      if (years[t] != years[t - 1] + 1)
        throw ValidationError("panel: gap in years between " +
                              std::to_string(years[t - 1]) + " and " +
                              std::to_string(years[t]));
    }
    for (std::size_t i = 0; i < factor_names.size(); ++i) {
      for (std::size_t t = 0; t < years.size(); ++t) {
        const double v = values(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(t));
        if (!std::isfinite(v))
          throw ValidationError("panel: non-finite level for factor " +
                                factor_names[i] + " at year " +
                                std::to_string(years[t]));
        if (v <= 0.0)
          throw ValidationError("panel: non-positive level for factor " +
                                factor_names[i] + " at year " +
                                std::to_string(years[t]) + " (" +
                                format_double(v) + ")");
      }
    }
  }
};

/// Log-return panel. Same year axis as the level panel; the first (base)
/// year carries an exact zero return for every factor.
struct ReturnPanel {
  std::vector<std::string> factor_names;
  std::vector<int> years;
  Eigen::MatrixXd returns;  // factor x year

  std::size_t factor_count() const { return factor_names.size(); }
  std::size_t year_count() const { return years.size(); }

  void validate() const {
    if (factor_names.empty()) throw ValidationError("returns: no factors");
    if (returns.rows() != static_cast<Eigen::Index>(factor_names.size()) ||
        returns.cols() != static_cast<Eigen::Index>(years.size()))
      throw ValidationError("returns: matrix shape mismatch");
    for (std::size_t t = 1; t < years.size(); ++t) {
      if (years[t] != years[t - 1] + 1)
        throw ValidationError("returns: gap in years");
    }
    for (Eigen::Index i = 0; i < returns.rows(); ++i) {
      if (returns(i, 0) != 0.0)
        throw ValidationError("returns: base-year return of factor " +
                              factor_names[static_cast<std::size_t>(i)] +
                              " is not zero");
      for (Eigen::Index t = 0; t < returns.cols(); ++t) {
        if (!std::isfinite(returns(i, t)))
          throw ValidationError("returns: non-finite value for factor " +
                                factor_names[static_cast<std::size_t>(i)]);
      }
    }
  }
};

namespace detail {

struct RawColumn {
  std::string name;
  // per file row: parsed value or unset when the cell is blank
  std::vector<std::optional<double>> cells;
};

}  // namespace detail

/// Build a validated panel from an in-memory table. The table must carry a
/// leading year column; factor columns may be blank at the edges, in which
/// case the common (intersected) year range is used.
inline FactorPanel panel_from_table(const TextTable& t, const PanelConfig& cfg,
                                    const std::string& source) {
  if (t.header.size() < 2)
    throw ValidationError(source + ": need a year column and at least one factor");

  std::vector<int> file_years;
  file_years.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != t.header.size())
      throw ValidationError(source + ": row " + std::to_string(r + 2) +
                            " has " + std::to_string(t.rows[r].size()) +
                            " cells, expected " + std::to_string(t.header.size()));
    file_years.push_back(parse_int(t.rows[r][0], source + " year column"));
  }
  for (std::size_t r = 1; r < file_years.size(); ++r) {
    if (file_years[r] <= file_years[r - 1])
      throw ValidationError(source + ": years must be strictly increasing (" +
                            std::to_string(file_years[r - 1]) + " then " +
                            std::to_string(file_years[r]) + ")");
  }

  // Factor selection, in config order when given.
  std::vector<std::size_t> col_index;
  std::vector<std::string> names;
  if (cfg.factors.empty()) {
    for (std::size_t c = 1; c < t.header.size(); ++c) {
      col_index.push_back(c);
      names.push_back(t.header[c]);
    }
  } else {
    for (const auto& f : cfg.factors) {
      auto it = std::find(t.header.begin() + 1, t.header.end(), f);
      if (it == t.header.end())
        throw ValidationError(source + ": missing factor column '" + f + "'");
      col_index.push_back(static_cast<std::size_t>(it - t.header.begin()));
      names.push_back(f);
    }
  }

  // Parse cells; blanks are allowed only outside each factor's own range.
  std::vector<detail::RawColumn> cols(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    cols[i].name = names[i];
    cols[i].cells.resize(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& cell = t.rows[r][col_index[i]];
      if (cell.empty()) continue;
      cols[i].cells[r] = parse_double(
          cell, source + ", factor " + names[i] + ", year " +
                    std::to_string(file_years[r]));
    }
  }

  // Common year range: intersect per-factor spans, then the config range.
  int lo = file_years.front();
  int hi = file_years.back();
  for (const auto& col : cols) {
    std::size_t first = col.cells.size();
    std::size_t last = 0;
    for (std::size_t r = 0; r < col.cells.size(); ++r) {
      if (col.cells[r]) {
        if (first == col.cells.size()) first = r;
        last = r;
      }
    }
    if (first == col.cells.size())
      throw ValidationError(source + ": factor " + col.name + " has no data");
    lo = std::max(lo, file_years[first]);
    hi = std::min(hi, file_years[last]);
  }
  if (cfg.year_min) lo = std::max(lo, *cfg.year_min);
  if (cfg.year_max) hi = std::min(hi, *cfg.year_max);
  if (lo > hi)
    throw ValidationError(source + ": empty common year range after alignment");

  // Restrict to [lo, hi]; every year must be present exactly once.
  std::vector<std::size_t> row_of_year;
  std::vector<int> years;
  for (int y = lo; y <= hi; ++y) {
    auto it = std::find(file_years.begin(), file_years.end(), y);
    if (it == file_years.end())
      throw ValidationError(source + ": gap in years, missing year " +
                            std::to_string(y));
    row_of_year.push_back(static_cast<std::size_t>(it - file_years.begin()));
    years.push_back(y);
  }

  FactorPanel p;
  p.factor_names = names;
  p.years = years;
  p.values.resize(static_cast<Eigen::Index>(names.size()),
                  static_cast<Eigen::Index>(years.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t k = 0; k < years.size(); ++k) {
      const auto& cell = cols[i].cells[row_of_year[k]];
      if (!cell)
        throw ValidationError(source + ": missing value for factor " +
                              names[i] + " at year " +
                              std::to_string(years[k]));
      p.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          *cell;
    }
  }

  p.reverse_sign.assign(names.size(), false);
  for (const auto& rev : cfg.reversals) {
    auto it = std::find(names.begin(), names.end(), rev);
    if (it == names.end()) {
      if (cfg.explicit_reversals)
        throw ValidationError(source + ": reversal factor '" + rev +
                              "' is not a panel column");
      continue;
    }
    p.reverse_sign[static_cast<std::size_t>(it - names.begin())] = true;
  }

  p.validate();
  return p;
}

inline FactorPanel load_panel(const std::string& path,
                              const PanelConfig& cfg = {}) {
  return panel_from_table(read_table(path), cfg, path);
}

/// Log-return transform: r(i,t) = log P(i,t) - log P(i,t-1), negated for
/// reversed factors; the base year is kept as a zero column.
inline ReturnPanel to_log_returns(const FactorPanel& p) {
  p.validate();
  ReturnPanel r;
  r.factor_names = p.factor_names;
  r.years = p.years;
  r.returns.setZero(p.values.rows(), p.values.cols());
  for (Eigen::Index i = 0; i < p.values.rows(); ++i) {
    const double sign = p.reverse_sign[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    for (Eigen::Index t = 1; t < p.values.cols(); ++t) {
      r.returns(i, t) =
          sign * (std::log(p.values(i, t)) - std::log(p.values(i, t - 1)));
    }
  }
  r.validate();
  return r;
}

/// Write a return panel as year rows x factor columns.
inline void write_return_panel(const std::string& path, const ReturnPanel& r,
                               const std::vector<std::string>& provenance = {}) {
  TextTable t;
  t.comments = provenance;
  t.header.push_back("year");
  for (const auto& f : r.factor_names) t.header.push_back(f);
  for (std::size_t k = 0; k < r.years.size(); ++k) {
    std::vector<std::string> row;
    row.push_back(std::to_string(r.years[k]));
    for (Eigen::Index i = 0; i < r.returns.rows(); ++i)
      row.push_back(format_double(r.returns(i, static_cast<Eigen::Index>(k))));
    t.rows.push_back(std::move(row));
  }
  write_table(path, t);
}

inline ReturnPanel read_return_panel(const std::string& path) {
  const TextTable t = read_table(path);
  if (t.header.size() < 2)
    throw ValidationError(path + ": need a year column and at least one factor");
  ReturnPanel r;
  for (std::size_t c = 1; c < t.header.size(); ++c)
    r.factor_names.push_back(t.header[c]);
  r.returns.resize(static_cast<Eigen::Index>(r.factor_names.size()),
                   static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (t.rows[k].size() != t.header.size())
      throw ValidationError(path + ": ragged row " + std::to_string(k + 2));
    r.years.push_back(parse_int(t.rows[k][0], path + " year column"));
    for (std::size_t c = 1; c < t.header.size(); ++c) {
      r.returns(static_cast<Eigen::Index>(c - 1),
                static_cast<Eigen::Index>(k)) =
          parse_double(t.rows[k][c], path + ", factor " + t.header[c] +
                                         ", year " + t.rows[k][0]);
    }
  }
  r.validate();
  return r;
}

}  // namespace wbi
