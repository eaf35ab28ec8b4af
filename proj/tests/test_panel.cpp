#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "wbi/math/rng.hpp"
#include "wbi/panel.hpp"

namespace {

wbi::TextTable make_table(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  wbi::TextTable t;
  t.header = header;
  t.rows = rows;
  return t;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST(Panel, ThirteenFactorFullRange) {
  // 13 factors x 31 years, mirroring the production panel dimensions
  std::vector<std::string> header = {"year"};
  for (int i = 0; i < 13; ++i) header.push_back("F" + std::to_string(i));
  std::vector<std::vector<std::string>> rows;
  for (int y = 1986; y <= 2016; ++y) {
    std::vector<std::string> row = {std::to_string(y)};
    for (int i = 0; i < 13; ++i)
      row.push_back(wbi::format_double(100.0 + i + 0.1 * (y - 1986)));
    rows.push_back(row);
  }
  const auto p = wbi::panel_from_table(make_table(header, rows), {}, "mem");
  EXPECT_EQ(p.factor_count(), 13u);
  EXPECT_EQ(p.year_count(), 31u);
  EXPECT_EQ(p.years.front(), 1986);
  EXPECT_EQ(p.years.back(), 2016);
}

TEST(Panel, ConstantSingleFactor) {
  const auto t =
      make_table({"year", "A"}, {{"2000", "1"}, {"2001", "1"}, {"2002", "1"}});
  const auto p = wbi::panel_from_table(t, {}, "mem");
  EXPECT_EQ(p.factor_count(), 1u);
  EXPECT_EQ(p.year_count(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(p.values(0, k), 1.0);
  const auto r = wbi::to_log_returns(p);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(r.returns(0, k), 0.0);
}

TEST(Panel, YearGapIsRejected) {
  const auto t = make_table({"year", "A"}, {{"1986", "1"}, {"1988", "2"}});
  EXPECT_THROW(
      {
        try {
          wbi::panel_from_table(t, {}, "mem");
        } catch (const wbi::ValidationError& e) {
          EXPECT_NE(std::string(e.what()).find("1987"), std::string::npos);
          throw;
        }
      },
      wbi::ValidationError);
}

TEST(Panel, DiagnosticsNameFactorAndYear) {
  const auto bad_cell =
      make_table({"year", "A", "B"},
                 {{"2000", "1", "2"}, {"2001", "x", "3"}, {"2002", "2", "4"}});
  try {
    wbi::panel_from_table(bad_cell, {}, "mem");
    FAIL() << "expected ValidationError";
  } catch (const wbi::ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("A"), std::string::npos);
    EXPECT_NE(msg.find("2001"), std::string::npos);
  }

  const auto nonpos =
      make_table({"year", "A", "B"},
                 {{"2000", "1", "2"}, {"2001", "-4", "3"}, {"2002", "2", "4"}});
  try {
    wbi::panel_from_table(nonpos, {}, "mem");
    FAIL() << "expected ValidationError";
  } catch (const wbi::ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("non-positive"), std::string::npos);
    EXPECT_NE(msg.find("2001"), std::string::npos);
  }
}

TEST(Panel, MissingFactorColumn) {
  const auto t = make_table({"year", "A"}, {{"2000", "1"}, {"2001", "2"}});
  wbi::PanelConfig cfg;
  cfg.factors = {"A", "GDP"};
  EXPECT_THROW(wbi::panel_from_table(t, cfg, "mem"), wbi::ValidationError);
}

TEST(Panel, ConfigOrderIsRespected) {
  const auto t = make_table({"year", "A", "B", "C"},
                            {{"2000", "1", "2", "3"}, {"2001", "2", "3", "4"}});
  wbi::PanelConfig cfg;
  cfg.factors = {"C", "A"};
  const auto p = wbi::panel_from_table(t, cfg, "mem");
  ASSERT_EQ(p.factor_count(), 2u);
  EXPECT_EQ(p.factor_names[0], "C");
  EXPECT_EQ(p.factor_names[1], "A");
  EXPECT_DOUBLE_EQ(p.values(0, 0), 3.0);
}

TEST(Panel, YearRangeIntersection) {
  // A covers 2000-2003, B covers 2001-2004; common range is 2001-2003
  const auto t = make_table({"year", "A", "B"}, {{"2000", "1", ""},
                                                 {"2001", "2", "10"},
                                                 {"2002", "3", "11"},
                                                 {"2003", "4", "12"},
                                                 {"2004", "", "13"}});
  const auto p = wbi::panel_from_table(t, {}, "mem");
  EXPECT_EQ(p.years.front(), 2001);
  EXPECT_EQ(p.years.back(), 2003);

  // interior missing cell is a hard error, not imputed
  const auto holes = make_table({"year", "A", "B"}, {{"2001", "2", "10"},
                                                     {"2002", "", "11"},
                                                     {"2003", "4", "12"}});
  EXPECT_THROW(wbi::panel_from_table(holes, {}, "mem"), wbi::ValidationError);
}

TEST(Panel, ConfiguredYearWindow) {
  const auto t = make_table({"year", "A"}, {{"1999", "1"},
                                            {"2000", "2"},
                                            {"2001", "3"},
                                            {"2002", "4"}});
  wbi::PanelConfig cfg;
  cfg.year_min = 2000;
  cfg.year_max = 2001;
  const auto p = wbi::panel_from_table(t, cfg, "mem");
  EXPECT_EQ(p.year_count(), 2u);
  EXPECT_EQ(p.years.front(), 2000);
}

TEST(Panel, DefaultReversalSetIntersectsSilently) {
  const auto t = make_table({"year", "CPI", "GDP"},
                            {{"2000", "1", "2"}, {"2001", "2", "3"}});
  const auto p = wbi::panel_from_table(t, {}, "mem");
  EXPECT_TRUE(p.reverse_sign[0]);   // CPI is in the default set
  EXPECT_FALSE(p.reverse_sign[1]);  // GDP is not

  wbi::PanelConfig cfg;
  cfg.reversals = {"GDP", "Nope"};
  cfg.explicit_reversals = true;
  EXPECT_THROW(wbi::panel_from_table(t, cfg, "mem"), wbi::ValidationError);
  cfg.reversals = {"GDP"};
  const auto p2 = wbi::panel_from_table(t, cfg, "mem");
  EXPECT_FALSE(p2.reverse_sign[0]);
  EXPECT_TRUE(p2.reverse_sign[1]);
}

TEST(Returns, ExactLogs) {
  const double e = std::exp(1.0);
  const auto t = make_table(
      {"year", "A"}, {{"2000", "1"},
                      {"2001", wbi::format_double(e)},
                      {"2002", wbi::format_double(e * e * e)}});
  const auto p = wbi::panel_from_table(t, {}, "mem");
  const auto r = wbi::to_log_returns(p);
  EXPECT_DOUBLE_EQ(r.returns(0, 0), 0.0);
  EXPECT_NEAR(r.returns(0, 1), 1.0, 1e-14);
  EXPECT_NEAR(r.returns(0, 2), 2.0, 1e-14);
}

TEST(Returns, SignReversal) {
  const double e = std::exp(1.0);
  const auto t = make_table({"year", "A"},
                            {{"2000", "1"}, {"2001", wbi::format_double(e)}});
  wbi::PanelConfig cfg;
  cfg.reversals = {"A"};
  cfg.explicit_reversals = true;
  const auto r = wbi::to_log_returns(wbi::panel_from_table(t, cfg, "mem"));
  EXPECT_DOUBLE_EQ(r.returns(0, 0), 0.0);
  EXPECT_NEAR(r.returns(0, 1), -1.0, 1e-14);
}

TEST(Returns, FrozenTwoByThreeOracle) {
  // independent recomputation of a fixed 2x3 panel (B reversed)
  const auto t = make_table({"year", "A", "B"}, {{"2000", "1.7", "4.0"},
                                                 {"2001", "2.3", "3.1"},
                                                 {"2002", "1.9", "5.2"}});
  wbi::PanelConfig cfg;
  cfg.reversals = {"B"};
  cfg.explicit_reversals = true;
  const auto r = wbi::to_log_returns(wbi::panel_from_table(t, cfg, "mem"));
  EXPECT_NEAR(r.returns(0, 1), 0.3022808718729335, 1e-15);
  EXPECT_NEAR(r.returns(0, 2), -0.19105523676270922, 1e-15);
  EXPECT_NEAR(r.returns(1, 1), 0.25489224962879004, 1e-15);
  EXPECT_NEAR(r.returns(1, 2), -0.5172565140962812, 1e-15);
}

TEST(Returns, RoundTripReproducesLevels) {
  wbi::math::Rng rng(99);
  std::vector<std::vector<std::string>> rows;
  for (int y = 0; y < 12; ++y) {
    rows.push_back({std::to_string(1990 + y),
                    wbi::format_double(std::exp(rng.normal())),
                    wbi::format_double(std::exp(rng.normal()))});
  }
  const auto p =
      wbi::panel_from_table(make_table({"year", "A", "B"}, rows), {}, "mem");
  const auto r = wbi::to_log_returns(p);
  for (Eigen::Index i = 0; i < 2; ++i) {
    double cum = 0.0;
    for (Eigen::Index k = 0; k < r.returns.cols(); ++k) {
      cum += r.returns(i, k);
      const double rebuilt = p.values(i, 0) * std::exp(cum);
      EXPECT_NEAR(rebuilt, p.values(i, k), 1e-12 * std::fabs(p.values(i, k)));
    }
  }
}

TEST(Returns, ReversalInvolution) {
  const auto t = make_table(
      {"year", "A"}, {{"2000", "2.5"}, {"2001", "3.5"}, {"2002", "1.5"}});
  wbi::PanelConfig plain;
  plain.reversals = {};
  auto p = wbi::panel_from_table(t, plain, "mem");
  const auto r_plain = wbi::to_log_returns(p);
  p.reverse_sign[0] = true;
  const auto r_rev = wbi::to_log_returns(p);
  for (Eigen::Index k = 0; k < 3; ++k)
    EXPECT_DOUBLE_EQ(-r_rev.returns(0, k), r_plain.returns(0, k));
}

TEST(Returns, FileRoundTrip) {
  const auto t = make_table({"year", "A", "B"}, {{"2000", "1.5", "2.5"},
                                                 {"2001", "1.7", "2.2"},
                                                 {"2002", "1.6", "2.9"}});
  const auto p = wbi::panel_from_table(t, {}, "mem");
  const auto r = wbi::to_log_returns(p);
  const auto path = write_temp("wbi_returns_rt.csv", "");
  wbi::write_return_panel(path, r, {"test artifact"});
  const auto back = wbi::read_return_panel(path);
  ASSERT_EQ(back.factor_names, r.factor_names);
  ASSERT_EQ(back.years, r.years);
  for (Eigen::Index i = 0; i < r.returns.rows(); ++i)
    for (Eigen::Index k = 0; k < r.returns.cols(); ++k)
      EXPECT_DOUBLE_EQ(back.returns(i, k), r.returns(i, k));
  std::remove(path.c_str());
}

TEST(Returns, LoadPanelFromDisk) {
  const auto path = write_temp("wbi_panel_disk.csv",
                               "# synthetic levels\n"
                               "year,GDP,CPI\n"
                               "2000,100,50\n"
                               "2001,103,51\n"
                               "2002,101,53\n");
  const auto p = wbi::load_panel(path);
  EXPECT_EQ(p.factor_count(), 2u);
  EXPECT_TRUE(p.reverse_sign[1]);  // CPI reversed by default
  std::remove(path.c_str());
}
