#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "psl/anova.hpp"
#include "psl/rng.hpp"
#include "support/oracles.hpp"

using psl::AnovaTable;
using psl::FactorialDesign;
using psl::Observation;

namespace {

// Hand fixture: A (2 levels) x B (3 levels), 2 replicates. Reference values
// computed with an independent statistics package and frozen.
FactorialDesign fixture_design() {
  return {{{"A", {"a0", "a1"}}, {"B", {"b0", "b1", "b2"}}}, 2};
}

std::vector<Observation> fixture_observations() {
  const double vals[2][3][2] = {{{3.1, 3.3}, {4.0, 4.4}, {5.2, 5.0}},
                                {{6.1, 5.9}, {5.5, 5.7}, {7.0, 7.4}}};
  std::vector<Observation> obs;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 2; ++r) obs.push_back({{i, j}, vals[i][j][r]});
  return obs;
}

const psl::AnovaRow& row_named(const AnovaTable& table, const std::string& s) {
  for (const auto& row : table.rows)
    if (row.source == s) return row;
  FAIL("missing row ", s);
  return table.rows.front();
}

}  // namespace

TEST_CASE("two-factor fixture matches frozen reference values") {
  const auto table =
      psl::anova_full_factorial(fixture_design(), fixture_observations());
  REQUIRE(table.rows.size() == 5);
  CHECK(table.rows[0].source == "A");
  CHECK(table.rows[1].source == "B");
  CHECK(table.rows[2].source == "A*B");
  CHECK(table.rows[3].is_error);
  CHECK(table.rows[4].is_total);

  const auto& a = row_named(table, "A");
  const auto& b = row_named(table, "B");
  const auto& ab = row_named(table, "A*B");
  const auto& err = row_named(table, "Error");
  const auto& total = row_named(table, "Total");

  CHECK(a.df == 1);
  CHECK(b.df == 2);
  CHECK(ab.df == 2);
  CHECK(err.df == 6);
  CHECK(total.df == 11);

  CHECK(a.seq_ss == doctest::Approx(13.23).epsilon(1e-10));
  CHECK(b.seq_ss == doctest::Approx(5.40666666666667).epsilon(1e-10));
  CHECK(ab.seq_ss == doctest::Approx(0.98).epsilon(1e-10));
  CHECK(err.seq_ss == doctest::Approx(0.24).epsilon(1e-10));
  CHECK(total.seq_ss == doctest::Approx(19.856666666666666).epsilon(1e-10));
  for (const auto& row : {a, b, ab}) CHECK(row.adj_ss == row.seq_ss);

  REQUIRE(a.f_defined);
  CHECK(a.f == doctest::Approx(330.75).epsilon(1e-9));
  CHECK(b.f == doctest::Approx(67.58333333333333).epsilon(1e-9));
  CHECK(ab.f == doctest::Approx(12.25).epsilon(1e-9));
  CHECK(a.p == doctest::Approx(1.7795256560823163e-06).epsilon(1e-9));
  CHECK(b.p == doctest::Approx(7.678162006002636e-05).epsilon(1e-9));
  CHECK(ab.p == doctest::Approx(0.00761297201087316).epsilon(1e-9));

  REQUIRE(table.s_defined);
  CHECK(table.s == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(table.r_sq == doctest::Approx(0.987913379217727).epsilon(1e-12));
  CHECK(table.r_sq_adj == doctest::Approx(0.9778411952324996).epsilon(1e-12));
}

TEST_CASE("observation order never matters") {
  auto obs = fixture_observations();
  const auto base = psl::anova_full_factorial(fixture_design(), obs);
  std::mt19937 urng(12345);
  for (int rep = 0; rep < 5; ++rep) {
    std::shuffle(obs.begin(), obs.end(), urng);
    const auto shuffled = psl::anova_full_factorial(fixture_design(), obs);
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
      CHECK(shuffled.rows[i].seq_ss ==
            doctest::Approx(base.rows[i].seq_ss).epsilon(1e-12));
      CHECK(shuffled.rows[i].df == base.rows[i].df);
    }
  }
}

TEST_CASE("sums of squares add up on random balanced designs") {
  psl::RngStream rng(31337);
  for (int rep = 0; rep < 30; ++rep) {
    const int nfactors = 2 + static_cast<int>(rng.next_below(2));
    FactorialDesign design;
    design.replicates = 1 + static_cast<int>(rng.next_below(3));
    for (int f = 0; f < nfactors; ++f) {
      psl::Factor factor;
      factor.name = std::string(1, static_cast<char>('A' + f));
      const int levels = 2 + static_cast<int>(rng.next_below(3));
      for (int l = 0; l < levels; ++l)
        factor.levels.push_back(factor.name + std::to_string(l));
      design.factors.push_back(factor);
    }

    std::vector<Observation> obs;
    std::vector<int> level(nfactors, 0);
    for (;;) {
      for (int r = 0; r < design.replicates; ++r)
        obs.push_back({level, 10 * rng.next_unit() - 5});
      int f = nfactors - 1;
      while (f >= 0) {
        if (++level[f] < static_cast<int>(design.factors[f].levels.size())) break;
        level[f--] = 0;
      }
      if (f < 0) break;
    }

    const auto table = psl::anova_full_factorial(design, obs);
    double effect_ss = 0;
    int effect_df = 0;
    double err_ss = 0, total_ss = 0;
    int err_df = 0, total_df = 0;
    for (const auto& row : table.rows) {
      if (row.is_total) {
        total_ss = row.seq_ss;
        total_df = row.df;
      } else if (row.is_error) {
        err_ss = row.seq_ss;
        err_df = row.df;
      } else {
        effect_ss += row.seq_ss;
        effect_df += row.df;
      }
    }
    CHECK(std::fabs(effect_ss + err_ss - total_ss) <=
          1e-12 * std::max(1.0, total_ss));
    CHECK(effect_df + err_df == total_df);
    CHECK(total_df == static_cast<int>(obs.size()) - 1);
  }
}

TEST_CASE("three factors produce the canonical row order") {
  FactorialDesign design{
      {{"n", {"1", "2"}}, {"p", {"1", "2"}}, {"k", {"1", "2"}}}, 1};
  std::vector<Observation> obs;
  int v = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) obs.push_back({{a, b, c}, static_cast<double>(v += 3)});
  const auto table = psl::anova_full_factorial(design, obs);
  const std::vector<std::string> want{"n",   "p",   "k",     "n*p",  "n*k",
                                      "p*k", "n*p*k", "Error", "Total"};
  REQUIRE(table.rows.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(table.rows[i].source == want[i]);
}

TEST_CASE("single replicate leaves F, S, and adjusted R-sq undefined") {
  FactorialDesign design{{{"A", {"x", "y"}}, {"B", {"x", "y"}}}, 1};
  std::vector<Observation> obs{
      {{0, 0}, 1}, {{0, 1}, 2}, {{1, 0}, 4}, {{1, 1}, 9}};
  const auto table = psl::anova_full_factorial(design, obs);
  const auto& err = row_named(table, "Error");
  CHECK(err.df == 0);
  for (const auto& row : table.rows)
    if (!row.is_error && !row.is_total) {
      CHECK(row.ms_defined);
      CHECK(!row.f_defined);
    }
  CHECK(!table.s_defined);
  CHECK(table.r_sq_defined);
  CHECK(!table.r_sq_adj_defined);
  const std::string text = psl::render_anova(design, table);
  CHECK(text.find(" *") != std::string::npos);
}

TEST_CASE("an exact fit leaves F undefined rather than infinite") {
  FactorialDesign design{{{"A", {"x", "y"}}, {"B", {"x", "y"}}}, 2};
  std::vector<Observation> obs;
  const double cell_y[2][2] = {{1, 5}, {2, 8}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r) obs.push_back({{a, b}, cell_y[a][b]});
  const auto table = psl::anova_full_factorial(design, obs);
  const auto& err = row_named(table, "Error");
  CHECK(err.df == 4);
  CHECK(err.seq_ss == 0.0);
  for (const auto& row : table.rows)
    if (!row.is_error && !row.is_total) CHECK(!row.f_defined);
  CHECK(table.r_sq == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("imbalance raises BalanceError naming the cells") {
  FactorialDesign design{{{"A", {"x", "y"}}, {"B", {"u", "v"}}}, 2};
  std::vector<Observation> obs;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r) obs.push_back({{a, b}, 1.0});
  obs.pop_back();
  obs.push_back({{0, 0}, 3.0});
  try {
    psl::anova_full_factorial(design, obs);
    FAIL("expected BalanceError");
  } catch (const psl::BalanceError& e) {
    CHECK(std::string(e.what()).find("deficient") != std::string::npos);
    REQUIRE(e.deficient_cells.size() == 2);
    CHECK(e.deficient_cells[0] == "A=x B=u: got 3, want 2");
    CHECK(e.deficient_cells[1] == "A=y B=v: got 1, want 2");
  }
}

TEST_CASE("design validation rejects malformed inputs") {
  const auto obs = fixture_observations();
  FactorialDesign one_factor{{{"A", {"x", "y"}}}, 2};
  CHECK_THROWS_AS(psl::anova_full_factorial(one_factor, obs),
                  std::invalid_argument);

  FactorialDesign one_level{{{"A", {"x"}}, {"B", {"u", "v"}}}, 2};
  CHECK_THROWS_AS(psl::anova_full_factorial(one_level, obs),
                  std::invalid_argument);

  FactorialDesign bad_reps = fixture_design();
  bad_reps.replicates = 0;
  CHECK_THROWS_AS(psl::anova_full_factorial(bad_reps, obs),
                  std::invalid_argument);

  std::vector<Observation> short_level{{{0}, 1.0}};
  CHECK_THROWS_AS(psl::anova_full_factorial(fixture_design(), short_level),
                  std::invalid_argument);

  std::vector<Observation> out_of_range{{{0, 5}, 1.0}};
  CHECK_THROWS_AS(psl::anova_full_factorial(fixture_design(), out_of_range),
                  std::invalid_argument);
}

TEST_CASE("reg_inc_beta frozen values and identities") {
  CHECK(psl::reg_inc_beta(0.3, 2.5, 7) ==
        doctest::Approx(0.6412224629717214).epsilon(1e-12));
  CHECK(psl::reg_inc_beta(0.7, 27, 1.5) ==
        doctest::Approx(0.00022253673377846378).epsilon(1e-12));
  CHECK(psl::reg_inc_beta(0.2, 0.5, 0.5) ==
        doctest::Approx(0.2951672353008665).epsilon(1e-12));
  CHECK(psl::reg_inc_beta(0.0, 3, 4) == 0.0);
  CHECK(psl::reg_inc_beta(1.0, 3, 4) == 1.0);

  for (double x = 0.05; x < 1.0; x += 0.05)
    CHECK(psl::reg_inc_beta(x, 1, 1) == doctest::Approx(x).epsilon(1e-13));

  psl::RngStream rng(555);
  for (int i = 0; i < 30; ++i) {
    const double a = 0.2 + 10 * rng.next_unit();
    const double b = 0.2 + 10 * rng.next_unit();
    const double x = rng.next_unit();
    CHECK(psl::reg_inc_beta(x, a, b) + psl::reg_inc_beta(1 - x, b, a) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }

  double prev = -1;
  for (double x = 0.0; x <= 1.0; x += 0.02) {
    const double v = psl::reg_inc_beta(x, 3.5, 2.25);
    CHECK(v >= prev);
    prev = v;
  }

  CHECK_THROWS_AS(psl::reg_inc_beta(-0.1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(psl::reg_inc_beta(1.1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(psl::reg_inc_beta(0.5, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(psl::reg_inc_beta(0.5, 2, -1), std::invalid_argument);
}

TEST_CASE("reg_inc_beta agrees with direct quadrature") {
  for (double a : {1.5, 2.0, 5.0})
    for (double b : {1.0, 2.5, 3.0})
      for (double x : {0.2, 0.5, 0.8})
        CHECK(psl::reg_inc_beta(x, a, b) ==
              doctest::Approx(oracle::reg_inc_beta_quad(x, a, b)).epsilon(1e-9));
}

TEST_CASE("f_pvalue frozen values and edge cases") {
  CHECK(psl::f_pvalue(1.77367e8, 2, 54) ==
        doctest::Approx(8.457727659239538e-185).epsilon(1e-10));
  CHECK(psl::f_pvalue(3.5, 4, 54) ==
        doctest::Approx(0.012993220784207256).epsilon(1e-11));
  CHECK(psl::f_pvalue(2.0, 8, 54) ==
        doctest::Approx(0.06390161792088977).epsilon(1e-11));
  CHECK(psl::f_pvalue(0.0, 3, 10) == 1.0);
  CHECK(psl::f_pvalue(std::numeric_limits<double>::infinity(), 3, 10) == 0.0);

  double prev = 1.1;
  for (double f : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double v = psl::f_pvalue(f, 4, 20);
    CHECK(v < prev);
    prev = v;
  }

  CHECK_THROWS_AS(psl::f_pvalue(1.0, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(psl::f_pvalue(1.0, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(psl::f_pvalue(-1.0, 5, 5), std::invalid_argument);
}

TEST_CASE("render_anova lays out the full report") {
  const auto design = fixture_design();
  const auto table = psl::anova_full_factorial(design, fixture_observations());
  const std::string text = psl::render_anova(design, table);

  CHECK(text.find("Analysis of Variance") != std::string::npos);
  CHECK(text.find("Factor") != std::string::npos);
  CHECK(text.find("Levels") != std::string::npos);
  CHECK(text.find("fixed") != std::string::npos);
  CHECK(text.find("Source") != std::string::npos);
  CHECK(text.find("A*B") != std::string::npos);
  CHECK(text.find("Error") != std::string::npos);
  CHECK(text.find("Total") != std::string::npos);
  CHECK(text.find("S = 0.2 ") != std::string::npos);
  CHECK(text.find("R-Sq = 98.79%") != std::string::npos);
  CHECK(text.find("R-Sq(adj) = 97.78%") != std::string::npos);
  CHECK(text.find("330.75") != std::string::npos);
  CHECK(text.find("0.008") != std::string::npos);

  // No line ends in trailing blanks and nothing overflows oddly.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    if (nl > pos) CHECK(text[nl - 1] != ' ');
    pos = nl + 1;
  }
}

TEST_CASE("anova_csv mirrors the table with stars as blanks") {
  const auto design = fixture_design();
  const auto table = psl::anova_full_factorial(design, fixture_observations());
  const std::string csv = psl::anova_csv(table);
  CHECK(csv.rfind("source,df,seq_ss,adj_ss,adj_ms,f,p", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  FactorialDesign single{{{"A", {"x", "y"}}, {"B", {"u", "v"}}}, 1};
  std::vector<Observation> obs{
      {{0, 0}, 1}, {{0, 1}, 2}, {{1, 0}, 4}, {{1, 1}, 9}};
  const std::string undef = psl::anova_csv(psl::anova_full_factorial(single, obs));
  CHECK(undef.find(",,") != std::string::npos);
}

TEST_CASE("large F statistics render in scientific notation") {
  // Means differ hugely against a tiny but nonzero error term.
  FactorialDesign design{{{"A", {"x", "y"}}, {"B", {"u", "v"}}}, 2};
  std::vector<Observation> obs;
  const double eps = 1e-7;
  const double cell_y[2][2] = {{1, 2}, {3, 5}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      obs.push_back({{a, b}, cell_y[a][b] - eps});
      obs.push_back({{a, b}, cell_y[a][b] + eps});
    }
  const auto table = psl::anova_full_factorial(design, obs);
  REQUIRE(row_named(table, "A").f_defined);
  CHECK(row_named(table, "A").f > 1e7);
  const std::string text = psl::render_anova(design, table);
  CHECK(text.find("E+") != std::string::npos);
}
