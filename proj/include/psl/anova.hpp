#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psl {

struct Factor {
  std::string name;
  std::vector<std::string> levels;  // ordered level labels
};

// Balanced full factorial: every level combination observed exactly
// `replicates` times. Needs >= 2 factors and >= 2 levels per factor.
struct FactorialDesign {
  std::vector<Factor> factors;
  int replicates = 1;
};

struct Observation {
  std::vector<int> level;  // one 0-based level index per factor
  double y = 0;
};

struct BalanceError : std::runtime_error {
  BalanceError(const std::string& msg, std::vector<std::string> cells)
      : std::runtime_error(msg), deficient_cells(std::move(cells)) {}
  std::vector<std::string> deficient_cells;
};

struct AnovaRow {
  std::string source;           // "n", "n*p", ..., "Error", "Total"
  std::vector<int> factor_set;  // indices into design.factors; empty for Error/Total
  int df = 0;
  double seq_ss = 0;
  double adj_ss = 0;  // equals seq_ss on balanced designs
  double adj_ms = 0;
  double f = 0;
  double p = 0;
  bool is_error = false;
  bool is_total = false;
  bool ms_defined = false;
  // F and P stay undefined when the error row has zero DF or zero SS; they
  // are rendered as '*', never as division results.
  bool f_defined = false;
};

struct AnovaTable {
  std::vector<AnovaRow> rows;  // effects by size then factor order, Error, Total
  double s = 0;                // root mean square error
  bool s_defined = false;
  double r_sq = 0;      // 1 - SS_error / SS_total
  double r_sq_adj = 0;  // 1 - MS_error / (SS_total / DF_total)
  bool r_sq_defined = false;
  bool r_sq_adj_defined = false;
  int total_runs = 0;
};

// Sums of squares for every main effect and interaction via the centered
// marginal-mean decomposition (definitional formulas, no grand-total
// shortcut). Observation order never matters. Throws BalanceError listing
// deficient cells when any level combination is missing or over-filled.
AnovaTable anova_full_factorial(const FactorialDesign& design,
                                std::span<const Observation> observations);

// Regularized incomplete beta I_x(a, b), continued fraction with the
// standard symmetry switch at x = (a+1)/(a+b+2). Absolute accuracy ~1e-12.
double reg_inc_beta(double x, double a, double b);

// Upper tail of the F(df1, df2) distribution: I_{df2/(df2+df1*F)}(df2/2, df1/2).
double f_pvalue(double f, int df1, int df2);

// GLM-style aligned text: design block, ANOVA table, S / R-Sq footer.
std::string render_anova(const FactorialDesign& design, const AnovaTable& table);
std::string anova_csv(const AnovaTable& table);

}  // namespace psl
