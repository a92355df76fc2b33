#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psl {

struct Predictors {
  double n = 0;
  double k = 0;
  double p = 0;
};

struct Point {
  Predictors x;
  double y = 0;
};

struct BasisFunction {
  const char* name;
  double (*eval)(const Predictors&);
};

struct BasisSpec {
  std::string name;
  std::vector<BasisFunction> functions;
};

namespace bases {

// Standard basis library over (n, k, p).
BasisFunction one();
BasisFunction n();
BasisFunction nlog2n();
BasisFunction p();
BasisFunction p2();
BasisFunction p3();
BasisFunction k();
BasisFunction k2();
BasisFunction k3();

BasisSpec nlog2n_model();         // {1, n*log2(n)}
BasisSpec linear_n_model();       // {1, n}
BasisSpec poly_in_p(int degree);  // {1, p, ..., p^degree}, degree in [1, 3]
BasisSpec poly_in_k(int degree);

// Lookup by report name (nlog2n, n_deg1, p_deg1..3, k_deg1..3); throws
// std::invalid_argument for unknown names.
BasisSpec named(const std::string& name);
std::vector<std::string> known_names();

}  // namespace bases

struct ModelFit {
  std::string model;
  std::vector<std::string> term_names;
  std::vector<double> coefficients;
  double r2 = 0;
  double adj_r2 = 0;
  double sse = 0;
  std::vector<double> residuals;
  bool has_intercept = false;
};

struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
  SingularityError(const std::string& msg, std::vector<std::string> cols)
      : std::runtime_error(msg), dependent_columns(std::move(cols)) {}
  std::vector<std::string> dependent_columns;
};

// Minimizes sum of squared residuals over the basis span via Householder QR
// with unit max-abs column scaling. Throws RankError when points < functions
// and SingularityError (naming the dependent columns) on rank deficiency.
ModelFit least_squares_fit(std::span<const Point> points, const BasisSpec& basis);

double predict(const ModelFit& fit, const Predictors& x);

struct SelectionReport {
  std::size_t chosen = 0;  // index into fits
  std::vector<ModelFit> fits;
};

// Highest adjusted R-squared wins; candidates within kAdjR2Tie of the best
// are tied and the tie breaks toward fewer basis functions.
inline constexpr double kAdjR2Tie = 1e-3;
SelectionReport select_model(std::span<const Point> points,
                             std::span<const BasisSpec> candidates);

// Aligned-text and CSV renderings of a selection report. reference_model, if
// nonempty, names the fit the source measurements were originally reported with, and
// the text flags whether the selection rule concurs.
std::string render_fit_report(const SelectionReport& report,
                              const std::string& reference_model = {});
std::string fit_report_csv(const SelectionReport& report);

}  // namespace psl
