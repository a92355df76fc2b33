#pragma once

#include <iosfwd>
#include <string>

#include "psl/anova.hpp"
#include "psl/statmodel.hpp"

namespace psl {

// Offline re-analysis of the bundled reference tables. Pure functions of the
// embedded data: no timing, no randomness.

struct ReproFitResult {
  SelectionReport report;
  std::string reference_model;  // fit the measurements were originally reported with
  bool rule_concurs = false;    // selection rule picked reference_model
  std::string text;
};

ReproFitResult repro_table1();  // {1, n log2 n} growth model on the n sweep
ReproFitResult repro_table2();  // degree-1 vs degree-2 in p
ReproFitResult repro_table3();  // degree-1/2/3 in k

struct ReproAnovaResult {
  FactorialDesign design;
  AnovaTable table;
  std::string text;
};

// Table-4 grid replicated x3 through the full-factorial ANOVA.
ReproAnovaResult repro_anova();

// target in {table1, table2, table3, anova, all}; writes the report(s) to
// out and returns 0. Throws std::invalid_argument for unknown targets.
int run_repro(const std::string& target, std::ostream& out);

}  // namespace psl
