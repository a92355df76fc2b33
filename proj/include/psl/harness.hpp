#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "psl/distgen.hpp"
#include "psl/sortcore.hpp"

namespace psl {

// Unseeded runs fall back to this fixed value rather than entropy, so a bare
// command line is still reproducible.
inline constexpr std::uint64_t kDefaultSeed = 1729;

enum class Measure { WallTime, Comparisons, Both };
enum class SortAlgo { Partition, Quicksort };
enum class ExecPolicy { Serial, Parallel };

// One timed run. For binomial cells the k column carries the trial count m.
struct TrialRecord {
  std::size_t n = 0;
  std::int64_t k = 0;
  double p = 0;
  int trial = 0;
  std::uint64_t seed = 0;   // dataset seed for this trial
  double elapsed_s = 0;     // wall time of the sort call only, whole ns
  std::uint64_t comparisons = 0;
  std::uint64_t swaps = 0;
};

struct CellSummary {
  std::size_t n = 0;
  std::int64_t k = 0;
  double p = 0;
  int trials = 0;
  double mean_time = 0;  // arithmetic mean of elapsed_s
  double sd_time = 0;    // sample standard deviation (n-1)
  double mean_comparisons = 0;
};

struct CellSpec {
  std::size_t n = 0;
  DistributionSpec dist;
};

struct RunOptions {
  Measure measure = Measure::Both;
  SortAlgo algo = SortAlgo::Partition;
  SelectKind strategy = SelectKind::Deterministic;
  int warmup = 0;              // unrecorded sorts before the trials of a cell
  bool reuse_dataset = false;  // re-sort copies of trial 0's dataset
  NbMethod nb_method = NbMethod::GeometricSum;
  // Test hook: replaces the sort under measurement (isolation checks).
  std::function<void(KeyArray&, SortStats&)> sorter_override;
};

struct CellResult {
  CellSummary summary;
  std::vector<TrialRecord> records;
};

CellSummary summarize_cell(std::span<const TrialRecord> records);

// Runs `trials` sorts of the cell. Every trial gets a fresh dataset from a
// seed derived from (master_seed, cell identity, trial index); generation is
// never timed. Timing wraps the sort call alone on a monotonic clock.
CellResult run_cell(const CellSpec& cell, int trials, std::uint64_t master_seed,
                    const RunOptions& opts = {});

struct ExperimentPlan {
  std::vector<std::size_t> n_levels;
  std::vector<std::int64_t> k_levels;
  std::vector<double> p_levels;
  bool binomial_family = false;  // negative binomial by default
  int trials = 100;
  std::uint64_t master_seed = kDefaultSeed;
  RunOptions options;

  std::vector<CellSpec> cells() const;  // n-major, then k, then p
  void validate() const;                // throws std::invalid_argument
};

struct GridResult {
  std::vector<CellSummary> summaries;  // cell order
  std::vector<TrialRecord> records;    // cell-major, trial order within cell
};

// Cells execute in parallel only in Comparisons mode (results are pure
// functions of derived seeds, so the output is identical to the serial
// path); any mode that records wall time runs strictly serially.
GridResult run_grid(const ExperimentPlan& plan,
                    ExecPolicy policy = ExecPolicy::Parallel);

// run_grid plus persistence: trials.csv, summary.csv, and, when exactly one
// grid axis varies, two-column x/mean plot files. Files are staged with a
// .partial suffix and renamed once complete; failures leave the .partial
// file behind and throw an error naming it.
GridResult run_grid_to_dir(const ExperimentPlan& plan,
                           const std::filesystem::path& out_dir,
                           ExecPolicy policy = ExecPolicy::Parallel);

enum class Axis { N, K, P };

struct MeanTable {
  Axis row_axis = Axis::N;
  Axis col_axis = Axis::K;
  std::vector<double> row_labels;
  std::vector<double> col_labels;
  std::vector<std::vector<double>> cells;  // [row][col] mean response
};

struct MissingCellError : std::runtime_error {
  MissingCellError(const std::string& msg, std::vector<std::string> cells)
      : std::runtime_error(msg), missing(std::move(cells)) {}
  std::vector<std::string> missing;
};

// Mean response per (row, col), averaged over every matching record.
// Requires the records to cover the full n x k x p grid of the distinct
// values they mention; throws MissingCellError naming absent combinations.
MeanTable summarize_table(std::span<const TrialRecord> records, Axis row_axis,
                          Axis col_axis, bool use_comparisons = false);

// Trial CSV. Header, exactly: n,k,p,trial,seed,elapsed_s,comparisons,swaps
// elapsed_s carries 9 fractional digits; everything else shortest decimal.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);
void write_trials_csv(const std::filesystem::path& path,
                      std::span<const TrialRecord> records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);
std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path);

void write_summary_csv(std::ostream& out, std::span<const CellSummary> cells);

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plan files: `[grid]` section with n/k/p level lists, `[run]` section with
// trials/seed/measure and friends; grammar documented in the README.
// Syntax problems report the line number, semantic problems name the field.
ExperimentPlan parse_plan(std::string_view text);
ExperimentPlan load_plan(const std::filesystem::path& path);

}  // namespace psl
