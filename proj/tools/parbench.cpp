// Compares the serial reference grid run against the OpenMP cell-parallel
// run in comparisons mode and checks the records are identical.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "psl/harness.hpp"

namespace {

double run_timed(const psl::ExperimentPlan& plan, psl::ExecPolicy policy,
                 psl::GridResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = psl::run_grid(plan, policy);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

bool same_records(const psl::GridResult& a, const psl::GridResult& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const psl::TrialRecord& x = a.records[i];
    const psl::TrialRecord& y = b.records[i];
    if (x.n != y.n || x.k != y.k || x.p != y.p || x.trial != y.trial ||
        x.seed != y.seed || x.elapsed_s != y.elapsed_s ||
        x.comparisons != y.comparisons || x.swaps != y.swaps)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel grid benchmark (comparisons mode)"};
  std::string plan_path;
  int trials = 5;
  std::uint64_t seed = psl::kDefaultSeed;
  app.add_option("--plan", plan_path, "plan file (measure forced to comparisons)");
  app.add_option("--trials", trials, "trials per cell (without --plan)");
  app.add_option("--seed", seed, "master seed (without --plan)");

  try {
    app.parse(argc, argv);

    psl::ExperimentPlan plan;
    if (!plan_path.empty()) {
      plan = psl::load_plan(plan_path);
    } else {
      plan.n_levels = {20000, 40000};
      plan.k_levels = {100, 1000};
      plan.p_levels = {0.3, 0.7};
      plan.trials = trials;
      plan.master_seed = seed;
    }
    plan.options.measure = psl::Measure::Comparisons;

#ifdef _OPENMP
    std::cout << "openmp threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "openmp: not enabled\n";
#endif
    std::cout << "cells: " << plan.cells().size() << "  trials/cell: "
              << plan.trials << "\n";

    psl::GridResult serial, parallel;
    const double ts = run_timed(plan, psl::ExecPolicy::Serial, serial);
    const double tp = run_timed(plan, psl::ExecPolicy::Parallel, parallel);
    const bool identical = same_records(serial, parallel);

    std::printf("serial:   %.3f s\n", ts);
    std::printf("parallel: %.3f s  (speedup %.2fx)\n", tp, ts / tp);
    std::cout << "records identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
