#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psl/harness.hpp"
#include "psl/ref_tables.hpp"
#include "psl/repro.hpp"

namespace {

using namespace psl;

std::string dshort(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Writes to path when nonempty, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (file_.is_open() && !file_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream file_;
};

KeyArray read_keys(std::istream& in) {
  KeyArray keys;
  Key v;
  while (in >> v) keys.push_back(v);
  if (!in.eof())
    throw std::runtime_error("bad key after " + std::to_string(keys.size()) +
                             " values");
  return keys;
}

struct GenArgs {
  std::size_t n = 0;
  std::string family = "nb";
  std::int64_t k = 1000;
  double p = 0.5;
  Key lo = 0;
  Key hi = 0;
  std::uint64_t seed = kDefaultSeed;
  NbMethod method = NbMethod::GeometricSum;
  std::string out;
};

void run_gen(const GenArgs& args) {
  DistributionSpec spec;
  if (args.family == "nb")
    spec = NegBinomial{args.k, args.p};
  else if (args.family == "binomial")
    spec = Binomial{args.k, args.p};
  else if (args.family == "uniform")
    spec = UniformInt{args.lo, args.hi};
  else
    throw std::invalid_argument("gen: unknown family " + args.family);
  const KeyArray keys = generate_dataset(spec, args.n, args.seed, args.method);
  OutputTarget target(args.out);
  for (Key v : keys) target.stream() << v << "\n";
  target.finish();
}

struct SortArgs {
  std::string in;
  std::string out;
  SortAlgo algo = SortAlgo::Partition;
  SelectKind strategy = SelectKind::Deterministic;
  std::uint64_t seed = kDefaultSeed;
};

void run_sort(const SortArgs& args) {
  KeyArray keys;
  if (args.in.empty()) {
    keys = read_keys(std::cin);
  } else {
    std::ifstream in(args.in);
    if (!in) throw std::runtime_error("cannot open " + args.in);
    keys = read_keys(in);
  }
  SortStats stats;
  const auto t0 = std::chrono::steady_clock::now();
  if (args.algo == SortAlgo::Quicksort)
    stats = quicksort_baseline(keys, args.seed);
  else
    stats = partition_sort(keys, {args.strategy, args.seed});
  const auto t1 = std::chrono::steady_clock::now();
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
  const bool sorted = std::is_sorted(keys.begin(), keys.end());

  if (!args.out.empty()) {
    OutputTarget target(args.out);
    for (Key v : keys) target.stream() << v << "\n";
    target.finish();
  }
  char elapsed[64];
  std::snprintf(elapsed, sizeof elapsed, "%.9f",
                static_cast<double>(ns.count()) / 1e9);
  std::cout << "n=" << keys.size() << " elapsed_s=" << elapsed
            << " comparisons=" << stats.comparisons << " swaps=" << stats.swaps
            << " max_depth=" << stats.max_depth
            << " sorted=" << (sorted ? "yes" : "NO") << "\n";
  if (!sorted) throw std::runtime_error("output not sorted");
}

struct BenchArgs {
  std::string plan_path;
  std::vector<std::size_t> n_levels;
  std::vector<std::int64_t> k_levels;
  std::vector<double> p_levels;
  std::string family = "negbinomial";
  int trials = 100;
  std::uint64_t seed = kDefaultSeed;
  Measure measure = Measure::Both;
  SortAlgo algo = SortAlgo::Partition;
  SelectKind strategy = SelectKind::Deterministic;
  NbMethod method = NbMethod::GeometricSum;
  int warmup = 0;
  bool reuse = false;
  bool serial = false;
  std::string out_dir;
};

void run_bench(const BenchArgs& args, const CLI::App* cmd) {
  ExperimentPlan plan;
  if (!args.plan_path.empty()) {
    plan = load_plan(args.plan_path);
    // explicit flags override the plan file
    if (cmd->count("--trials")) plan.trials = args.trials;
    if (cmd->count("--seed")) plan.master_seed = args.seed;
    if (cmd->count("--measure")) plan.options.measure = args.measure;
    if (cmd->count("--algo")) plan.options.algo = args.algo;
    if (cmd->count("--strategy")) plan.options.strategy = args.strategy;
    if (cmd->count("--warmup")) plan.options.warmup = args.warmup;
    if (cmd->count("--method")) plan.options.nb_method = args.method;
    if (cmd->count("--reuse")) plan.options.reuse_dataset = args.reuse;
  } else {
    if (args.n_levels.empty() || args.k_levels.empty() || args.p_levels.empty())
      throw std::invalid_argument(
          "bench: give --plan or all of --n, --k and --p");
    plan.n_levels = args.n_levels;
    plan.k_levels = args.k_levels;
    plan.p_levels = args.p_levels;
    plan.binomial_family = args.family == "binomial";
    plan.trials = args.trials;
    plan.master_seed = args.seed;
    plan.options.measure = args.measure;
    plan.options.algo = args.algo;
    plan.options.strategy = args.strategy;
    plan.options.warmup = args.warmup;
    plan.options.nb_method = args.method;
    plan.options.reuse_dataset = args.reuse;
  }
  const ExecPolicy policy =
      args.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  const GridResult grid = run_grid_to_dir(plan, args.out_dir, policy);
  std::cout << "cells=" << grid.summaries.size() << " trials=" << plan.trials
            << " records=" << grid.records.size() << " out=" << args.out_dir
            << "\n";
  write_summary_csv(std::cout, grid.summaries);
}

struct FitArgs {
  std::string in;
  int table = 0;
  std::vector<std::string> models;
  std::string reference;
  bool use_comparisons = false;
  bool csv = false;
  std::string out;
};

void run_fit(const FitArgs& args) {
  std::vector<Point> points;
  std::vector<std::string> model_names = args.models;
  std::string reference = args.reference;
  if (args.table != 0) {
    std::span<const Point> t;
    switch (args.table) {
      case 1: t = ref::table1(); break;
      case 2: t = ref::table2(); break;
      case 3: t = ref::table3(); break;
      case 4: t = ref::table4(); break;
      default:
        throw std::invalid_argument("fit: --table must be 1..4");
    }
    points.assign(t.begin(), t.end());
    if (model_names.empty()) {
      switch (args.table) {
        case 1: model_names = {"nlog2n", "n_deg1"}; break;
        case 2: model_names = {"p_deg1", "p_deg2"}; break;
        case 3: model_names = {"k_deg1", "k_deg2", "k_deg3"}; break;
        default:
          throw std::invalid_argument("fit: --table 4 needs --models");
      }
    }
  } else if (!args.in.empty()) {
    const std::vector<TrialRecord> records = read_trials_csv(args.in);
    points.reserve(records.size());
    for (const TrialRecord& r : records)
      points.push_back({{static_cast<double>(r.n), static_cast<double>(r.k),
                         r.p},
                        args.use_comparisons
                            ? static_cast<double>(r.comparisons)
                            : r.elapsed_s});
    if (model_names.empty())
      throw std::invalid_argument("fit: --in needs --models");
  } else {
    throw std::invalid_argument("fit: give --in or --table");
  }

  std::vector<BasisSpec> candidates;
  candidates.reserve(model_names.size());
  for (const std::string& name : model_names)
    candidates.push_back(bases::named(name));
  const SelectionReport report = select_model(points, candidates);
  OutputTarget target(args.out);
  target.stream() << (args.csv ? fit_report_csv(report)
                               : render_fit_report(report, reference));
  target.finish();
}

struct AnovaArgs {
  std::string in;
  bool use_comparisons = false;
  bool csv = false;
  std::string out;
};

void run_anova(const AnovaArgs& args) {
  const std::vector<TrialRecord> records = read_trials_csv(args.in);
  if (records.empty()) throw std::runtime_error("anova: no records in " + args.in);
  std::set<double> nv, pv, kv;
  for (const TrialRecord& r : records) {
    nv.insert(static_cast<double>(r.n));
    pv.insert(r.p);
    kv.insert(static_cast<double>(r.k));
  }
  const auto labels = [](const std::set<double>& vals) {
    std::vector<std::string> out;
    for (double v : vals) out.push_back(dshort(v));
    return out;
  };
  FactorialDesign design;
  design.factors = {{"n", labels(nv)}, {"p", labels(pv)}, {"k", labels(kv)}};
  design.replicates = static_cast<int>(
      records.size() / (nv.size() * pv.size() * kv.size()));
  const auto index_of = [](const std::set<double>& vals, double v) {
    return static_cast<int>(std::distance(vals.begin(), vals.find(v)));
  };
  std::vector<Observation> obs;
  obs.reserve(records.size());
  for (const TrialRecord& r : records)
    obs.push_back({{index_of(nv, static_cast<double>(r.n)), index_of(pv, r.p),
                    index_of(kv, static_cast<double>(r.k))},
                   args.use_comparisons ? static_cast<double>(r.comparisons)
                                        : r.elapsed_s});
  const AnovaTable table = anova_full_factorial(design, obs);
  OutputTarget target(args.out);
  target.stream() << (args.csv ? anova_csv(table)
                               : render_anova(design, table));
  target.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partition sort performance laboratory"};
  app.require_subcommand(1);

  const std::map<std::string, Measure> measure_map{
      {"time", Measure::WallTime},
      {"comparisons", Measure::Comparisons},
      {"both", Measure::Both}};
  const std::map<std::string, SortAlgo> algo_map{
      {"partition", SortAlgo::Partition}, {"quicksort", SortAlgo::Quicksort}};
  const std::map<std::string, SelectKind> strategy_map{
      {"det", SelectKind::Deterministic}, {"rand", SelectKind::Randomized}};
  const std::map<std::string, NbMethod> method_map{
      {"geometric", NbMethod::GeometricSum},
      {"bernoulli", NbMethod::BernoulliSim}};

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a dataset");
  gen->add_option("--n", gen_args.n, "number of keys")->required();
  gen->add_option("--family", gen_args.family, "nb | binomial | uniform")
      ->check(CLI::IsMember({"nb", "binomial", "uniform"}));
  gen->add_option("--k", gen_args.k, "nb successes / binomial trials");
  gen->add_option("--p", gen_args.p, "success probability");
  gen->add_option("--lo", gen_args.lo, "uniform lower bound (inclusive)");
  gen->add_option("--hi", gen_args.hi, "uniform upper bound (inclusive)");
  gen->add_option("--seed", gen_args.seed, "dataset seed");
  gen->add_option("--method", gen_args.method, "nb sampling method")
      ->transform(CLI::CheckedTransformer(method_map, CLI::ignore_case));
  gen->add_option("--out", gen_args.out, "output file (default stdout)");

  SortArgs sort_args;
  CLI::App* sort_cmd = app.add_subcommand("sort", "sort keys and report stats");
  sort_cmd->add_option("--in", sort_args.in, "input file (default stdin)");
  sort_cmd->add_option("--out", sort_args.out, "write sorted keys here");
  sort_cmd->add_option("--algo", sort_args.algo, "partition | quicksort")
      ->transform(CLI::CheckedTransformer(algo_map, CLI::ignore_case));
  sort_cmd->add_option("--strategy", sort_args.strategy, "det | rand")
      ->transform(CLI::CheckedTransformer(strategy_map, CLI::ignore_case));
  sort_cmd->add_option("--seed", sort_args.seed, "pivot seed (rand strategy)");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark grid");
  bench->add_option("--plan", bench_args.plan_path, "plan file");
  bench->add_option("--n", bench_args.n_levels, "n levels")->delimiter(',');
  bench->add_option("--k", bench_args.k_levels, "k levels")->delimiter(',');
  bench->add_option("--p", bench_args.p_levels, "p levels")->delimiter(',');
  bench->add_option("--family", bench_args.family, "negbinomial | binomial")
      ->check(CLI::IsMember({"negbinomial", "binomial"}));
  bench->add_option("--trials", bench_args.trials, "trials per cell");
  bench->add_option("--seed", bench_args.seed, "master seed");
  bench->add_option("--measure", bench_args.measure,
                    "time | comparisons | both")
      ->transform(CLI::CheckedTransformer(measure_map, CLI::ignore_case));
  bench->add_option("--algo", bench_args.algo, "partition | quicksort")
      ->transform(CLI::CheckedTransformer(algo_map, CLI::ignore_case));
  bench->add_option("--strategy", bench_args.strategy, "det | rand")
      ->transform(CLI::CheckedTransformer(strategy_map, CLI::ignore_case));
  bench->add_option("--method", bench_args.method, "nb sampling method")
      ->transform(CLI::CheckedTransformer(method_map, CLI::ignore_case));
  bench->add_option("--warmup", bench_args.warmup,
                    "unrecorded sorts before each cell");
  bench->add_flag("--reuse", bench_args.reuse, "re-sort copies of one dataset");
  bench->add_flag("--serial", bench_args.serial, "disable parallel cells");
  bench->add_option("--out", bench_args.out_dir, "output directory")
      ->required();

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit growth models to a CSV");
  fit->add_option("--in", fit_args.in, "trials CSV");
  fit->add_option("--table", fit_args.table, "embedded table 1..4");
  fit->add_option("--models", fit_args.models, "candidate model names")
      ->delimiter(',');
  fit->add_option("--reference", fit_args.reference,
                  "flag agreement with this model");
  fit->add_flag("--use-comparisons", fit_args.use_comparisons,
                "fit comparison counts instead of time");
  fit->add_flag("--csv", fit_args.csv, "emit CSV instead of text");
  fit->add_option("--out", fit_args.out, "output file (default stdout)");

  AnovaArgs anova_args;
  CLI::App* anova = app.add_subcommand("anova", "full-factorial ANOVA of a CSV");
  anova->add_option("--in", anova_args.in, "trials CSV")->required();
  anova->add_flag("--use-comparisons", anova_args.use_comparisons,
                  "analyze comparison counts instead of time");
  anova->add_flag("--csv", anova_args.csv, "emit CSV instead of text");
  anova->add_option("--out", anova_args.out, "output file (default stdout)");

  std::string repro_target = "all";
  CLI::App* repro = app.add_subcommand("repro", "re-analyze the bundled tables");
  repro->add_option("--target", repro_target,
                    "table1 | table2 | table3 | anova | all");

  gen->callback([&] { run_gen(gen_args); });
  sort_cmd->callback([&] { run_sort(sort_args); });
  bench->callback([&] { run_bench(bench_args, bench); });
  fit->callback([&] { run_fit(fit_args); });
  anova->callback([&] { run_anova(anova_args); });
  repro->callback([&] { run_repro(repro_target, std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
