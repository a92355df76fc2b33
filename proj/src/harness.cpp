#include "psl/harness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

namespace psl {

namespace {

std::string dshort(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

// Cell identity folded into the seed chain: family tag plus the parameters
// that define the distribution, so renaming or reordering cells in a plan
// never changes any cell's data.
struct CellIdentity {
  std::uint64_t tag = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::int64_t k_col = 0;
  double p_col = 0;
};

CellIdentity identify(const DistributionSpec& dist) {
  CellIdentity id;
  if (const auto* nb = std::get_if<NegBinomial>(&dist)) {
    id.tag = 0;
    id.a = static_cast<std::uint64_t>(nb->k);
    id.b = std::bit_cast<std::uint64_t>(nb->p);
    id.k_col = nb->k;
    id.p_col = nb->p;
  } else if (const auto* bi = std::get_if<Binomial>(&dist)) {
    id.tag = 1;
    id.a = static_cast<std::uint64_t>(bi->m);
    id.b = std::bit_cast<std::uint64_t>(bi->p);
    id.k_col = bi->m;
    id.p_col = bi->p;
  } else {
    const auto& u = std::get<UniformInt>(dist);
    id.tag = 2;
    id.a = static_cast<std::uint64_t>(u.lo);
    id.b = static_cast<std::uint64_t>(u.hi);
  }
  return id;
}

}  // namespace

CellSummary summarize_cell(std::span<const TrialRecord> records) {
  if (records.empty())
    throw std::invalid_argument("summarize_cell: no records");
  CellSummary s;
  s.n = records[0].n;
  s.k = records[0].k;
  s.p = records[0].p;
  s.trials = static_cast<int>(records.size());
  double tsum = 0, csum = 0;
  for (const TrialRecord& r : records) {
    tsum += r.elapsed_s;
    csum += static_cast<double>(r.comparisons);
  }
  s.mean_time = tsum / s.trials;
  s.mean_comparisons = csum / s.trials;
  if (s.trials > 1) {
    double dev = 0;
    for (const TrialRecord& r : records) {
      const double d = r.elapsed_s - s.mean_time;
      dev += d * d;
    }
    s.sd_time = std::sqrt(dev / (s.trials - 1));
  }
  return s;
}

CellResult run_cell(const CellSpec& cell, int trials, std::uint64_t master_seed,
                    const RunOptions& opts) {
  if (trials < 1)
    throw std::invalid_argument("run_cell: trials must be >= 1, got " +
                                std::to_string(trials));
  if (opts.warmup < 0)
    throw std::invalid_argument("run_cell: warmup must be >= 0, got " +
                                std::to_string(opts.warmup));
  validate(cell.dist);
  const CellIdentity id = identify(cell.dist);
  const std::uint64_t cell_seed =
      derive_seed(derive_seed(master_seed, cell.n, id.tag), id.a, id.b);
  const bool timed = opts.measure != Measure::Comparisons;

  const auto sort_once = [&](KeyArray& a, std::uint64_t sort_seed,
                             SortStats& stats) -> std::int64_t {
    if (!timed) {
      if (opts.sorter_override)
        opts.sorter_override(a, stats);
      else if (opts.algo == SortAlgo::Quicksort)
        stats = quicksort_baseline(a, sort_seed);
      else
        stats = partition_sort(a, {opts.strategy, sort_seed});
      return 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    if (opts.sorter_override)
      opts.sorter_override(a, stats);
    else if (opts.algo == SortAlgo::Quicksort)
      stats = quicksort_baseline(a, sort_seed);
    else
      stats = partition_sort(a, {opts.strategy, sort_seed});
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
  };

  const std::uint64_t base_seed = derive_seed(cell_seed, 0, 0);
  KeyArray base;
  if (opts.reuse_dataset)
    base = generate_dataset(cell.dist, cell.n, base_seed, opts.nb_method);

  for (int w = 0; w < opts.warmup; ++w) {
    KeyArray a = opts.reuse_dataset
                     ? base
                     : generate_dataset(cell.dist, cell.n,
                                        derive_seed(cell_seed, w, 1),
                                        opts.nb_method);
    SortStats stats;
    sort_once(a, derive_seed(cell_seed, w, 3), stats);
  }

  CellResult result;
  result.records.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t dataset_seed =
        opts.reuse_dataset ? base_seed
                           : derive_seed(cell_seed, static_cast<std::uint64_t>(t), 0);
    KeyArray a = opts.reuse_dataset
                     ? base
                     : generate_dataset(cell.dist, cell.n, dataset_seed,
                                        opts.nb_method);
    SortStats stats;
    const std::int64_t ns =
        sort_once(a, derive_seed(cell_seed, static_cast<std::uint64_t>(t), 2),
                  stats);
    TrialRecord rec;
    rec.n = cell.n;
    rec.k = id.k_col;
    rec.p = id.p_col;
    rec.trial = t;
    rec.seed = dataset_seed;
    rec.elapsed_s = static_cast<double>(ns) / 1e9;
    rec.comparisons = stats.comparisons;
    rec.swaps = stats.swaps;
    result.records.push_back(rec);
  }
  result.summary = summarize_cell(result.records);
  return result;
}

std::vector<CellSpec> ExperimentPlan::cells() const {
  std::vector<CellSpec> out;
  out.reserve(n_levels.size() * k_levels.size() * p_levels.size());
  for (std::size_t n : n_levels)
    for (std::int64_t k : k_levels)
      for (double p : p_levels) {
        if (binomial_family)
          out.push_back({n, Binomial{k, p}});
        else
          out.push_back({n, NegBinomial{k, p}});
      }
  return out;
}

void ExperimentPlan::validate() const {
  if (n_levels.empty())
    throw std::invalid_argument("plan: n levels must not be empty");
  if (k_levels.empty())
    throw std::invalid_argument("plan: k levels must not be empty");
  if (p_levels.empty())
    throw std::invalid_argument("plan: p levels must not be empty");
  for (std::size_t n : n_levels)
    if (n < 1)
      throw std::invalid_argument("plan: n levels must be >= 1, got 0");
  if (trials < 1)
    throw std::invalid_argument("plan: trials must be >= 1, got " +
                                std::to_string(trials));
  if (options.warmup < 0)
    throw std::invalid_argument("plan: warmup must be >= 0, got " +
                                std::to_string(options.warmup));
  for (const CellSpec& cell : cells()) psl::validate(cell.dist);
}

GridResult run_grid(const ExperimentPlan& plan, ExecPolicy policy) {
  plan.validate();
  const std::vector<CellSpec> cells = plan.cells();
  std::vector<CellResult> per_cell(cells.size());
  const bool parallel = policy == ExecPolicy::Parallel &&
                        plan.options.measure == Measure::Comparisons;
  if (parallel) {
    std::vector<std::exception_ptr> failures(cells.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size());
         ++i) {
      try {
        per_cell[static_cast<std::size_t>(i)] =
            run_cell(cells[static_cast<std::size_t>(i)], plan.trials,
                     plan.master_seed, plan.options);
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (const std::exception_ptr& e : failures)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i)
      per_cell[i] = run_cell(cells[i], plan.trials, plan.master_seed,
                             plan.options);
  }

  GridResult grid;
  grid.summaries.reserve(cells.size());
  grid.records.reserve(cells.size() * static_cast<std::size_t>(plan.trials));
  for (CellResult& r : per_cell) {
    grid.summaries.push_back(r.summary);
    grid.records.insert(grid.records.end(), r.records.begin(), r.records.end());
  }
  return grid;
}

namespace {

template <typename Writer>
void write_staged(const std::filesystem::path& final_path, Writer&& writer) {
  const std::filesystem::path partial =
      final_path.string() + std::string(".partial");
  {
    std::ofstream out(partial);
    if (!out)
      throw std::runtime_error("cannot open " + partial.string());
    try {
      writer(out);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + "; partial left at " +
                               partial.string());
    }
    out.flush();
    if (!out)
      throw std::runtime_error("write failed; partial left at " +
                               partial.string());
  }
  std::filesystem::rename(partial, final_path);
}

}  // namespace

GridResult run_grid_to_dir(const ExperimentPlan& plan,
                           const std::filesystem::path& out_dir,
                           ExecPolicy policy) {
  std::filesystem::create_directories(out_dir);
  GridResult grid = run_grid(plan, policy);
  write_staged(out_dir / "trials.csv",
               [&](std::ostream& out) { write_trials_csv(out, grid.records); });
  write_staged(out_dir / "summary.csv", [&](std::ostream& out) {
    write_summary_csv(out, grid.summaries);
  });

  const int varying = (plan.n_levels.size() > 1) + (plan.k_levels.size() > 1) +
                      (plan.p_levels.size() > 1);
  if (varying == 1) {
    const char* axis = plan.n_levels.size() > 1   ? "n"
                       : plan.k_levels.size() > 1 ? "k"
                                                  : "p";
    const auto axis_value = [&](const CellSummary& s) {
      if (plan.n_levels.size() > 1) return static_cast<double>(s.n);
      if (plan.k_levels.size() > 1) return static_cast<double>(s.k);
      return s.p;
    };
    // Comparisons-only runs have no wall times worth plotting.
    if (plan.options.measure != Measure::Comparisons)
      write_staged(out_dir / (std::string("time_vs_") + axis + ".dat"),
                   [&](std::ostream& out) {
                     for (const CellSummary& s : grid.summaries)
                       out << dshort(axis_value(s)) << " "
                           << dshort(s.mean_time) << "\n";
                   });
    write_staged(out_dir / (std::string("comparisons_vs_") + axis + ".dat"),
                 [&](std::ostream& out) {
                   for (const CellSummary& s : grid.summaries)
                     out << dshort(axis_value(s)) << " "
                         << dshort(s.mean_comparisons) << "\n";
                 });
  }
  return grid;
}

namespace {

double axis_value_of(const TrialRecord& r, Axis a) {
  switch (a) {
    case Axis::N: return static_cast<double>(r.n);
    case Axis::K: return static_cast<double>(r.k);
    default: return r.p;
  }
}

}  // namespace

MeanTable summarize_table(std::span<const TrialRecord> records, Axis row_axis,
                          Axis col_axis, bool use_comparisons) {
  if (row_axis == col_axis)
    throw std::invalid_argument("summarize_table: row and column axes equal");
  if (records.empty())
    throw std::invalid_argument("summarize_table: no records");

  std::set<double> vn, vk, vp;
  for (const TrialRecord& r : records) {
    vn.insert(static_cast<double>(r.n));
    vk.insert(static_cast<double>(r.k));
    vp.insert(r.p);
  }
  const std::vector<double> n_vals(vn.begin(), vn.end());
  const std::vector<double> k_vals(vk.begin(), vk.end());
  const std::vector<double> p_vals(vp.begin(), vp.end());
  const auto index_of = [](const std::vector<double>& vals, double v) {
    return static_cast<std::size_t>(
        std::find(vals.begin(), vals.end(), v) - vals.begin());
  };

  std::vector<int> count(n_vals.size() * k_vals.size() * p_vals.size(), 0);
  const auto cell_index = [&](const TrialRecord& r) {
    const std::size_t in = index_of(n_vals, static_cast<double>(r.n));
    const std::size_t ik = index_of(k_vals, static_cast<double>(r.k));
    const std::size_t ip = index_of(p_vals, r.p);
    return (in * k_vals.size() + ik) * p_vals.size() + ip;
  };
  for (const TrialRecord& r : records) count[cell_index(r)] += 1;
  {
    std::vector<std::string> missing;
    for (std::size_t in = 0; in < n_vals.size(); ++in)
      for (std::size_t ik = 0; ik < k_vals.size(); ++ik)
        for (std::size_t ip = 0; ip < p_vals.size(); ++ip)
          if (count[(in * k_vals.size() + ik) * p_vals.size() + ip] == 0)
            missing.push_back("n=" + dshort(n_vals[in]) +
                              " k=" + dshort(k_vals[ik]) +
                              " p=" + dshort(p_vals[ip]));
    if (!missing.empty())
      throw MissingCellError("summarize_table: " +
                                 std::to_string(missing.size()) +
                                 " missing cells",
                             std::move(missing));
  }

  const auto labels_for = [&](Axis a) {
    switch (a) {
      case Axis::N: return n_vals;
      case Axis::K: return k_vals;
      default: return p_vals;
    }
  };
  MeanTable table;
  table.row_axis = row_axis;
  table.col_axis = col_axis;
  table.row_labels = labels_for(row_axis);
  table.col_labels = labels_for(col_axis);
  std::vector<std::vector<double>> sums(
      table.row_labels.size(),
      std::vector<double>(table.col_labels.size(), 0.0));
  std::vector<std::vector<int>> counts(
      table.row_labels.size(), std::vector<int>(table.col_labels.size(), 0));
  for (const TrialRecord& r : records) {
    const std::size_t ri = index_of(table.row_labels, axis_value_of(r, row_axis));
    const std::size_t ci = index_of(table.col_labels, axis_value_of(r, col_axis));
    sums[ri][ci] +=
        use_comparisons ? static_cast<double>(r.comparisons) : r.elapsed_s;
    counts[ri][ci] += 1;
  }
  table.cells = sums;
  for (std::size_t ri = 0; ri < sums.size(); ++ri)
    for (std::size_t ci = 0; ci < sums[ri].size(); ++ci)
      table.cells[ri][ci] = sums[ri][ci] / counts[ri][ci];
  return table;
}

namespace {

constexpr const char* kTrialsHeader =
    "n,k,p,trial,seed,elapsed_s,comparisons,swaps";

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << kTrialsHeader << "\n";
  for (const TrialRecord& r : records) {
    out << r.n << ',' << r.k << ',' << dshort(r.p) << ',' << r.trial << ','
        << r.seed << ',' << fixed9(r.elapsed_s) << ',' << r.comparisons << ','
        << r.swaps << '\n';
  }
}

void write_trials_csv(const std::filesystem::path& path,
                      std::span<const TrialRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_trials_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_u64_field(const std::string& s, int line, const char* what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("trials csv line " + std::to_string(line) +
                             ": bad " + std::string(what) + " '" + s + "'");
  return v;
}

std::int64_t parse_i64_field(const std::string& s, int line, const char* what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("trials csv line " + std::to_string(line) +
                             ": bad " + std::string(what) + " '" + s + "'");
  return v;
}

double parse_double_field(const std::string& s, int line, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw std::runtime_error("trials csv line " + std::to_string(line) +
                             ": bad " + std::string(what) + " '" + s + "'");
  return v;
}

}  // namespace

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("trials csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrialsHeader)
    throw std::runtime_error("trials csv: bad header '" + line + "'");
  std::vector<TrialRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 8)
      throw std::runtime_error("trials csv line " + std::to_string(lineno) +
                               ": expected 8 fields, got " +
                               std::to_string(f.size()));
    TrialRecord r;
    r.n = static_cast<std::size_t>(parse_u64_field(f[0], lineno, "n"));
    r.k = parse_i64_field(f[1], lineno, "k");
    r.p = parse_double_field(f[2], lineno, "p");
    r.trial = static_cast<int>(parse_i64_field(f[3], lineno, "trial"));
    r.seed = parse_u64_field(f[4], lineno, "seed");
    r.elapsed_s = parse_double_field(f[5], lineno, "elapsed_s");
    r.comparisons = parse_u64_field(f[6], lineno, "comparisons");
    r.swaps = parse_u64_field(f[7], lineno, "swaps");
    records.push_back(r);
  }
  return records;
}

std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trials_csv(in);
}

void write_summary_csv(std::ostream& out, std::span<const CellSummary> cells) {
  out << "n,k,p,trials,mean_time_s,sd_time_s,mean_comparisons\n";
  for (const CellSummary& s : cells) {
    out << s.n << ',' << s.k << ',' << dshort(s.p) << ',' << s.trials << ','
        << dshort(s.mean_time) << ',' << dshort(s.sd_time) << ','
        << dshort(s.mean_comparisons) << '\n';
  }
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void plan_fail(int line, const std::string& msg) {
  throw PlanError("plan line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_list(const std::string& value) {
  std::string tmp = value;
  std::replace(tmp.begin(), tmp.end(), ',', ' ');
  std::istringstream is(tmp);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::uint64_t plan_u64(const std::string& s, int line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    plan_fail(line, "bad integer '" + s + "'");
  return v;
}

std::int64_t plan_i64(const std::string& s, int line) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    plan_fail(line, "bad integer '" + s + "'");
  return v;
}

double plan_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    plan_fail(line, "bad number '" + s + "'");
  return v;
}

bool plan_bool(const std::string& s, int line) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  plan_fail(line, "bad boolean '" + s + "'");
}

}  // namespace

ExperimentPlan parse_plan(std::string_view text) {
  ExperimentPlan plan;
  std::string section;
  std::set<std::string> seen;
  bool have_n = false, have_k = false, have_p = false;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') plan_fail(lineno, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "grid" && section != "run")
        plan_fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) plan_fail(lineno, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) plan_fail(lineno, "empty key");
    if (value.empty()) plan_fail(lineno, "empty value for key " + key);
    if (section.empty()) plan_fail(lineno, "key " + key + " outside a section");
    if (!seen.insert(section + "." + key).second)
      plan_fail(lineno, "duplicate key " + key + " in [" + section + "]");

    if (section == "grid") {
      if (key == "n") {
        for (const std::string& tok : split_list(value))
          plan.n_levels.push_back(
              static_cast<std::size_t>(plan_u64(tok, lineno)));
        have_n = true;
      } else if (key == "k") {
        for (const std::string& tok : split_list(value))
          plan.k_levels.push_back(plan_i64(tok, lineno));
        have_k = true;
      } else if (key == "p") {
        for (const std::string& tok : split_list(value))
          plan.p_levels.push_back(plan_double(tok, lineno));
        have_p = true;
      } else if (key == "family") {
        if (value == "negbinomial")
          plan.binomial_family = false;
        else if (value == "binomial")
          plan.binomial_family = true;
        else
          plan_fail(lineno, "unknown family '" + value + "'");
      } else {
        plan_fail(lineno, "unknown key " + key + " in [grid]");
      }
    } else {
      if (key == "trials") {
        plan.trials = static_cast<int>(plan_i64(value, lineno));
      } else if (key == "seed") {
        plan.master_seed = plan_u64(value, lineno);
      } else if (key == "measure") {
        if (value == "time")
          plan.options.measure = Measure::WallTime;
        else if (value == "comparisons")
          plan.options.measure = Measure::Comparisons;
        else if (value == "both")
          plan.options.measure = Measure::Both;
        else
          plan_fail(lineno, "unknown measure '" + value + "'");
      } else if (key == "algo") {
        if (value == "partition")
          plan.options.algo = SortAlgo::Partition;
        else if (value == "quicksort")
          plan.options.algo = SortAlgo::Quicksort;
        else
          plan_fail(lineno, "unknown algo '" + value + "'");
      } else if (key == "strategy") {
        if (value == "det")
          plan.options.strategy = SelectKind::Deterministic;
        else if (value == "rand")
          plan.options.strategy = SelectKind::Randomized;
        else
          plan_fail(lineno, "unknown strategy '" + value + "'");
      } else if (key == "warmup") {
        plan.options.warmup = static_cast<int>(plan_i64(value, lineno));
      } else if (key == "reuse") {
        plan.options.reuse_dataset = plan_bool(value, lineno);
      } else if (key == "method") {
        if (value == "geometric")
          plan.options.nb_method = NbMethod::GeometricSum;
        else if (value == "bernoulli")
          plan.options.nb_method = NbMethod::BernoulliSim;
        else
          plan_fail(lineno, "unknown method '" + value + "'");
      } else {
        plan_fail(lineno, "unknown key " + key + " in [run]");
      }
    }
  }
  if (!have_n) throw PlanError("plan: [grid] missing n");
  if (!have_k) throw PlanError("plan: [grid] missing k");
  if (!have_p) throw PlanError("plan: [grid] missing p");
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot open plan file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

}  // namespace psl
