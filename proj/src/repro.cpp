#include "psl/repro.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "psl/ref_tables.hpp"

namespace psl {

namespace {

ReproFitResult repro_fit(std::span<const Point> points,
                         std::vector<BasisSpec> candidates,
                         const std::string& reference) {
  ReproFitResult result;
  result.report = select_model(points, candidates);
  result.reference_model = reference;
  result.rule_concurs =
      result.report.fits[result.report.chosen].model == reference;
  result.text = render_fit_report(result.report, reference);
  return result;
}

}  // namespace

ReproFitResult repro_table1() {
  return repro_fit(ref::table1(),
                   {bases::nlog2n_model(), bases::linear_n_model()}, "nlog2n");
}

ReproFitResult repro_table2() {
  return repro_fit(ref::table2(), {bases::poly_in_p(1), bases::poly_in_p(2)},
                   "p_deg2");
}

ReproFitResult repro_table3() {
  return repro_fit(
      ref::table3(),
      {bases::poly_in_k(1), bases::poly_in_k(2), bases::poly_in_k(3)},
      "k_deg3");
}

ReproAnovaResult repro_anova() {
  const std::span<const Point> cells = ref::table4();
  std::set<double> nv, pv, kv;
  for (const Point& pt : cells) {
    nv.insert(pt.x.n);
    pv.insert(pt.x.p);
    kv.insert(pt.x.k);
  }
  const auto labels = [](const std::set<double>& vals) {
    std::vector<std::string> out;
    for (double v : vals) {
      std::string s = std::to_string(v);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      out.push_back(s);
    }
    return out;
  };
  ReproAnovaResult result;
  // Factor order n, p, k fixes the effect row order of the report.
  result.design.factors = {{"n", labels(nv)}, {"p", labels(pv)},
                           {"k", labels(kv)}};
  result.design.replicates = 3;

  const auto index_of = [](const std::set<double>& vals, double v) {
    return static_cast<int>(std::distance(vals.begin(), vals.find(v)));
  };
  std::vector<Observation> obs;
  obs.reserve(cells.size() * 3);
  for (const Point& pt : cells) {
    const Observation o{
        {index_of(nv, pt.x.n), index_of(pv, pt.x.p), index_of(kv, pt.x.k)},
        pt.y};
    for (int r = 0; r < 3; ++r) obs.push_back(o);
  }
  result.table = anova_full_factorial(result.design, obs);
  result.text = render_anova(result.design, result.table);
  return result;
}

int run_repro(const std::string& target, std::ostream& out) {
  const bool all = target == "all";
  bool hit = false;
  if (all || target == "table1") {
    out << "== repro table1: time vs n ==\n" << repro_table1().text;
    hit = true;
  }
  if (all || target == "table2") {
    if (hit) out << "\n";
    out << "== repro table2: time vs p ==\n" << repro_table2().text;
    hit = true;
  }
  if (all || target == "table3") {
    if (hit) out << "\n";
    out << "== repro table3: time vs k ==\n" << repro_table3().text;
    hit = true;
  }
  if (all || target == "anova") {
    if (hit) out << "\n";
    out << "== repro anova: 3x3x3 factorial ==\n" << repro_anova().text;
    hit = true;
  }
  if (!hit)
    throw std::invalid_argument(
        "repro: unknown target '" + target +
        "' (expected table1|table2|table3|anova|all)");
  return 0;
}

}  // namespace psl
