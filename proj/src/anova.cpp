#include "psl/anova.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

namespace psl {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<int> mask_bits(unsigned mask) {
  std::vector<int> out;
  for (int f = 0; mask != 0; ++f, mask >>= 1)
    if (mask & 1u) out.push_back(f);
  return out;
}

// Mixed-radix index of `levels` restricted to the factors in `mask`,
// most-significant factor first.
std::size_t index_for(const std::vector<int>& levels,
                      const std::vector<std::size_t>& L, unsigned mask) {
  std::size_t idx = 0;
  for (std::size_t f = 0; f < L.size(); ++f)
    if (mask & (1u << f)) idx = idx * L[f] + static_cast<std::size_t>(levels[f]);
  return idx;
}

// Advances `levels` as an odometer over the factors in `mask`; returns false
// after the last tuple.
bool advance(std::vector<int>& levels, const std::vector<std::size_t>& L,
             unsigned mask) {
  for (std::size_t f = L.size(); f-- > 0;) {
    if (!(mask & (1u << f))) continue;
    if (static_cast<std::size_t>(++levels[f]) < L[f]) return true;
    levels[f] = 0;
  }
  return false;
}

std::string cell_label(const FactorialDesign& design,
                       const std::vector<int>& levels) {
  std::string out;
  for (std::size_t f = 0; f < design.factors.size(); ++f) {
    if (f > 0) out += " ";
    out += design.factors[f].name + "=" +
           design.factors[f].levels[static_cast<std::size_t>(levels[f])];
  }
  return out;
}

std::string source_label(const FactorialDesign& design, unsigned mask) {
  std::string out;
  for (int f : mask_bits(mask)) {
    if (!out.empty()) out += "*";
    out += design.factors[static_cast<std::size_t>(f)].name;
  }
  return out;
}

constexpr double kBetaEps = 1e-15;
constexpr double kBetaTiny = 1e-300;
constexpr int kBetaMaxIter = 500;

// Lentz evaluation of the continued fraction for I_x(a, b).
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kBetaTiny) d = kBetaTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kBetaEps) break;
  }
  return h;
}

std::string trim_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("reg_inc_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("reg_inc_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(lbt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double f_pvalue(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1)
    throw std::invalid_argument("f_pvalue: degrees of freedom must be >= 1");
  if (!(f >= 0)) throw std::invalid_argument("f_pvalue: F must be >= 0");
  if (std::isinf(f)) return 0.0;
  const double x = df2 / (df2 + df1 * f);
  return reg_inc_beta(x, 0.5 * df2, 0.5 * df1);
}

AnovaTable anova_full_factorial(const FactorialDesign& design,
                                std::span<const Observation> observations) {
  const std::size_t F = design.factors.size();
  if (F < 2)
    throw std::invalid_argument("anova_full_factorial: needs >= 2 factors");
  if (F > 20)
    throw std::invalid_argument("anova_full_factorial: too many factors");
  if (design.replicates < 1)
    throw std::invalid_argument("anova_full_factorial: replicates must be >= 1");
  std::vector<std::size_t> L(F);
  std::size_t ncells = 1;
  for (std::size_t f = 0; f < F; ++f) {
    L[f] = design.factors[f].levels.size();
    if (L[f] < 2)
      throw std::invalid_argument("anova_full_factorial: factor " +
                                  design.factors[f].name + " needs >= 2 levels");
    ncells *= L[f];
  }
  const unsigned full = (1u << F) - 1u;

  std::vector<double> sum(ncells, 0.0);
  std::vector<int> cnt(ncells, 0);
  for (const Observation& o : observations) {
    if (o.level.size() != F)
      throw std::invalid_argument("anova_full_factorial: observation has " +
                                  std::to_string(o.level.size()) +
                                  " levels, design has " + std::to_string(F) +
                                  " factors");
    for (std::size_t f = 0; f < F; ++f)
      if (o.level[f] < 0 || static_cast<std::size_t>(o.level[f]) >= L[f])
        throw std::invalid_argument("anova_full_factorial: level index " +
                                    std::to_string(o.level[f]) +
                                    " out of range for factor " +
                                    design.factors[f].name);
    const std::size_t idx = index_for(o.level, L, full);
    sum[idx] += o.y;
    cnt[idx] += 1;
  }
  {
    std::vector<std::string> deficient;
    std::vector<int> levels(F, 0);
    std::size_t idx = 0;
    do {
      if (cnt[idx] != design.replicates)
        deficient.push_back(cell_label(design, levels) + ": got " +
                            std::to_string(cnt[idx]) + ", want " +
                            std::to_string(design.replicates));
      ++idx;
    } while (advance(levels, L, full));
    if (!deficient.empty())
      throw BalanceError("anova_full_factorial: " +
                             std::to_string(deficient.size()) +
                             " deficient cells",
                         std::move(deficient));
  }

  std::vector<double> mean(ncells);
  double grand = 0.0;
  for (std::size_t i = 0; i < ncells; ++i) {
    mean[i] = sum[i] / design.replicates;
    grand += mean[i];
  }
  grand /= static_cast<double>(ncells);
  const int N = static_cast<int>(ncells) * design.replicates;

  // Marginal means of the cell means for every factor subset.
  std::vector<std::vector<double>> marg(full + 1u);
  marg[0] = {grand};
  for (unsigned mask = 1; mask <= full; ++mask) {
    std::size_t size = 1;
    for (int f : mask_bits(mask)) size *= L[static_cast<std::size_t>(f)];
    marg[mask].assign(size, 0.0);
    std::vector<int> levels(F, 0);
    std::size_t idx = 0;
    do {
      marg[mask][index_for(levels, L, mask)] += mean[idx];
      ++idx;
    } while (advance(levels, L, full));
    const double down = static_cast<double>(ncells) / static_cast<double>(size);
    for (double& v : marg[mask]) v /= down;
  }

  // Effect order: subset size, then lexicographic factor indices.
  std::vector<unsigned> order;
  for (unsigned mask = 1; mask <= full; ++mask) order.push_back(mask);
  std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return mask_bits(a) < mask_bits(b);
  });

  AnovaTable table;
  table.total_runs = N;
  for (unsigned mask : order) {
    // e_S(l) = sum over subsets T of S of (-1)^(|S|-|T|) m_T(l_T)
    double ssq = 0.0;
    std::size_t size = 1;
    int df = 1;
    for (int f : mask_bits(mask)) {
      size *= L[static_cast<std::size_t>(f)];
      df *= static_cast<int>(L[static_cast<std::size_t>(f)]) - 1;
    }
    std::vector<int> levels(F, 0);
    do {
      double e = 0.0;
      unsigned sub = mask;
      for (;;) {
        const int sgn =
            ((std::popcount(mask) - std::popcount(sub)) % 2 == 0) ? 1 : -1;
        e += sgn * marg[sub][index_for(levels, L, sub)];
        if (sub == 0) break;
        sub = (sub - 1) & mask;
      }
      ssq += e * e;
    } while (advance(levels, L, mask));
    const double ss = design.replicates *
                      (static_cast<double>(ncells) / static_cast<double>(size)) *
                      ssq;
    AnovaRow row;
    row.source = source_label(design, mask);
    row.factor_set = mask_bits(mask);
    row.df = df;
    row.seq_ss = row.adj_ss = ss;
    row.adj_ms = ss / df;
    row.ms_defined = true;
    table.rows.push_back(std::move(row));
  }

  double ss_error = 0.0;
  double ss_total = 0.0;
  for (const Observation& o : observations) {
    const double m = mean[index_for(o.level, L, full)];
    ss_error += (o.y - m) * (o.y - m);
    ss_total += (o.y - grand) * (o.y - grand);
  }
  const int df_error = N - static_cast<int>(ncells);
  const int df_total = N - 1;

  AnovaRow error;
  error.source = "Error";
  error.df = df_error;
  error.seq_ss = error.adj_ss = ss_error;
  error.is_error = true;
  if (df_error > 0) {
    error.adj_ms = ss_error / df_error;
    error.ms_defined = true;
  }
  const bool f_ok = df_error > 0 && ss_error > 0.0;
  for (AnovaRow& row : table.rows) {
    if (!f_ok) continue;
    row.f = row.adj_ms / error.adj_ms;
    row.p = f_pvalue(row.f, row.df, df_error);
    row.f_defined = true;
  }
  table.rows.push_back(std::move(error));

  AnovaRow total;
  total.source = "Total";
  total.df = df_total;
  total.seq_ss = total.adj_ss = ss_total;
  total.is_total = true;
  table.rows.push_back(std::move(total));

  if (df_error > 0) {
    table.s = std::sqrt(ss_error / df_error);
    table.s_defined = true;
  }
  if (ss_total > 0.0) {
    table.r_sq = 1.0 - ss_error / ss_total;
    table.r_sq_defined = true;
    if (df_error > 0 && df_total > 0) {
      table.r_sq_adj = 1.0 - (ss_error / df_error) / (ss_total / df_total);
      table.r_sq_adj_defined = true;
    }
  }
  return table;
}

namespace {

struct TextColumn {
  std::string header;
  bool left;
  std::vector<std::string> cells;
  std::size_t width() const {
    std::size_t w = header.size();
    for (const auto& c : cells) w = std::max(w, c.size());
    return w;
  }
};

std::string render_columns(const std::vector<TextColumn>& cols) {
  std::vector<std::size_t> w(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].width();
  std::string out;
  const std::size_t nrows = cols.empty() ? 0 : cols[0].cells.size();
  for (std::size_t r = 0; r <= nrows; ++r) {
    std::string line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& s = r == 0 ? cols[c].header : cols[c].cells[r - 1];
      if (c > 0) line += "  ";
      if (cols[c].left) {
        line += s;
        line.append(w[c] - s.size(), ' ');
      } else {
        line.append(w[c] - s.size(), ' ');
        line += s;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace

std::string render_anova(const FactorialDesign& design, const AnovaTable& table) {
  std::vector<TextColumn> fac{{"Factor", true, {}},
                              {"Type", true, {}},
                              {"Levels", false, {}},
                              {"Values", true, {}}};
  for (const Factor& f : design.factors) {
    fac[0].cells.push_back(f.name);
    fac[1].cells.push_back("fixed");
    fac[2].cells.push_back(std::to_string(f.levels.size()));
    std::string vals;
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
      if (i > 0) vals += ", ";
      vals += f.levels[i];
    }
    fac[3].cells.push_back(vals);
  }

  std::vector<TextColumn> tab{{"Source", true, {}}, {"DF", false, {}},
                              {"Seq SS", false, {}}, {"Adj SS", false, {}},
                              {"Adj MS", false, {}}, {"F", false, {}},
                              {"P", false, {}}};
  for (const AnovaRow& row : table.rows) {
    tab[0].cells.push_back(row.source);
    tab[1].cells.push_back(std::to_string(row.df));
    tab[2].cells.push_back(fmt("%.7f", row.seq_ss));
    if (row.is_total) {
      tab[3].cells.emplace_back();
      tab[4].cells.emplace_back();
      tab[5].cells.emplace_back();
      tab[6].cells.emplace_back();
      continue;
    }
    tab[3].cells.push_back(fmt("%.7f", row.adj_ss));
    tab[4].cells.push_back(row.ms_defined ? fmt("%.7f", row.adj_ms) : "*");
    if (row.is_error) {
      tab[5].cells.emplace_back();
      tab[6].cells.emplace_back();
    } else {
      tab[5].cells.push_back(
          row.f_defined ? fmt(row.f >= 1e7 ? "%.5E" : "%.2f", row.f) : "*");
      tab[6].cells.push_back(row.f_defined ? fmt("%.3f", row.p) : "*");
    }
  }

  std::string out = render_columns(fac);
  out += "\nAnalysis of Variance\n\n";
  out += render_columns(tab);
  out += "\nS = " + (table.s_defined ? trim_zeros(fmt("%.10f", table.s)) : "*");
  out += "   R-Sq = " +
         (table.r_sq_defined ? fmt("%.2f", 100.0 * table.r_sq) + "%" : "*");
  out += "   R-Sq(adj) = " +
         (table.r_sq_adj_defined ? fmt("%.2f", 100.0 * table.r_sq_adj) + "%"
                                 : "*");
  out += "\n";
  return out;
}

std::string anova_csv(const AnovaTable& table) {
  std::string out = "source,df,seq_ss,adj_ss,adj_ms,f,p\n";
  for (const AnovaRow& row : table.rows) {
    out += row.source + "," + std::to_string(row.df) + "," +
           fmt("%.17g", row.seq_ss) + ",";
    if (!row.is_total) out += fmt("%.17g", row.adj_ss);
    out += ",";
    if (row.ms_defined) out += fmt("%.17g", row.adj_ms);
    out += ",";
    if (row.f_defined) out += fmt("%.17g", row.f);
    out += ",";
    if (row.f_defined) out += fmt("%.17g", row.p);
    out += "\n";
  }
  return out;
}

}  // namespace psl
