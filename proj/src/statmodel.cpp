#include "psl/statmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace psl {

namespace bases {

BasisFunction one() {
  return {"1", [](const Predictors&) { return 1.0; }};
}

BasisFunction n() {
  return {"n", [](const Predictors& x) { return x.n; }};
}

BasisFunction nlog2n() {
  return {"n*log2(n)",
          [](const Predictors& x) { return x.n > 0 ? x.n * std::log2(x.n) : 0.0; }};
}

BasisFunction p() {
  return {"p", [](const Predictors& x) { return x.p; }};
}

BasisFunction p2() {
  return {"p^2", [](const Predictors& x) { return x.p * x.p; }};
}

BasisFunction p3() {
  return {"p^3", [](const Predictors& x) { return x.p * x.p * x.p; }};
}

BasisFunction k() {
  return {"k", [](const Predictors& x) { return x.k; }};
}

BasisFunction k2() {
  return {"k^2", [](const Predictors& x) { return x.k * x.k; }};
}

BasisFunction k3() {
  return {"k^3", [](const Predictors& x) { return x.k * x.k * x.k; }};
}

BasisSpec nlog2n_model() { return {"nlog2n", {one(), nlog2n()}}; }

BasisSpec linear_n_model() { return {"n_deg1", {one(), n()}}; }

BasisSpec poly_in_p(int degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("poly_in_p: degree " + std::to_string(degree) +
                                " outside [1, 3]");
  BasisSpec spec{"p_deg" + std::to_string(degree), {one(), p()}};
  if (degree >= 2) spec.functions.push_back(p2());
  if (degree >= 3) spec.functions.push_back(p3());
  return spec;
}

BasisSpec poly_in_k(int degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("poly_in_k: degree " + std::to_string(degree) +
                                " outside [1, 3]");
  BasisSpec spec{"k_deg" + std::to_string(degree), {one(), k()}};
  if (degree >= 2) spec.functions.push_back(k2());
  if (degree >= 3) spec.functions.push_back(k3());
  return spec;
}

BasisSpec named(const std::string& name) {
  if (name == "nlog2n") return nlog2n_model();
  if (name == "n_deg1") return linear_n_model();
  for (int d = 1; d <= 3; ++d) {
    if (name == "p_deg" + std::to_string(d)) return poly_in_p(d);
    if (name == "k_deg" + std::to_string(d)) return poly_in_k(d);
  }
  throw std::invalid_argument("unknown model name: " + name);
}

std::vector<std::string> known_names() {
  return {"nlog2n", "n_deg1", "p_deg1", "p_deg2", "p_deg3",
          "k_deg1", "k_deg2", "k_deg3"};
}

}  // namespace bases

namespace {

// Columns are pre-scaled to unit max-abs, so a residual norm this far below
// the O(1) norm of an independent column marks linear dependence.
constexpr double kRankTol = 1e-8;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

ModelFit least_squares_fit(std::span<const Point> points, const BasisSpec& basis) {
  const std::size_t N = points.size();
  const std::size_t P = basis.functions.size();
  if (P == 0) throw std::invalid_argument("least_squares_fit: empty basis");
  if (N < P)
    throw RankError("least_squares_fit: " + std::to_string(N) +
                    " points cannot identify " + std::to_string(P) +
                    " coefficients");

  std::vector<double> a(N * P);  // column-major design matrix
  std::vector<double> scale(P);
  for (std::size_t j = 0; j < P; ++j) {
    double mx = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double v = basis.functions[j].eval(points[i].x);
      a[j * N + i] = v;
      mx = std::max(mx, std::abs(v));
    }
    scale[j] = mx > 0 ? mx : 1.0;
    for (std::size_t i = 0; i < N; ++i) a[j * N + i] /= scale[j];
  }
  std::vector<double> qty(N);
  for (std::size_t i = 0; i < N; ++i) qty[i] = points[i].y;

  // Householder QR, reflecting qty alongside. A dependent column gets no
  // reflector; later columns keep being tested against the rank rows built
  // so far, so every dependent column is collected before throwing.
  const double tol = kRankTol * std::sqrt(static_cast<double>(N));
  std::vector<double> rdiag(P, 0.0);
  std::vector<std::string> dependent;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < P; ++j) {
    double* col = &a[j * N];
    double norm2 = 0;
    for (std::size_t i = rank; i < N; ++i) norm2 += col[i] * col[i];
    const double norm = std::sqrt(norm2);
    if (norm <= tol) {
      dependent.emplace_back(basis.functions[j].name);
      continue;
    }
    const double alpha = col[rank] >= 0 ? -norm : norm;
    col[rank] -= alpha;  // col[rank..N) now holds the reflector v
    double vnorm2 = 0;
    for (std::size_t i = rank; i < N; ++i) vnorm2 += col[i] * col[i];
    rdiag[rank] = alpha;
    const auto reflect = [&](double* u) {
      double dot = 0;
      for (std::size_t i = rank; i < N; ++i) dot += col[i] * u[i];
      const double s = 2.0 * dot / vnorm2;
      for (std::size_t i = rank; i < N; ++i) u[i] -= s * col[i];
    };
    for (std::size_t c = j + 1; c < P; ++c) reflect(&a[c * N]);
    reflect(qty.data());
    if (j != rank)  // compact columns left so R stays triangular
      std::memmove(&a[rank * N], &a[j * N], N * sizeof(double));
    ++rank;
  }
  if (!dependent.empty()) {
    std::string msg = "least_squares_fit: singular design, dependent columns:";
    for (const auto& c : dependent) msg += " " + c;
    throw SingularityError(msg, dependent);
  }

  std::vector<double> beta(P);
  for (std::size_t c = P; c-- > 0;) {
    double s = qty[c];
    for (std::size_t c2 = c + 1; c2 < P; ++c2) s -= a[c2 * N + c] * beta[c2];
    beta[c] = s / rdiag[c];
  }

  ModelFit fit;
  fit.model = basis.name;
  fit.coefficients.resize(P);
  fit.term_names.reserve(P);
  for (std::size_t j = 0; j < P; ++j) {
    fit.term_names.emplace_back(basis.functions[j].name);
    fit.coefficients[j] = beta[j] / scale[j];
    if (fit.term_names.back() == "1") fit.has_intercept = true;
  }

  double mean = 0;
  for (std::size_t i = 0; i < N; ++i) mean += points[i].y;
  mean /= static_cast<double>(N);
  double sse = 0, sst = 0;
  fit.residuals.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    double yhat = 0;
    for (std::size_t j = 0; j < P; ++j)
      yhat += fit.coefficients[j] * basis.functions[j].eval(points[i].x);
    const double r = points[i].y - yhat;
    fit.residuals[i] = r;
    sse += r * r;
    const double d = points[i].y - mean;
    sst += d * d;
  }
  fit.sse = sse;
  fit.r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
  fit.adj_r2 = N > P ? 1.0 - (1.0 - fit.r2) * static_cast<double>(N - 1) /
                                 static_cast<double>(N - P)
                     : fit.r2;
  return fit;
}

double predict(const ModelFit& fit, const Predictors& x) {
  static const BasisFunction registry[] = {
      bases::one(), bases::n(),  bases::nlog2n(), bases::p(), bases::p2(),
      bases::p3(),  bases::k(),  bases::k2(),     bases::k3()};
  double y = 0;
  for (std::size_t j = 0; j < fit.term_names.size(); ++j) {
    const BasisFunction* hit = nullptr;
    for (const auto& b : registry)
      if (fit.term_names[j] == b.name) {
        hit = &b;
        break;
      }
    if (hit == nullptr)
      throw std::invalid_argument("predict: unknown term " + fit.term_names[j]);
    y += fit.coefficients[j] * hit->eval(x);
  }
  return y;
}

SelectionReport select_model(std::span<const Point> points,
                             std::span<const BasisSpec> candidates) {
  if (candidates.empty())
    throw std::invalid_argument("select_model: no candidates");
  SelectionReport report;
  report.fits.reserve(candidates.size());
  for (const auto& c : candidates)
    report.fits.push_back(least_squares_fit(points, c));

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& f : report.fits) best = std::max(best, f.adj_r2);
  std::size_t chosen = 0;
  std::size_t chosen_terms = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < report.fits.size(); ++i) {
    if (report.fits[i].adj_r2 < best - kAdjR2Tie) continue;
    const std::size_t terms = report.fits[i].term_names.size();
    if (terms < chosen_terms) {
      chosen = i;
      chosen_terms = terms;
    }
  }
  report.chosen = chosen;
  return report;
}

std::string render_fit_report(const SelectionReport& report,
                              const std::string& reference_model) {
  std::string out;
  for (std::size_t i = 0; i < report.fits.size(); ++i) {
    const ModelFit& f = report.fits[i];
    out += "candidate " + f.model;
    if (i == report.chosen) out += " [selected]";
    out += "\n  R^2 = " + fmt("%.10f", f.r2) +
           "  adj R^2 = " + fmt("%.10f", f.adj_r2) +
           "  SSE = " + fmt("%.10e", f.sse) + "\n  y =";
    for (std::size_t j = 0; j < f.term_names.size(); ++j) {
      if (j > 0) out += " +";
      out += " " + fmt("%.10e", f.coefficients[j]) + " * " + f.term_names[j];
    }
    out += "\n";
  }
  const ModelFit& sel = report.fits[report.chosen];
  out += "selected: " + sel.model + " (" +
         std::to_string(sel.term_names.size()) + " functions)\n";
  if (!reference_model.empty()) {
    out += "reference: " + reference_model + "\n";
    out += std::string("rule concurs: ") +
           (sel.model == reference_model ? "yes" : "no") + "\n";
  }
  return out;
}

std::string fit_report_csv(const SelectionReport& report) {
  std::string out = "model,selected,functions,r2,adj_r2,sse,coefficients\n";
  for (std::size_t i = 0; i < report.fits.size(); ++i) {
    const ModelFit& f = report.fits[i];
    out += f.model + "," + (i == report.chosen ? "1" : "0") + "," +
           std::to_string(f.term_names.size()) + "," + fmt("%.17g", f.r2) +
           "," + fmt("%.17g", f.adj_r2) + "," + fmt("%.17g", f.sse) + ",";
    for (std::size_t j = 0; j < f.coefficients.size(); ++j) {
      if (j > 0) out += ";";
      out += fmt("%.17g", f.coefficients[j]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace psl
