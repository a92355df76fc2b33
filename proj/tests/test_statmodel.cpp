#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "psl/rng.hpp"
#include "psl/statmodel.hpp"
#include "support/oracles.hpp"

using psl::BasisSpec;
using psl::ModelFit;
using psl::Point;
using psl::Predictors;

namespace {

std::vector<Point> points_over_p(std::initializer_list<double> ps,
                                 double (*f)(double)) {
  std::vector<Point> out;
  for (double p : ps) out.push_back({{0, 0, p}, f(p)});
  return out;
}

}  // namespace

TEST_CASE("basis functions evaluate their formulas") {
  const Predictors x{8, 10, 0.3};
  CHECK(psl::bases::one().eval(x) == 1.0);
  CHECK(psl::bases::n().eval(x) == 8.0);
  CHECK(psl::bases::nlog2n().eval(x) == 24.0);
  CHECK(psl::bases::nlog2n().eval({0, 0, 0}) == 0.0);
  CHECK(psl::bases::p().eval(x) == 0.3);
  CHECK(psl::bases::p2().eval(x) == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(psl::bases::p3().eval(x) == doctest::Approx(0.027).epsilon(1e-15));
  CHECK(psl::bases::k().eval(x) == 10.0);
  CHECK(psl::bases::k2().eval(x) == 100.0);
  CHECK(psl::bases::k3().eval(x) == 1000.0);
}

TEST_CASE("model constructors and the name registry agree") {
  CHECK(psl::bases::nlog2n_model().functions.size() == 2);
  CHECK(psl::bases::poly_in_p(3).functions.size() == 4);
  CHECK_THROWS_AS(psl::bases::poly_in_p(0), std::invalid_argument);
  CHECK_THROWS_AS(psl::bases::poly_in_k(4), std::invalid_argument);

  for (const std::string& name : psl::bases::known_names()) {
    const BasisSpec spec = psl::bases::named(name);
    CHECK(spec.name == name);
    CHECK(!spec.functions.empty());
  }
  CHECK_THROWS_AS(psl::bases::named("bogus"), std::invalid_argument);
}

TEST_CASE("fit recovers exact polynomial data") {
  const auto pts = points_over_p({0.1, 0.2, 0.3, 0.5, 0.7, 0.9},
                                 [](double p) { return 2.0 + 3.0 * p - p * p; });
  const ModelFit fit = psl::least_squares_fit(pts, psl::bases::poly_in_p(2));
  REQUIRE(fit.coefficients.size() == 3);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.coefficients[2] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit.r2 > 1.0 - 1e-12);
  CHECK(fit.sse < 1e-18);
}

TEST_CASE("fit matches the closed-form line oracle") {
  psl::RngStream rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 5 + rng.next_below(20);
    std::vector<Point> pts;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = 10 * rng.next_unit();
      const double y = 3 - 2 * x + rng.next_unit();
      pts.push_back({{x, 0, 0}, y});
      xs.push_back(x);
      ys.push_back(y);
    }
    const ModelFit fit = psl::least_squares_fit(pts, psl::bases::linear_n_model());
    const oracle::Line want = oracle::fit_line(xs, ys);
    CHECK(fit.coefficients[0] == doctest::Approx(want.c0).epsilon(1e-10));
    CHECK(fit.coefficients[1] == doctest::Approx(want.c1).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(want.r2).epsilon(1e-10));
    CHECK(fit.adj_r2 == doctest::Approx(want.adj_r2).epsilon(1e-10));
    CHECK(fit.sse == doctest::Approx(want.sse).epsilon(1e-10));
  }
}

TEST_CASE("residuals are orthogonal to the fitted basis") {
  psl::RngStream rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) {
      const double p = rng.next_unit();
      pts.push_back({{0, 0, p}, std::sin(5 * p) + 0.1 * rng.next_unit()});
    }
    const BasisSpec basis = psl::bases::poly_in_p(3);
    const ModelFit fit = psl::least_squares_fit(pts, basis);
    for (const auto& fn : basis.functions) {
      double dot = 0, norm_f = 0, norm_r = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double fx = fn.eval(pts[i].x);
        dot += fx * fit.residuals[i];
        norm_f += fx * fx;
        norm_r += fit.residuals[i] * fit.residuals[i];
      }
      CHECK(std::fabs(dot) <= 1e-8 * std::max(1.0, std::sqrt(norm_f * norm_r)));
    }
  }
}

TEST_CASE("constant response gives r2 = 1 by convention") {
  std::vector<Point> pts;
  for (double p : {0.1, 0.3, 0.5, 0.7}) pts.push_back({{0, 0, p}, 5.0});
  const ModelFit fit = psl::least_squares_fit(pts, psl::bases::poly_in_p(1));
  CHECK(fit.r2 == 1.0);
  CHECK(fit.adj_r2 == 1.0);
}

TEST_CASE("underdetermined systems raise RankError") {
  std::vector<Point> pts{{{0, 0, 0.1}, 1.0}, {{0, 0, 0.2}, 2.0}};
  CHECK_THROWS_AS(psl::least_squares_fit(pts, psl::bases::poly_in_p(2)),
                  psl::RankError);
}

TEST_CASE("dependent columns raise SingularityError naming them") {
  const auto pts = points_over_p({0.1, 0.2, 0.4, 0.8},
                                 [](double p) { return 1 + p; });
  BasisSpec dup{"dup", {psl::bases::one(), psl::bases::p(), psl::bases::p()}};
  try {
    psl::least_squares_fit(pts, dup);
    FAIL("expected SingularityError");
  } catch (const psl::SingularityError& e) {
    REQUIRE(e.dependent_columns.size() == 1);
    CHECK(e.dependent_columns[0] == "p");
  }

  // A constant predictor column is collinear with the intercept.
  std::vector<Point> flat;
  for (double y : {1.0, 2.0, 3.0, 4.0}) flat.push_back({{0, 0, 0.4}, y});
  CHECK_THROWS_AS(psl::least_squares_fit(flat, psl::bases::poly_in_p(1)),
                  psl::SingularityError);
}

TEST_CASE("predict applies the stored coefficients") {
  const auto pts = points_over_p({0.1, 0.25, 0.5, 0.75},
                                 [](double p) { return 4 - 2 * p; });
  const ModelFit fit = psl::least_squares_fit(pts, psl::bases::poly_in_p(1));
  CHECK(psl::predict(fit, {0, 0, 0.6}) == doctest::Approx(2.8).epsilon(1e-9));

  ModelFit broken = fit;
  broken.term_names[1] = "mystery";
  CHECK_THROWS_AS(psl::predict(broken, {0, 0, 0.6}), std::invalid_argument);
}

TEST_CASE("select_model breaks ties toward fewer functions") {
  const auto pts = points_over_p({0.1, 0.2, 0.3, 0.5, 0.7, 0.9},
                                 [](double p) { return 1 + 2 * p; });
  const std::vector<BasisSpec> candidates{psl::bases::poly_in_p(2),
                                          psl::bases::poly_in_p(1)};
  const auto report = psl::select_model(pts, candidates);
  REQUIRE(report.fits.size() == 2);
  CHECK(report.fits[report.chosen].model == "p_deg1");
}

TEST_CASE("select_model prefers the clearly better fit") {
  const auto pts = points_over_p({0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.9},
                                 [](double p) { return std::exp(3 * p); });
  const std::vector<BasisSpec> candidates{psl::bases::poly_in_p(1),
                                          psl::bases::poly_in_p(3)};
  const auto report = psl::select_model(pts, candidates);
  CHECK(report.fits[report.chosen].model == "p_deg3");
}

TEST_CASE("report renderers emit the expected shape") {
  const auto pts = points_over_p({0.1, 0.2, 0.3, 0.5, 0.7, 0.9},
                                 [](double p) { return 1 + 2 * p; });
  const std::vector<BasisSpec> candidates{psl::bases::poly_in_p(1),
                                          psl::bases::poly_in_p(2)};
  const auto report = psl::select_model(pts, candidates);

  const std::string text = psl::render_fit_report(report, "p_deg1");
  CHECK(text.find("candidate p_deg1 [selected]") != std::string::npos);
  CHECK(text.find("candidate p_deg2") != std::string::npos);
  CHECK(text.find("selected: p_deg1") != std::string::npos);
  CHECK(text.find("reference: p_deg1") != std::string::npos);
  CHECK(text.find("rule concurs: yes") != std::string::npos);

  const std::string disagree = psl::render_fit_report(report, "p_deg2");
  CHECK(disagree.find("rule concurs: no") != std::string::npos);

  const std::string csv = psl::fit_report_csv(report);
  CHECK(csv.rfind("model,selected,functions,r2,adj_r2,sse,coefficients", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
