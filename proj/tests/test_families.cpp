#include <doctest.h>

#include <cmath>

#include "isochron/analysis.hpp"
#include "isochron/parse.hpp"
#include "oracle/series_oracle.hpp"

using namespace isochron;

namespace {

Rational q(long a, long b = 1) { return Rational(mpz_class(a), mpz_class(b)); }

}  // namespace

TEST_CASE("Expr derivative against finite differences") {
  for (std::string src : {"x^3 - 2*x", "exp(2*x)/(1+x^2)", "log(1+x)*sqrt(1+x)", "(1+x)^x", "(1+2*x)^(-1/2)"}) {
    CAPTURE(src);
    Expr e = parse_expr(src), d = e.diff();
    for (double x : {0.1, 0.4}) {
      double fd = (e.eval(x + 1e-6) - e.eval(x - 1e-6)) / 2e-6;
      CHECK(d.eval(x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  CHECK(parse_expr("D*x^2").diff().to_ratfun() == parse_ratfun("2*D*x"));
}

TEST_CASE("Expr substitution folds constants") {
  Expr e = parse_expr("a*x + b").substitute(std::map<std::string, Rational>{{"a", Rational(0)}, {"b", q(1, 4)}});
  CHECK(e.str() == "1/4");
  Expr p = parse_expr("(1 + a)^2").substitute(std::map<std::string, Rational>{{"a", Rational(1)}});
  CHECK(p.str() == "4");
}

TEST_CASE("Expr series against the Taylor oracle") {
  RatFun r = parse_ratfun("(1+3*x)/(1-x+x^2)");
  auto ref = oracle::taylor_by_differentiation(r, 8);
  RSeries s = parse_expr("(1+3*x)/(1-x+x^2)").series(8);
  for (int k = 0; k <= 8; ++k) CHECK(s[k] == RatFun(ref[k]));
}

TEST_CASE("catalog closure") {
  for (const auto& ex : catalog_examples()) {
    CAPTURE(ex.id);
    FamilySpec s = ex.spec;
    s.order = 8;
    LienardSystem sys;
    CHECK_NOTHROW(sys = instantiate_family(s));
    CHECK_NOTHROW(sys.check_normalized());
    CHECK(&catalog_example(ex.id) != nullptr);
  }
  CHECK_THROWS(catalog_example("no-such-example"));
  std::set<std::string> names;
  for (const auto& f : family_catalog()) names.insert(f.name);
  for (const char* n : {"loud", "kukles_k0", "cubic_c", "eq_general", "oscillator", "custom"}) CHECK(names.count(n));
}

TEST_CASE("family validation") {
  FamilySpec s;
  s.name = "loud";
  s.set_parameter("D=0");
  CHECK_THROWS_AS(instantiate_family(s), DomainError);  // F missing
  s.set_parameter("F=1/4");
  CHECK_NOTHROW(instantiate_family(s));
  s.set_parameter("Q=1");
  CHECK_THROWS_AS(instantiate_family(s), DomainError);
  FamilySpec low = catalog_example("loud").spec;
  low.order = 6;
  CHECK_THROWS_AS(instantiate_family(low), DomainError);
  FamilySpec unknown;
  unknown.name = "nope";
  CHECK_THROWS_AS(instantiate_family(unknown), DomainError);
  FamilySpec osc = catalog_example("oscillator").spec;
  osc.set_parameter("alpha=0");
  CHECK_THROWS_AS(instantiate_family(osc), DomainError);
}

TEST_CASE("parameter values may depend on other parameters") {
  FamilySpec s = catalog_example("cubic-III-a1").spec;
  CHECK(s.variant == "III");
  auto sys = instantiate_family(s);
  CHECK_FALSE(sys.is_parametric());
  // b = a3^2 / 7 = 1/7, g = (x + a1 x^2 + a4 x^3)(1 - b x^2), a1 = -1/2, a4 = 1/14.
  CHECK(sys.g[2] == RatFun(q(-1, 2)));
  CHECK(sys.g[3] == RatFun(q(1, 14) - q(1, 7)));
}

TEST_CASE("reduce_Eq reproduces the oscillator and Loud forms") {
  // x' = -y, y' = x/(1+x^2) - x y^2/(1+x^2).
  auto osc = reduce_Eq(parse_expr("1"), parse_expr("x/(1+x^2)"), parse_expr("-x/(1+x^2)"), 10);
  auto ref = LienardSystem::from_exprs(parse_expr("-x/(1+x^2)"), parse_expr("x/(1+x^2)"), 10);
  for (int k = 0; k <= 10; ++k) {
    CHECK(osc.f[k] == ref.f[k]);
    CHECK(osc.g[k] == ref.g[k]);
  }
  FamilySpec eq = catalog_example("eq-loud").spec;
  FamilySpec loud = catalog_example("loud").spec;
  eq.order = loud.order = 8;
  auto a = instantiate_family(eq), b = instantiate_family(loud);
  CHECK(isochronicity_conditions(a, 8).conditions.at(0).normalized ==
        isochronicity_conditions(b, 8).conditions.at(0).normalized);
  // Frequency normalization: alpha beta = 4x.
  auto scaled = reduce_Eq(parse_expr("2"), parse_expr("2*x"), parse_expr("0"), 8);
  CHECK(scaled.frequency_scale == Rational(4));
  CHECK_THROWS_AS(reduce_Eq(parse_expr("x"), parse_expr("x"), parse_expr("0"), 8), DomainError);
}

TEST_CASE("closed forms for the Loud points") {
  FamilySpec s = catalog_example("loud-0-1/4").spec;
  auto cf = closed_form_urabe(s, 11);
  REQUIRE(cf.has_value());
  CHECK(cf->eval(0.3) == doctest::Approx(0.3 / std::sqrt(0.09 + 16)));
  auto r = urabe_function(instantiate_family(s), 11);
  for (int k = 0; k <= 11; ++k) CHECK(cf->series[k] == r.h[k]);
  CHECK_FALSE(closed_form_urabe(catalog_example("kukles").spec, 8).has_value());
}

TEST_CASE("analysis report: determinism and JSON round trip") {
  FamilySpec s = catalog_example("loud-0-1/4").spec;
  AnalysisOptions o;
  o.stages = {Stage::conditions, Stage::verify_numeric};
  auto a = run_analysis(s, o), b = run_analysis(s, o);
  CHECK(a == b);
  CHECK(a.exit_code() == 0);
  std::string js = export_report(a, ReportFormat::json);
  CHECK(report_from_json(js) == a);
  CHECK(export_report(report_from_json(js), ReportFormat::json) == js);
  std::string csv = export_report(a, ReportFormat::csv);
  CHECK(csv.rfind("amplitude,period_ode,period_quad,energy_c", 0) == 0);
  AnalysisOptions c;
  auto cond = run_analysis(s, c);
  CHECK_THROWS_AS(export_report(cond, ReportFormat::csv), DomainError);
}

TEST_CASE("analysis verdicts and exit codes") {
  AnalysisOptions o;
  o.stages = {Stage::conditions, Stage::verify_numeric};
  o.integrator.max_time = 100;
  FamilySpec osc = catalog_example("oscillator").spec;
  osc.amplitudes = {0.1, 0.2, 0.3};
  auto rep = run_analysis(osc, o);
  CHECK(rep.exit_code() == 2);
  REQUIRE(rep.numeric.has_value());
  CHECK(rep.numeric->trend == "increasing");
  REQUIRE(rep.numeric->reference_law_max_error.has_value());
  CHECK(*rep.numeric->reference_law_max_error < 1e-8);

  FamilySpec sym = catalog_example("loud").spec;
  AnalysisOptions n;
  n.stages = {Stage::verify_numeric};
  CHECK_THROWS_AS(run_analysis(sym, n), DomainError);
  FamilySpec fixed = catalog_example("loud-0-1").spec;
  AnalysisOptions sv;
  sv.stages = {Stage::solve};
  CHECK_THROWS_AS(run_analysis(fixed, sv), DomainError);
}

TEST_CASE("configuration parsing") {
  auto c = parse_config(R"({"family": "loud", "parameters": {"D": "0", "F": null}, "order": 10,
                            "stages": ["conditions"], "integrator": {"rel_tol": 1e-9}})");
  CHECK(c.spec.name == "loud");
  CHECK(c.spec.parameters.at("D").has_value());
  CHECK_FALSE(c.spec.parameters.at("F").has_value());
  CHECK(c.spec.order == 10);
  CHECK(c.stages_given);
  CHECK(c.options.integrator.rel_tol == 1e-9);
  CHECK_THROWS(parse_config(R"({"family": "loud", "typo": 1})"));
  CHECK_THROWS(parse_config(R"({"family": "loud", "integrator": {"rtol": 1}})"));
  CHECK_THROWS(parse_config("not json"));
}
