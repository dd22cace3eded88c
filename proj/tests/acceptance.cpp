// Acceptance run: one PASS/FAIL line per criterion 1..12, evidence recomputed
// here from library calls and the oracles in tests/oracle. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "isochron/analysis.hpp"
#include "isochron/parse.hpp"
#include "isochron/polyalg.hpp"
#include "isochron/roots.hpp"
#include "oracle/algebra_oracle.hpp"
#include "oracle/series_oracle.hpp"

using namespace isochron;
using oracle::QVec;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

const char* kC1 = "4*F^2+10*D*F+10*D^2-D-5*F+1";
const char* kC2 = "4*F^3+24*D*F+24*D^2+2*D*F^2-F^2-4*F-2*D+1";
const char* kR1 = "864*D^2+22176*D^4+7536*D^3+25920*D^5+9600*D^6";
const char* kR2 = "-17280*F^3+192+9000*F^2-2160*F-6480*F^5+15768*F^4+960*F^6";

Rational q(long a, long b = 1) { return Rational(mpz_class(a), mpz_class(b)); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok " : "NO ") + what);
  }
};

int failures = 0;

void run(int n, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s (%.1fs)\n", n, o.pass ? "PASS" : "FAIL", title, secs);
  for (const auto& s : o.notes) std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

bool proportional(const MultiPoly& a, const MultiPoly& b) {
  return !a.is_zero() && !b.is_zero() && poly_normalize(a) == poly_normalize(b);
}

std::string roots_text(const std::vector<IsolatingInterval>& iv) {
  std::ostringstream o;
  o << "{";
  for (size_t i = 0; i < iv.size(); ++i) {
    if (i) o << ", ";
    if (iv[i].exact)
      o << iv[i].exact->str();
    else
      o << "~" << ((iv[i].lo + iv[i].hi) / Rational(2)).to_double();
  }
  return o.str() + "}";
}

std::set<Rational> exact_set(const std::vector<IsolatingInterval>& iv, bool* all_exact) {
  std::set<Rational> s;
  *all_exact = true;
  for (const auto& r : iv) {
    if (r.exact)
      s.insert(*r.exact);
    else
      *all_exact = false;
  }
  return s;
}

LienardSystem loud_at(const Rational& D, const Rational& F) {
  FamilySpec s = catalog_example("loud").spec;
  s.parameters["D"] = RatFun(D);
  s.parameters["F"] = RatFun(F);
  return instantiate_family(s);
}

// a X / sqrt(1 + a^2 X^2), binomial series.
QVec odd_catalog(const Rational& a, int n) {
  QVec b = oracle::binomial(q(-1, 2), n), out(n + 1, Rational(0));
  Rational p = a;
  for (int m = 0; 2 * m + 1 <= n; ++m, p *= a * a) out[2 * m + 1] = b[m] * p;
  return out;
}

RSeries rseries(const QVec& c) {
  std::vector<RatFun> r;
  for (const auto& x : c) r.push_back(RatFun(x));
  return RSeries(Var::x, r);
}

double max_dev(const PeriodScan& s, double target) {
  double m = 0;
  for (const auto& r : s.rows) m = std::max(m, std::abs(r.period_ode - target));
  return m;
}

double max_agree(const PeriodScan& s) {
  double m = 0;
  for (const auto& r : s.rows) m = std::max(m, std::abs(r.period_ode - r.period_quad));
  return m;
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

}  // namespace

int main() {
  FamilySpec loud = catalog_example("loud").spec;
  const std::vector<double> amps = {0.05, 0.1, 0.15, 0.2, 0.225, 0.25};

  run(1, "Loud order-2 condition", [&](Outcome& o) {
    auto r = urabe_function(instantiate_family(loud), 8);
    auto cs = isochronicity_conditions(r);
    o.check(cs.conditions.at(0).k == 2 && cs.conditions.at(0).normalized == parse_poly(kC1),
            "normalized k=2 condition equals C1: " + cs.conditions.at(0).normalized.str());
    o.check(r.h[2] == parse_ratfun(kC1) / RatFun(12), "[X^2]h = C1/12");
  });

  run(2, "Loud order-4 condition modulo C1", [&](Outcome& o) {
    auto r = urabe_function(instantiate_family(loud), 8);
    auto cs = isochronicity_conditions(r);
    MultiPoly C1 = parse_poly(kC1), C2 = parse_poly(kC2);
    MultiPoly c4 = cs.conditions.at(1).normalized;
    MultiPoly c2red = reduce(C2, {C1});
    o.check(proportional(c4, C2) || proportional(c4, c2red),
            "k=4 condition reduced by C1 proportional to C2; engine: " + c4.str() + "; C2 mod C1: " + c2red.str());
    // Informational: C2 is the odd X^3 residual of the catalog form.
    auto rel = closed_form_relations(r);
    bool odd_route = !rel.conditions.empty() && proportional(reduce(rel.conditions[0].raw.num(), {C1}), c2red);
    o.notes.push_back(std::string("info: C2 mod C1 ") + (odd_route ? "equals" : "differs from") +
                      " the X^3 closed-form residual mod C1");
  });

  run(3, "Loud resultants, root sets and common solutions", [&](Outcome& o) {
    MultiPoly C1 = parse_poly(kC1), C2 = parse_poly(kC2);
    MultiPoly r1 = poly_resultant(C1, C2, "F"), r2 = poly_resultant(C1, C2, "D");
    o.check(proportional(r1, parse_poly(kR1)), "Res_F(C1,C2) proportional to printed R1");
    o.check(proportional(r2, parse_poly(kR2)), "Res_D(C1,C2) proportional to printed R2");
    bool e1, e2;
    auto i1 = isolate_real_roots(r1), i2 = isolate_real_roots(r2);
    auto s1 = exact_set(i1, &e1), s2 = exact_set(i2, &e2);
    o.check(e1 && s1 == std::set<Rational>{0, q(-1, 2)}, "real roots of R1 are {0, -1/2}; engine " + roots_text(i1));
    o.check(e2 && s2 == std::set<Rational>{1, 2, q(1, 4), q(1, 2)},
            "real roots of R2 are {1, 2, 1/4, 1/2}; engine " + roots_text(i2));
    auto res = solve_points({C1, C2}, EliminationPlan{{"F", "D"}});
    int pairs = 0;
    for (const auto& e : res.eliminants) pairs = std::max(pairs, e.complex_pairs);
    o.check(res.points.size() == 4 && pairs == 1, "solve_points on {C1, C2}: 4 real points and 1 complex pair; engine " +
                                                      std::to_string(res.points.size()) + " real, " +
                                                      std::to_string(pairs) + " complex pairs");
  });

  run(4, "Urabe closed forms of the Loud isochrones", [&](Outcome& o) {
    struct Case {
      Rational D, F, a;
      const char* name;
    };
    for (const auto& c : {Case{0, 1, 0, "(0,1): h = 0"}, Case{q(-1, 2), 2, 0, "(-1/2,2): h = 0"},
                          Case{0, q(1, 4), q(1, 4), "(0,1/4): X/sqrt(X^2+16)"},
                          Case{q(-1, 2), q(1, 2), q(1, 2), "(-1/2,1/2): X/sqrt(X^2+4)"}}) {
      auto r = urabe_function(loud_at(c.D, c.F), 12);
      QVec ref = odd_catalog(c.a, 12);
      int top = c.a == 0 ? 12 : 11;
      bool ok = true;
      for (int k = 0; k <= top; ++k) ok = ok && r.h[k] == RatFun(k < static_cast<int>(ref.size()) ? ref[k] : Rational(0));
      o.check(ok, std::string(c.name) + " through X^" + std::to_string(top));
    }
  });

  run(5, "Schaaf index equals 24 [X^2]h on 30 random systems", [&](Outcome& o) {
    std::mt19937_64 rng(5);
    int good = 0;
    for (int t = 0; t < 30; ++t) {
      QVec f(9), g(9);
      for (int k = 0; k <= 8; ++k) {
        f[k] = oracle::small_rational(rng, 3, 3);
        g[k] = oracle::small_rational(rng, 3, 3);
      }
      g[0] = 0;
      g[1] = 1;
      auto sys = LienardSystem::from_series(rseries(f), rseries(g));
      Rational oracle_S = 5 * (2 * g[2]) * (2 * g[2]) + 10 * (2 * g[2]) * f[0] + 8 * f[0] * f[0] - 3 * (6 * g[3]) - 6 * f[1];
      RatFun S = schaaf_index(sys).value;
      if (S == RatFun(oracle_S) && S == urabe_function(sys, 6).h[2] * RatFun(24)) ++good;
    }
    o.check(good == 30, std::to_string(good) + "/30 systems");
  });

  run(6, "cubic family index and the four solution families", [&](Outcome& o) {
    FamilySpec cubic = catalog_example("cubic").spec;
    auto sys = instantiate_family(cubic);
    o.check(schaaf_index(sys).value == parse_ratfun("20*a1^2+20*a1*a3+8*a3^2-18*a4-6*a6+6*b"), "S_C exact");
    auto conds = isochronicity_conditions(sys, 12).polynomials();
    struct Fam {
      const char* name;
      std::map<std::string, RatFun> a;
      const char* printed_x7;
    };
    std::vector<Fam> fams = {
        {"I", {{"a1", RatFun(0)}, {"a3", RatFun(0)}, {"a4", parse_ratfun("-2*b/3")}, {"a6", parse_ratfun("3*b")}}, nullptr},
        {"II", {{"a1", RatFun(0)}, {"a3", RatFun(0)}, {"a4", RatFun(0)}, {"a6", parse_ratfun("b")}}, nullptr},
        {"III",
         {{"a1", parse_ratfun("-a3/2")}, {"a4", parse_ratfun("a3^2/14")}, {"a6", parse_ratfun("3*a3^2/7")}, {"b", parse_ratfun("a3^2/7")}},
         "a3^7/3087"},
        {"IV", {{"a1", parse_ratfun("-a3/2")}, {"a4", RatFun(0)}, {"a6", parse_ratfun("a3^2")}, {"b", parse_ratfun("a3^2/2")}},
         "a3^7/72"}};
    for (const auto& f : fams) {
      auto v = verify_family(sys, conds, SolutionFamily{f.a, f.name, {}}, 12);
      o.check(v.verified && v.even_part_vanishes, std::string("family ") + f.name + " verified to order 12");
      if (!f.printed_x7) {
        o.check(!v.first_nonzero.has_value(), std::string("family ") + f.name + ": h = 0");
        continue;
      }
      RatFun x7 = v.pipeline.h[7];
      o.check(v.first_nonzero == 7, std::string("family ") + f.name + ": leading odd coefficient at X^7; engine first nonzero: " +
                                        (v.first_nonzero ? "X^" + std::to_string(*v.first_nonzero) : std::string("none (h = 0)")));
      // Numeric cross-check at a3 = 1 from the closed forms, independent of the series.
      std::map<std::string, Rational> at1 = {{"a3", Rational(1)}};
      LienardSystem s1 = sys.substituted(f.a).specialized(at1);
      double radius = 1 / std::sqrt(f.a.at("b").eval_full(at1).to_double());
      s1.validity_interval = std::make_pair(-radius, radius);
      NumericSystem ns = numeric_model(s1);
      double hmax = 0;
      for (double X = 0.05; X <= 0.4 + 1e-12; X += 0.05) hmax = std::max(hmax, std::abs(ns.h_numeric(X)));
      double fit = fit_h_coefficient(ns, 7, {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4});
      double printed = parse_ratfun(f.printed_x7).eval_full(at1).to_double();
      bool recorded = x7 == parse_ratfun(f.printed_x7) || (std::abs(fit - x7.eval_full(at1).to_double()) < 1e-3 * printed);
      o.check(recorded, std::string("family ") + f.name + ": [X^7]h engine " + x7.str() + " vs printed " + f.printed_x7 +
                            "; numeric fit at a3=1 " + sci(fit) + " (printed " + sci(printed) + "), max|h(X)| on X<=0.4 " +
                            sci(hmax));
    }
    AnalysisOptions opts;
    opts.stages = {Stage::conditions};
    auto rep = run_analysis(cubic, opts);
    o.notes.push_back(std::string("info: discrepancy report has ") + std::to_string(rep.discrepancies.size()) + " records");
  });

  run(7, "Kukles index, solve and branches", [&](Outcome& o) {
    FamilySpec k = catalog_example("kukles").spec;
    auto sys = instantiate_family(k);
    RatFun S = schaaf_index(sys).value;
    o.check(S == parse_ratfun("20*a1^2+20*a1*a3+8*a3^2-18*a4-6*a6"), "engine index " + S.str());
    o.check(S != parse_ratfun("10*a1^2+10*a1*a3+4*a3^2-9*a4-6*a6") &&
                !proportional(S.num(), parse_poly("10*a1^2+10*a1*a3+4*a3^2-9*a4-6*a6")),
            "printed S_K0 differs (flagged as a discrepancy)");
    AnalysisOptions opts;
    opts.stages = {Stage::conditions};
    FamilySpec k8 = k;
    k8.order = 8;
    auto rep = run_analysis(k8, opts);
    const Discrepancy* d = rep.find_discrepancy("Schaaf index S_K0");
    o.check(d && !d->match, "discrepancy record present");

    auto r = urabe_function(sys, 6);
    auto cs = isochronicity_conditions(r);
    std::map<std::string, int> w = {{"a1", 1}, {"a3", 1}, {"a4", 2}, {"a6", 2}};
    auto res = solve_points(cs, EliminationPlan{{"a4", "a3", "a6", "a1"}, {}, w, 3});
    int nonzero = 0;
    for (const auto& p : res.points)
      for (const auto& c : p.coords)
        if (std::abs(c.approx) > 1e-12) {
          ++nonzero;
          break;
        }
    o.check(nonzero == 0, "three conditions have only the zero solution; engine: " + std::to_string(res.points.size()) +
                              " points, " + std::to_string(nonzero) + " nonzero rays");

    MultiPoly Sp = cs.conditions.at(0).normalized;
    RatFun g2 = gtilde_derivative(r, 2), g4 = gtilde_derivative(r, 4);
    MultiPoly sigma2 = (g4 - RatFun(10) / RatFun(3) * g2.pow(3)).num();
    auto fams = kukles_branch_solve({Sp, sigma2});
    bool ii = false, i = false;
    RatFun pi4 = parse_ratfun("(2/9)*(20*a1^3+75*a1^2*a3+60*a1*a3^2+16*a3^3)/(-4*a1+3*a3)");
    RatFun pi6 = parse_ratfun("-(2/3)*(53*a1*a3^2+40*a1^3+10*a3^3+80*a1^2*a3)/(-4*a1+3*a3)");
    for (const auto& f : fams) {
      if (f.assignments.count("a4") && f.assignments.at("a4") == parse_ratfun("-a6/3")) ii = true;
      if (f.assignments.count("a4") && f.assignments.count("a6") && f.assignments.at("a4") == pi4 &&
          f.assignments.at("a6") == pi6)
        i = true;
    }
    o.check(ii, "branch (ii) a4 = -a6/3");
    o.check(i, "branch (i) matches the printed form, reading 60*a1a3^2 as 60*a1*a3^2");
  });

  run(8, "numeric isochrony of the Loud and cubic isochrones", [&](Outcome& o) {
    IntegratorConfig cfg;
    for (const char* id : {"loud-0-1", "loud-m1/2-2", "loud-0-1/4", "loud-m1/2-1/2", "cubic-I-b1", "cubic-II-b1",
                           "cubic-III-a1", "cubic-IV-a1"}) {
      FamilySpec s = catalog_example(id).spec;
      NumericSystem ns = numeric_model(instantiate_family(s));
      auto scan = scan_period(ns, amps, cfg);
      double dev = max_dev(scan, kTwoPi / std::sqrt(ns.frequency_scale)), agree = max_agree(scan);
      o.check(scan.rows.size() == 6 && dev < 1e-8 && agree < 1e-7,
              std::string(id) + ": max|T-2pi| " + sci(dev) + ", ODE vs quadrature " + sci(agree));
    }
  });

  run(9, "oscillator period law and conservative form", [&](Outcome& o) {
    IntegratorConfig cfg;
    for (const char* lam : {"1/2", "1", "2"})
      for (const char* al : {"1", "2"}) {
        FamilySpec s = catalog_example("oscillator").spec;
        s.set_parameter(std::string("lambda=") + lam);
        s.set_parameter(std::string("alpha=") + al);
        NumericSystem ns = numeric_model(instantiate_family(s));
        double l = parse_ratfun(lam).eval_full({}).to_double(), a = parse_ratfun(al).eval_full({}).to_double();
        double err = 0;
        for (double A : {0.1, 0.2, 0.3, 0.4, 0.5})
          err = std::max(err, std::abs(integrate_orbit(ns, A, cfg).period - kTwoPi * std::sqrt(1 + l * A * A) / a));
        o.check(err < 1e-8, std::string("lambda=") + lam + ", alpha=" + al + ", A<=0.5: max error " + sci(err));
      }
    auto r = urabe_function(LienardSystem::from_exprs(parse_expr("-x/(1+x^2)"), parse_expr("x/(1+x^2)"), 10), 9);
    RatFun w = RatFun::var("w");
    RatFun sh = (w - w.inv()) / RatFun(2), ch = (w + w.inv()) / RatFun(2);
    QVec ref = oracle::taylor_in_exp_variable(sh / ch.pow(3), 9);
    bool ok = true;
    for (int k = 0; k <= 9; ++k) ok = ok && r.gtilde[k] == RatFun(ref[k]);
    o.check(ok, "gtilde = sinh u / cosh^3 u through u^9");
  });

  run(10, "Schaaf example f = 0, g = 1 - (1+2x)^(-1/2)", [&](Outcome& o) {
    auto r = urabe_function(LienardSystem::from_exprs(parse_expr("0"), parse_expr("1 - (1+2*x)^(-1/2)"), 12), 12);
    bool ok = true;
    for (int k = 0; k <= 12; ++k) ok = ok && r.h[k] == RatFun(k == 1 ? 1 : 0);
    o.check(ok, "h = X through X^12");
    RatFun g1 = gtilde_derivative(r, 1), g2 = gtilde_derivative(r, 2), g3 = gtilde_derivative(r, 3);
    o.check((RatFun(5) * g2 * g2 - RatFun(3) * g1 * g3).is_zero(), "5 gtilde''^2 - 3 gtilde' gtilde''' = 0 at 0");
  });

  run(11, "constructive isochrone families", [&](Outcome& o) {
    for (const char* F : {"x", "log(1+x)", "x^2"}) {
      auto sys = trivial_isochrone_g(parse_expr(F).series(14), 12);
      o.check(isochronicity_conditions(sys, 12).all_zero(), std::string("F = ") + F + ": all conditions vanish to order 12");
    }
    FamilySpec refl = catalog_example("reflection").spec;
    auto sys = instantiate_family(refl);
    auto r = urabe_function(sys, 12);
    bool ok = true;
    for (int k = 0; k <= 12; ++k) ok = ok && r.h[k] == RatFun(k == 1 ? 1 : 0);
    o.check(ok, "f = 1/(1+x), g = x/(1+x)^2: h = X through X^12");
    auto scan = scan_period(numeric_model(sys), amps, {});
    double dev = max_dev(scan, kTwoPi);
    o.check(dev < 1e-8 && monotonicity_verdict(scan, 1e-8) == PeriodTrend::constant, "numeric period constant, max|T-2pi| " + sci(dev));
  });

  run(12, "property suites", [&](Outcome& o) {
    std::mt19937_64 rng(12);
    auto rq = [&](int n, bool zc) {
      QVec c = oracle::random_qvec(rng, n);
      if (zc) c[0] = 0;
      return QSeries(Var::x, c);
    };
    int bad = 0, total = 0;
    for (int t = 0; t < 40; ++t, ++total) {
      QSeries s = rq(10, true);
      s[1] = 1;
      QSeries r = reverse(s, Var::x);
      if (!(compose(s, r) == QSeries::identity(Var::x, 10) && r == QSeries(Var::x, oracle::lagrange_reverse(s.coeffs(), 10)))) ++bad;
    }
    for (int t = 0; t < 20; ++t, ++total) {
      QSeries a = rq(8, true), one = QSeries::constant(Var::x, 8, 1);
      if (!(log(exp(a)) == a && exp(log(a + one)) == a + one &&
            exp(a) == QSeries(Var::x, oracle::power_sum_exp(a.coeffs(), 8))))
        ++bad;
    }
    for (int t = 0; t < 20; ++t, ++total) {
      QSeries a = rq(8, true);
      a[1] = Rational(t % 4 + 1);
      QSeries s = a * a;
      if (!(sqrt_positive(s) == a.truncated(7))) ++bad;
    }
    o.check(bad == 0, "series round trips (reversion, exp/log, sqrt): " + std::to_string(total - bad) + "/" + std::to_string(total));

    int rbad = 0, rtotal = 0;
    for (int t = 0; t < 60; ++t) {
      auto up = [&](int d) {
        std::vector<Rational> c;
        for (int i = 0; i <= d; ++i) c.push_back(oracle::small_rational(rng));
        if (c.back().is_zero()) c.back() = 1;
        return UPoly(c);
      };
      UPoly a = up(1 + rng() % 4), b = up(1 + rng() % 4);
      if (t % 3 == 0) {
        UPoly f = up(1);
        a = a * f;
        b = b * f;
      }
      if (a.degree() < 1 || b.degree() < 1) continue;
      ++rtotal;
      if (resultant(a, b).is_zero() != (gcd(a, b).degree() > 0)) ++rbad;
      MultiPoly ma = a.to_multi("x"), mb = b.to_multi("x");
      if (!(poly_resultant(ma, mb, "x") == oracle::sylvester_det(ma, mb, "x"))) ++rbad;
    }
    o.check(rbad == 0, "resultant vs gcd and Sylvester determinant: " + std::to_string(rtotal) + " pairs, " +
                           std::to_string(rbad) + " failures");

    int sbad = 0;
    for (int t = 0; t < 60; ++t) {
      UPoly p(Rational(1));
      std::set<Rational> used;
      int k = 1 + rng() % 4;
      for (int j = 0; j < k; ++j) {
        Rational r = oracle::small_rational(rng, 30, 4) / Rational(2);
        if (!used.insert(r).second) continue;
        p = p * UPoly({-r, Rational(1)});
      }
      if (rng() % 2) p = p * UPoly({Rational(2 + rng() % 5), Rational(0), Rational(-1)});
      if (rng() % 2) p = p * UPoly({Rational(1 + rng() % 3), Rational(0), Rational(1)});
      auto iso = isolate_real_roots(p);
      if (static_cast<int>(iso.size()) != oracle::brute_root_count(p, Rational(-16), Rational(16), q(1, 1024))) ++sbad;
    }
    o.check(sbad == 0, "Sturm isolation vs brute-force sign scan: 60 polynomials, " + std::to_string(sbad) + " failures");
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures ? 1 : 0;
}
