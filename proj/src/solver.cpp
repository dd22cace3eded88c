#include "isochron/solver.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "isochron/algebraic.hpp"
#include "isochron/errors.hpp"
#include "isochron/polyalg.hpp"

namespace isochron {

std::string Coordinate::str() const {
  if (exact) return exact->str();
  return "root of " + defining.primitive().str(var) + " in [" + interval.lo.str() + ", " + interval.hi.str() + "]";
}

bool SolutionPoint::is_rational() const {
  return std::all_of(coords.begin(), coords.end(), [](const Coordinate& c) { return c.exact.has_value(); });
}

std::map<std::string, Rational> SolutionPoint::rational_values() const {
  std::map<std::string, Rational> out;
  for (const auto& c : coords) {
    if (!c.exact) throw DomainError("point has irrational coordinate " + c.var);
    out.emplace(c.var, *c.exact);
  }
  return out;
}

const Coordinate& SolutionPoint::at(const std::string& var) const {
  for (const auto& c : coords)
    if (c.var == var) return c;
  throw DomainError("no coordinate " + var);
}

namespace {

const char* kDegenerate = "positive-dimensional or degenerate elimination; supply a different order or use verify_family";

using AlgPoly = std::vector<UPoly>;  // coefficients in Q[alpha], index = degree

// Value of p at an assignment of every variable it uses.
UPoly eval_alg(const MultiPoly& p, const std::map<std::string, UPoly>& at, RealAlgebraic& ctx) {
  std::vector<const UPoly*> vals;
  for (const auto& v : p.vars()) {
    auto it = at.find(v);
    if (it == at.end()) {
      if (p.degree(v) > 0) throw InternalConsistencyError("unassigned variable " + v);
      vals.push_back(nullptr);
    } else {
      vals.push_back(&it->second);
    }
  }
  std::map<std::pair<std::size_t, unsigned>, UPoly> pw;
  auto power = [&](std::size_t i, unsigned e) -> const UPoly& {
    auto key = std::make_pair(i, e);
    auto it = pw.find(key);
    if (it != pw.end()) return it->second;
    UPoly r = Rational(1);
    for (unsigned k = 0; k < e; ++k) r = ctx.mul(r, *vals[i]);
    return pw.emplace(key, r).first->second;
  };
  UPoly sum;
  for (const auto& t : p.terms()) {
    UPoly term = t.c;
    for (std::size_t i = 0; i < p.vars().size(); ++i)
      if (t.m.e[i] > 0) term = ctx.mul(term, power(i, t.m.e[i]));
    sum = sum + term;
  }
  return ctx.reduce(sum);
}

AlgPoly specialize(const MultiPoly& p, const std::string& var, const std::map<std::string, UPoly>& at,
                   RealAlgebraic& ctx) {
  AlgPoly out;
  for (const auto& c : p.coeffs_in(var)) out.push_back(eval_alg(c, at, ctx));
  return out;
}

void strip(AlgPoly& a, RealAlgebraic& ctx) {
  for (auto& c : a) c = ctx.reduce(c);
  while (!a.empty() && ctx.is_zero(a.back())) a.pop_back();
  for (auto& c : a) c = ctx.reduce(c);
}

AlgPoly alg_rem(AlgPoly a, const AlgPoly& b, RealAlgebraic& ctx) {
  UPoly inv = ctx.inverse(b.back());
  int db = static_cast<int>(b.size()) - 1;
  strip(a, ctx);
  while (static_cast<int>(a.size()) - 1 >= db) {
    int shift = static_cast<int>(a.size()) - 1 - db;
    UPoly f = ctx.mul(a.back(), inv);
    for (int i = 0; i <= db; ++i) a[i + shift] = ctx.reduce(a[i + shift] - ctx.mul(f, b[i]));
    a.pop_back();
    strip(a, ctx);
  }
  return a;
}

AlgPoly alg_gcd(AlgPoly a, AlgPoly b, RealAlgebraic& ctx) {
  strip(a, ctx);
  strip(b, ctx);
  while (!b.empty()) {
    AlgPoly r = alg_rem(a, b, ctx);
    a = std::move(b);
    b = std::move(r);
    strip(a, ctx);
  }
  if (a.empty()) return a;
  UPoly inv = ctx.inverse(a.back());
  for (auto& c : a) c = ctx.mul(c, inv);
  return a;
}

// Polynomials with positive degree in the last variable are eliminated pairwise
// against a pivot of lowest degree.
struct Elimination {
  std::vector<std::string> order;
  std::vector<std::vector<MultiPoly>> levels;  // levels[i] still contains order[i]
  std::vector<MultiPoly> final_polys;          // univariate in order.back()
  bool inconsistent = false;
};

std::vector<MultiPoly> dedupe(std::vector<MultiPoly> ps) {
  std::vector<MultiPoly> out;
  for (auto& p : ps) {
    p = poly_normalize(p).trimmed();
    if (p.is_zero()) continue;
    bool dup = false;
    for (const auto& q : out)
      if (q == p) dup = true;
    if (!dup) out.push_back(p);
  }
  return out;
}

Elimination eliminate(const std::vector<MultiPoly>& conds, const std::vector<std::string>& order) {
  Elimination e;
  e.order = order;
  std::vector<MultiPoly> cur = dedupe(conds);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const std::string& v = order[i];
    e.levels.push_back(cur);
    std::vector<MultiPoly> with, next;
    for (const auto& p : cur) (p.degree(v) > 0 ? with : next).push_back(p);
    if (with.size() >= 2) {
      std::size_t piv = 0;
      for (std::size_t j = 1; j < with.size(); ++j) {
        int dj = with[j].degree(v), dp = with[piv].degree(v);
        if (dj < dp || (dj == dp && with[j].size() < with[piv].size())) piv = j;
      }
      for (std::size_t j = 0; j < with.size(); ++j) {
        if (j == piv) continue;
        MultiPoly r = poly_resultant(with[piv], with[j], v);
        if (r.is_zero()) throw DegenerateEliminationError(kDegenerate);
        next.push_back(poly_squarefree(r));
      }
    }
    cur = dedupe(next);
    for (const auto& p : cur)
      if (p.is_constant()) {
        e.inconsistent = true;
        return e;
      }
  }
  e.levels.push_back(cur);
  for (const auto& p : cur) {
    for (const auto& u : p.used_vars())
      if (u != order.back()) throw DomainError("elimination plan does not cover variable " + u);
    if (p.is_constant()) e.inconsistent = true;
  }
  e.final_polys = cur;
  return e;
}

Coordinate make_coordinate(const std::string& var, const UPoly& value, RealAlgebraic& ctx) {
  Coordinate c;
  c.var = var;
  UPoly v = ctx.reduce(value);
  if (v.degree() <= 0 || ctx.is_rational()) {
    Rational r = ctx.is_rational() ? v.eval(ctx.rational_value()) : v.coeff(0);
    c.exact = r;
    c.defining = UPoly({-r, Rational(1)});
    c.interval = {r, r, r, 1};
    c.approx = r.to_double();
    return c;
  }
  // Defining polynomial of beta = v(alpha): Res_t(q(t), y - v(t)).
  MultiPoly q = ctx.modulus().to_multi("t");
  MultiPoly y = MultiPoly::var("y") - v.to_multi("t");
  UPoly def = squarefree_part(UPoly::from_multi(poly_resultant(q, y, "t")));
  auto roots = isolate_real_roots(def);
  Rational w = Rational(1);
  while (true) {
    auto [lo, hi] = ctx.enclose(v, w);
    std::vector<IsolatingInterval*> hits;
    for (auto& r : roots)
      if (!(r.hi < lo) && !(hi < r.lo)) hits.push_back(&r);
    if (hits.size() == 1) {
      IsolatingInterval iv = *hits[0];
      if (iv.exact && ctx.is_zero(v - UPoly(*iv.exact))) {
        c.exact = *iv.exact;
        c.defining = UPoly({-*iv.exact, Rational(1)});
        c.interval = iv;
        c.approx = iv.exact->to_double();
        return c;
      }
      if (!iv.exact) {
        c.defining = def.monic();
        c.interval = iv;
        refine(c.interval, def, Rational(mpz_class(1), mpz_class(1) << 64));
        c.approx = ctx.approx(v);
        return c;
      }
    }
    if (hits.empty()) throw InternalConsistencyError("coordinate enclosure misses every root of its defining polynomial");
    w = (hi - lo) / Rational(64);
    if (w.is_zero()) w = Rational(mpz_class(1), mpz_class(1) << 100);
    for (auto* r : hits)
      if (!r->exact) refine(*r, def, (r->hi - r->lo) / Rational(64));
  }
}

bool point_less(const SolutionPoint& a, const SolutionPoint& b) {
  if (a.chart != b.chart) return a.chart < b.chart;
  for (std::size_t i = 0; i < a.coords.size() && i < b.coords.size(); ++i) {
    const auto &x = a.coords[i], &y = b.coords[i];
    if (x.exact && y.exact) {
      if (*x.exact != *y.exact) return *x.exact < *y.exact;
    } else if (x.approx != y.approx) {
      return x.approx < y.approx;
    }
  }
  return false;
}

EliminantInfo eliminant_info(const UPoly& p, const std::string& var, const std::string& chart) {
  EliminantInfo info;
  info.var = var;
  info.chart = chart;
  info.poly = p.primitive();
  info.degree = p.degree();
  if (info.degree > kRootReportDegree) {
    info.distinct_real_roots = info.real_roots_with_multiplicity = info.complex_pairs = -1;
    return info;
  }
  info.roots = isolate_real_roots(p);
  info.distinct_real_roots = static_cast<int>(info.roots.size());
  for (const auto& r : info.roots) info.real_roots_with_multiplicity += r.multiplicity;
  info.complex_pairs = (info.degree - info.real_roots_with_multiplicity) / 2;
  return info;
}

SolveResult solve_plain(const std::vector<MultiPoly>& conds, const std::vector<std::string>& order,
                        const std::string& chart, int limit) {
  SolveResult res;
  if (order.empty()) {
    bool all = true;
    for (const auto& c : conds)
      if (!c.is_zero()) all = false;
    if (all) {
      SolutionPoint p;
      p.chart = chart;
      p.verified = true;
      p.conditions_checked = static_cast<int>(conds.size());
      res.points.push_back(p);
    }
    return res;
  }
  std::vector<MultiPoly> drive = conds;
  if (limit > 0 && static_cast<int>(drive.size()) > limit) drive.resize(limit);
  Elimination el = eliminate(drive, order);
  if (el.inconsistent) {
    res.log.push_back((chart.empty() ? std::string() : chart + ": ") + "eliminants are inconsistent (no solutions)");
    return res;
  }
  const std::string& last = order.back();
  if (el.final_polys.empty()) throw DegenerateEliminationError(kDegenerate);
  UPoly G;
  for (const auto& p : el.final_polys) {
    UPoly u = UPoly::from_multi(p);
    res.eliminants.push_back(eliminant_info(u, last, chart));
    G = gcd(G, u);
  }
  if (G.degree() <= 0) return res;
  UPoly sqf = squarefree_part(G);

  std::function<void(std::size_t, RealAlgebraic, std::map<std::string, UPoly>)> lift;
  lift = [&](std::size_t level, RealAlgebraic ctx, std::map<std::string, UPoly> at) {
    if (level == 0) {
      for (const auto& c : conds)
        if (!ctx.is_zero(eval_alg(c, at, ctx))) {
          std::string desc;
          for (const auto& [k, v] : at) desc += k + "~" + std::to_string(ctx.approx(v)) + " ";
          res.log.push_back((chart.empty() ? std::string() : chart + ": ") + "discarded unverified candidate " + desc);
          return;
        }
      SolutionPoint p;
      p.chart = chart;
      p.verified = true;
      p.conditions_checked = static_cast<int>(conds.size());
      for (const auto& [k, v] : at) p.coords.push_back(make_coordinate(k, v, ctx));
      res.points.push_back(p);
      return;
    }
    const std::string& v = order[level - 1];
    AlgPoly g;
    bool any = false;
    for (const auto& p : el.levels[level - 1]) {
      if (p.degree(v) <= 0) continue;
      AlgPoly s = specialize(p, v, at, ctx);
      strip(s, ctx);
      if (s.empty()) continue;
      g = any ? alg_gcd(g, s, ctx) : alg_gcd(s, {}, ctx);
      any = true;
    }
    if (!any) throw DegenerateEliminationError(kDegenerate);
    int d = static_cast<int>(g.size()) - 1;
    if (d <= 0) {
      res.log.push_back((chart.empty() ? std::string() : chart + ": ") + "root of the " + last +
                        "-eliminant near " + std::to_string(ctx.approx(UPoly::t())) + " has no common lift in " + v);
      return;
    }
    if (d == 1) {
      at[v] = ctx.reduce(-g[0]);
      lift(level - 1, ctx, at);
      return;
    }
    if (!ctx.is_rational()) throw DegenerateEliminationError("fiber over an irrational point needs a tower of extensions");
    Rational a = ctx.rational_value();
    std::vector<Rational> coeffs;
    for (const auto& c : g) coeffs.push_back(c.eval(a));
    UPoly fiber(coeffs);
    UPoly fsq = squarefree_part(fiber);
    for (const auto& iv : isolate_real_roots(fsq)) {
      RealAlgebraic sub(fsq, iv);
      std::map<std::string, UPoly> at2;
      for (const auto& [k, val] : at) at2[k] = UPoly(val.eval(a));
      at2[v] = UPoly::t();
      lift(level - 1, sub, at2);
    }
  };

  for (const auto& iv : isolate_real_roots(sqf)) {
    RealAlgebraic ctx(sqf, iv);
    lift(order.size() - 1, ctx, {{last, UPoly::t()}});
  }
  return res;
}

std::vector<std::string> used_variables(const std::vector<MultiPoly>& conds) {
  std::set<std::string> names;
  for (const auto& c : conds)
    for (const auto& v : c.used_vars()) names.insert(v);
  return {names.begin(), names.end()};
}

bool weighted_homogeneous(const MultiPoly& p, const std::map<std::string, int>& w) {
  std::optional<long> deg;
  for (const auto& t : p.terms()) {
    long d = 0;
    for (std::size_t i = 0; i < p.vars().size(); ++i) {
      auto it = w.find(p.vars()[i]);
      if (t.m.e[i] > 0 && it == w.end()) return false;
      if (t.m.e[i] > 0) d += static_cast<long>(it->second) * t.m.e[i];
    }
    if (deg && *deg != d) return false;
    deg = d;
  }
  return true;
}

}  // namespace

SolveResult solve_points(const std::vector<MultiPoly>& conds0, const EliminationPlan& plan) {
  if (!plan.keep.empty()) throw DomainError("solve_points needs an empty keep list; use verify_family for families");
  std::vector<MultiPoly> conds;
  for (const auto& c : conds0)
    if (!c.is_zero()) conds.push_back(c.trimmed());
  if (conds.empty()) throw DegenerateEliminationError(kDegenerate);
  auto used = used_variables(conds);
  for (const auto& u : used)
    if (std::find(plan.variable_order.begin(), plan.variable_order.end(), u) == plan.variable_order.end())
      throw DomainError("elimination plan does not cover variable " + u);

  SolveResult out;
  if (plan.weights.empty()) {
    out = solve_plain(conds, plan.variable_order, "", plan.elimination_limit);
  } else {
    for (const auto& c : conds)
      if (!weighted_homogeneous(c, plan.weights))
        throw DomainError("conditions are not weighted-homogeneous for the given weights");
    std::vector<std::string> vars = plan.variable_order;
    std::stable_sort(vars.begin(), vars.end(), [&](const std::string& a, const std::string& b) {
      int wa = plan.weights.count(a) ? plan.weights.at(a) : 1, wb = plan.weights.count(b) ? plan.weights.at(b) : 1;
      return wa != wb ? wa < wb : a < b;
    });
    for (std::size_t j = 0; j <= vars.size(); ++j) {
      std::vector<int> signs = {1};
      if (j < vars.size() && plan.weights.count(vars[j]) && plan.weights.at(vars[j]) % 2 == 0) signs = {1, -1};
      if (j == vars.size()) signs = {0};
      for (int s : signs) {
        std::map<std::string, Rational> fixed;
        std::string label;
        for (std::size_t i = 0; i < j; ++i) {
          fixed[vars[i]] = 0;
          label += vars[i] + "=0,";
        }
        if (j < vars.size()) {
          fixed[vars[j]] = s;
          label += vars[j] + "=" + std::to_string(s);
        } else {
          label = label.empty() ? "origin" : label.substr(0, label.size() - 1);
        }
        std::vector<MultiPoly> sub;
        bool empty_chart = false;
        for (const auto& c : conds) {
          MultiPoly p = c.eval(fixed, false).trimmed();
          if (p.is_zero()) continue;
          if (p.is_constant()) empty_chart = true;
          sub.push_back(p);
        }
        if (empty_chart) continue;
        std::vector<std::string> order;
        for (const auto& v : plan.variable_order)
          if (!fixed.count(v)) order.push_back(v);
        SolveResult part;
        try {
          part = solve_plain(sub, order, label, plan.elimination_limit);
        } catch (const DegenerateEliminationError& e) {
          throw DegenerateEliminationError(std::string(e.what()) + " (chart " + label + ")");
        }
        for (auto& p : part.points) {
          for (const auto& [k, v] : fixed) {
            Coordinate c;
            c.var = k;
            c.exact = v;
            c.defining = UPoly({-v, Rational(1)});
            c.interval = {v, v, v, 1};
            c.approx = v.to_double();
            p.coords.push_back(c);
          }
          std::sort(p.coords.begin(), p.coords.end(),
                    [](const Coordinate& a, const Coordinate& b) { return a.var < b.var; });
          out.points.push_back(p);
        }
        out.eliminants.insert(out.eliminants.end(), part.eliminants.begin(), part.eliminants.end());
        out.log.insert(out.log.end(), part.log.begin(), part.log.end());
      }
    }
  }
  for (auto& p : out.points)
    std::sort(p.coords.begin(), p.coords.end(), [](const Coordinate& a, const Coordinate& b) { return a.var < b.var; });
  std::sort(out.points.begin(), out.points.end(), point_less);
  return out;
}

SolveResult solve_points(const ConditionSet& conds, const EliminationPlan& plan) {
  return solve_points(conds.polynomials(), plan);
}

FamilyVerification verify_family(const LienardSystem& sys, const std::vector<MultiPoly>& conds,
                                 const SolutionFamily& family, int N) {
  FamilyVerification v;
  v.label = family.label;
  v.order = N;
  v.conditions_vanish = true;
  for (const auto& c : conds)
    if (!substitute(c, family.assignments).is_zero()) v.conditions_vanish = false;
  LienardSystem s = sys.substituted(family.assignments);
  s.provenance = sys.provenance + " | " + family.label;
  v.pipeline = urabe_function(s, N);
  const RSeries& h = v.pipeline.h;
  v.even_part_vanishes = true;
  for (int k = 0; k <= h.order(); ++k) {
    if (h[k].is_zero()) continue;
    if (!v.first_nonzero) v.first_nonzero = k;
    if (k % 2 == 0) {
      v.even_part_vanishes = false;
      v.nonzero_even.emplace_back(k, h[k]);
    } else {
      v.odd.emplace_back(k, h[k]);
    }
  }
  v.verified = v.conditions_vanish && v.even_part_vanishes;
  return v;
}

std::vector<SolutionFamily> kukles_branch_solve(const std::vector<MultiPoly>& conds0,
                                                const std::vector<std::string>& solved) {
  if (solved.size() != 2) throw DomainError("branch solving needs exactly two unknowns");
  std::vector<MultiPoly> conds;
  for (const auto& c : conds0)
    if (!c.is_zero()) conds.push_back(c.trimmed());
  if (conds.size() < 2) throw DegenerateEliminationError("positive-dimensional: fewer than two nonzero conditions");
  const std::string &s1 = solved[0], &s2 = solved[1];
  auto lin = std::find_if(conds.begin(), conds.end(), [&](const MultiPoly& p) { return p.degree(s1) == 1; });
  if (lin == conds.end()) throw DegenerateEliminationError("no condition is linear in " + s1);
  MultiPoly P = *lin;
  MultiPoly Q = (lin == conds.begin()) ? conds[1] : conds[0];

  std::set<std::string> free_names;
  for (const auto& c : conds)
    for (const auto& v : c.used_vars())
      if (v != s1 && v != s2) free_names.insert(v);

  auto solve_linear = [](const MultiPoly& p, const std::string& v) {
    auto cs = p.coeffs_in(v);
    return RatFun(-cs[0], cs[1]);
  };
  auto check = [&](const SolutionFamily& fam) {
    for (const auto& c : conds)
      if (!substitute(c, fam.assignments).is_zero())
        throw InternalConsistencyError("branch family does not satisfy " + c.str());
  };

  std::vector<SolutionFamily> out;
  MultiPoly R = Q.degree(s1) > 0 ? poly_resultant(P, Q, s1) : Q;
  if (R.is_zero()) throw DegenerateEliminationError("positive-dimensional: resultant vanishes identically");
  MultiPoly cont = content_in(R, s2);
  MultiPoly prim = primitive_part_in(R, s2);
  if (prim.degree(s2) != 1)
    throw DegenerateEliminationError("no rational branch: eliminant has degree " + std::to_string(prim.degree(s2)) +
                                     " in " + s2);
  SolutionFamily gen;
  gen.label = "generic branch";
  RatFun v2 = solve_linear(prim, s2);
  RatFun v1 = solve_linear(P, s1).substitute({{s2, v2}});
  gen.assignments = {{s1, v1}, {s2, v2}};
  gen.nonvanishing.push_back(poly_normalize(prim.coeffs_in(s2)[1]));
  if (!cont.is_constant()) gen.nonvanishing.push_back(poly_normalize(cont));
  check(gen);
  out.push_back(gen);

  std::map<std::string, Rational> zero;
  for (const auto& n : free_names) zero[n] = 0;
  MultiPoly P0 = P.eval(zero, false), Q0 = Q.eval(zero, false);
  if (P0.degree(s1) == 1) {
    RatFun w1 = solve_linear(P0, s1);
    if (substitute(Q0, {{s1, w1}}).is_zero()) {
      SolutionFamily deg;
      deg.label = "vanishing free parameters";
      for (const auto& n : free_names) deg.assignments[n] = RatFun(0);
      deg.assignments[s1] = w1;
      check(deg);
      out.push_back(deg);
    }
  }
  return out;
}

}  // namespace isochron
