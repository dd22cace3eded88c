#include "isochron/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "isochron/errors.hpp"
#include "isochron/parse.hpp"
#include "isochron/roots.hpp"

namespace isochron {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Expr X() { return Expr::sym("x"); }
Expr P(const std::string& n) { return Expr::sym(n); }

bool is_symbolic_token(const std::string& v) { return v.empty() || v == "?" || v == "symbolic"; }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::optional<Rational> rational_value(const FamilySpec& spec, const std::string& name) {
  auto it = spec.parameters.find(name);
  if (it == spec.parameters.end() || !it->second || !it->second->is_constant()) return std::nullopt;
  return it->second->constant_value();
}

// Nearest real roots of the x-denominators on each side of 0.
std::pair<double, double> interval_from_denominators(const std::vector<Expr>& es) {
  double lo = -kInf, hi = kInf;
  for (const auto& e : es) {
    if (!e.is_rational_function()) continue;
    RatFun r = e.to_ratfun();
    const MultiPoly& d = r.den();
    auto used = d.used_vars();
    if (used.empty() || used.size() > 1 || used[0] != "x") continue;
    for (const auto& iv : isolate_real_roots(UPoly::from_multi(d))) {
      double a = iv.approx();
      if (a > 0) hi = std::min(hi, iv.lo.to_double());
      if (a < 0) lo = std::max(lo, iv.hi.to_double());
    }
  }
  return {lo, hi};
}

void set_validity(LienardSystem& s, double lo, double hi, std::optional<double> radius = std::nullopt) {
  s.validity_interval = std::make_pair(lo, hi);
  s.validity_radius = radius ? *radius : std::min(-lo, hi);
}

// Rescales time when g'(0) is a positive rational other than 1.
LienardSystem normalized_or_throw(const LienardSystem& s) {
  if (s.g.order() < 1 || !s.g[0].is_zero()) throw DomainError("g(0) must vanish");
  if (s.g[1] == RatFun(1)) return s;
  if (s.g[1].is_constant() && s.g[1].constant_value().sign() > 0) return normalize_frequency(s);
  throw DomainError("parameters violate the normalization g'(0) = 1 (g'(0) = " + s.g[1].str() + ")");
}

const std::map<std::string, std::vector<std::string>>& required_parameters() {
  static const std::map<std::string, std::vector<std::string>> req = {
      {"loud", {"D", "F"}},
      {"kukles_k0", {"a1", "a3", "a4", "a6"}},
      {"cubic_c", {"a1", "a3", "a4", "a6", "b"}},
      {"eq_general", {}},
      {"oscillator", {"alpha", "lambda"}},
      {"custom", {}},
      {"potential_isochrone", {}},
      {"reflection", {}},
      {"schaaf_isochrone", {}},
  };
  return req;
}

const std::map<std::string, std::vector<std::string>>& required_functions() {
  static const std::map<std::string, std::vector<std::string>> req = {
      {"eq_general", {"alpha", "beta", "xi"}},
      {"custom", {"f", "g"}},
      {"potential_isochrone", {"F"}},
  };
  return req;
}

// Printed cubic solutions; each fills every parameter except the free one.
std::map<std::string, std::string> cubic_variant(const std::string& v) {
  if (v == "I") return {{"a1", "0"}, {"a3", "0"}, {"a4", "-2*b/3"}, {"a6", "3*b"}};
  if (v == "II") return {{"a1", "0"}, {"a3", "0"}, {"a4", "0"}, {"a6", "b"}};
  if (v == "III") return {{"b", "a3^2/7"}, {"a6", "3*a3^2/7"}, {"a1", "-a3/2"}, {"a4", "a3^2/14"}};
  if (v == "IV") return {{"a1", "-a3/2"}, {"a6", "a3^2"}, {"b", "a3^2/2"}, {"a4", "0"}};
  throw DomainError("unknown cubic variant '" + v + "' (expected I, II, III or IV)");
}

}  // namespace

void FamilySpec::set_parameter(const std::string& assignment) {
  auto eq = assignment.find('=');
  std::string name = trim(assignment.substr(0, eq));
  if (name.empty()) throw DomainError("empty parameter name in '" + assignment + "'");
  std::string value = eq == std::string::npos ? std::string() : trim(assignment.substr(eq + 1));
  if (is_symbolic_token(value))
    parameters[name] = std::nullopt;
  else
    parameters[name] = parse_ratfun(value);
}

std::string FamilySpec::label() const {
  std::string s = name;
  if (!variant.empty()) s += "[" + variant + "]";
  std::string args;
  for (const auto& [k, v] : parameters) args += (args.empty() ? "" : ", ") + k + "=" + (v ? v->str() : "?");
  for (const auto& [k, v] : functions) args += (args.empty() ? "" : ", ") + k + "=" + v;
  return args.empty() ? s : s + "(" + args + ")";
}

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> cat = {
      {"loud", {"D", "F"}, {"psi"}, "quadratic Loud system x' = -y + xy, y' = x + Dx^2 + Fy^2"},
      {"kukles_k0", {"a1", "a3", "a4", "a6"}, {}, "reversible Kukles system x' = -y, y' = x + a1x^2 + a3y^2 + a4x^3 + a6xy^2"},
      {"cubic_c", {"a1", "a3", "a4", "a6", "b"}, {}, "cubic family f = (a3 + a6x + 2bx)/(1 - bx^2), g = (x + a1x^2 + a4x^3)(1 - bx^2); variants I..IV"},
      {"eq_general", {}, {"alpha", "beta", "xi"}, "x' = -alpha(x) y, y' = beta(x) + xi(x) y^2"},
      {"oscillator", {"alpha", "lambda"}, {}, "f = -lambda x/(1 + lambda x^2), g = alpha^2 x/(1 + lambda x^2)"},
      {"custom", {}, {"f", "g"}, "x'' + f(x) x'^2 + g(x) = 0"},
      {"potential_isochrone", {}, {"F"}, "f = F', g = e^{-F} int_0^x e^F (isochronous for any F)"},
      {"reflection", {}, {}, "f = 1/(1+x), g = x/(1+x)^2 (e^F has trivial even part)"},
      {"schaaf_isochrone", {}, {}, "f = 0, g = 1 - (1+2x)^{-1/2} (conservative, h(X) = X)"},
  };
  return cat;
}

const std::vector<CatalogExample>& catalog_examples() {
  static const std::vector<CatalogExample> ex = [] {
    std::vector<CatalogExample> out;
    auto add = [&](std::string id, std::string desc, std::string name, std::vector<std::string> params,
                   std::map<std::string, std::string> fns = {}, std::string variant = {}) {
      FamilySpec s;
      s.name = std::move(name);
      for (const auto& p : params) s.set_parameter(p);
      s.functions = std::move(fns);
      s.variant = std::move(variant);
      out.push_back({std::move(id), std::move(desc), std::move(s)});
    };
    add("loud", "Loud system, symbolic D and F", "loud", {"D", "F"});
    add("loud-0-1", "Loud isochrone (0, 1), h = 0", "loud", {"D=0", "F=1"});
    add("loud-m1/2-2", "Loud isochrone (-1/2, 2), h = 0", "loud", {"D=-1/2", "F=2"});
    add("loud-0-1/4", "Loud isochrone (0, 1/4), h = X/sqrt(X^2+16)", "loud", {"D=0", "F=1/4"});
    add("loud-m1/2-1/2", "Loud isochrone (-1/2, 1/2), h = X/sqrt(X^2+4)", "loud", {"D=-1/2", "F=1/2"});
    add("kukles", "reversible Kukles system, symbolic", "kukles_k0", {"a1", "a3", "a4", "a6"});
    add("kukles-branch-i", "Kukles, index and next condition solved for a4, a6 (printed generic branch)",
        "kukles_k0",
        {"a1", "a3", "a4=(2/9)*(20*a1^3+75*a1^2*a3+60*a1*a3^2+16*a3^3)/(-4*a1+3*a3)",
         "a6=-(2/3)*(53*a1*a3^2+40*a1^3+10*a3^3+80*a1^2*a3)/(-4*a1+3*a3)"});
    add("kukles-branch-ii", "Kukles, a1 = a3 = 0, a4 = -a6/3", "kukles_k0", {"a1=0", "a3=0", "a4=-a6/3", "a6"});
    add("cubic", "cubic family, symbolic", "cubic_c", {"a1", "a3", "a4", "a6", "b"});
    add("cubic-I", "cubic solution I (b free)", "cubic_c", {"b"}, {}, "I");
    add("cubic-II", "cubic solution II (b free)", "cubic_c", {"b"}, {}, "II");
    add("cubic-III", "cubic solution III (a3 free)", "cubic_c", {"a3"}, {}, "III");
    add("cubic-IV", "cubic solution IV (a3 free)", "cubic_c", {"a3"}, {}, "IV");
    add("cubic-I-b1", "cubic solution I at b = 1", "cubic_c", {"b=1"}, {}, "I");
    add("cubic-II-b1", "cubic solution II at b = 1", "cubic_c", {"b=1"}, {}, "II");
    add("cubic-III-a1", "cubic solution III at a3 = 1", "cubic_c", {"a3=1"}, {}, "III");
    add("cubic-IV-a1", "cubic solution IV at a3 = 1", "cubic_c", {"a3=1"}, {}, "IV");
    add("oscillator", "oscillator lambda = alpha = 1, T = 2 pi sqrt(1 + A^2)", "oscillator", {"lambda=1", "alpha=1"});
    add("schaaf-isochrone", "f = 0, g = 1 - (1+2x)^(-1/2), h = X", "schaaf_isochrone", {});
    add("reflection", "f = 1/(1+x), g = x/(1+x)^2, h = X", "reflection", {});
    add("potential-x", "F = x: f = 1, g = 1 - e^{-x}", "potential_isochrone", {}, {{"F", "x"}});
    add("potential-log", "F = log(1+x)", "potential_isochrone", {}, {{"F", "log(1+x)"}});
    add("potential-x2", "F = x^2 (series only)", "potential_isochrone", {}, {{"F", "x^2"}});
    add("eq-loud", "Loud system through the general reduction", "eq_general", {"D", "F"},
        {{"alpha", "1-x"}, {"beta", "x+D*x^2"}, {"xi", "F"}});
    add("eq-oscillator", "oscillator through the general reduction", "eq_general", {},
        {{"alpha", "1"}, {"beta", "x/(1+x^2)"}, {"xi", "-x/(1+x^2)"}});
    return out;
  }();
  return ex;
}

const CatalogExample& catalog_example(const std::string& id) {
  for (const auto& e : catalog_examples())
    if (e.id == id) return e;
  throw DomainError("unknown catalog example '" + id + "'");
}

LienardSystem reduce_Eq(const Expr& alpha, const Expr& beta, const Expr& xi, int order) {
  RSeries a = alpha.series(order);
  if (!a[0].is_constant() || a[0].constant_value().sign() <= 0)
    throw DomainError("alpha(0) must be a positive constant (got " + a[0].str() + ")");
  RSeries b = beta.series(order);
  if (!b[0].is_zero()) throw DomainError("beta(0) must vanish");
  Expr f = (xi - alpha.diff("x")) / alpha;
  Expr g = alpha * beta;
  LienardSystem s = LienardSystem::from_exprs(f, g, order, "reduce_Eq(" + alpha.str() + ", " + beta.str() + ", " + xi.str() + ")");
  return normalized_or_throw(s);
}

LienardSystem instantiate_family(const FamilySpec& spec0) {
  const auto& req = required_parameters();
  auto rit = req.find(spec0.name);
  if (rit == req.end()) throw DomainError("unknown family '" + spec0.name + "'");
  if (spec0.order < 8) throw DomainError("truncation order must be at least 8");

  FamilySpec spec = spec0;
  if (!spec.variant.empty()) {
    if (spec.name != "cubic_c") throw DomainError("variants exist only for cubic_c");
    for (const auto& [k, v] : cubic_variant(spec.variant)) {
      if (spec.parameters.count(k)) throw DomainError("parameter " + k + " is fixed by variant " + spec.variant);
      spec.parameters[k] = parse_ratfun(v);
    }
  }
  for (const auto& p : rit->second)
    if (!spec.parameters.count(p)) throw DomainError("family " + spec.name + " needs parameter " + p);
  if (auto fit = required_functions().find(spec.name); fit != required_functions().end())
    for (const auto& fn : fit->second)
      if (!spec.functions.count(fn)) throw DomainError("family " + spec.name + " needs function " + fn);
  std::set<std::string> allowed_fns;
  for (const auto& info : family_catalog())
    if (info.name == spec.name) allowed_fns.insert(info.functions.begin(), info.functions.end());
  for (const auto& [k, v] : spec.functions)
    if (!allowed_fns.count(k)) throw DomainError("family " + spec.name + " does not take function " + k);
  if (!rit->second.empty() || spec.name == "loud")
    for (const auto& [k, v] : spec.parameters)
      if (std::find(rit->second.begin(), rit->second.end(), k) == rit->second.end())
        throw DomainError("family " + spec.name + " has no parameter " + k);
  for (const auto& [k, v] : spec.parameters)
    if (v)
      for (const MultiPoly* p : {&v->num(), &v->den()})
        for (const auto& u : p->used_vars())
          if (u == "x") throw DomainError("parameter " + k + " may not depend on x");

  // Values may refer to other assigned parameters; resolve to symbolic ones.
  std::map<std::string, RatFun> assigned;
  for (const auto& [k, v] : spec.parameters)
    if (v) assigned.emplace(k, *v);
  for (std::size_t round = 0;; ++round) {
    bool changed = false;
    for (auto& [k, v] : assigned) {
      std::map<std::string, RatFun> others;
      for (const MultiPoly* p : {&v.num(), &v.den()})
        for (const auto& u : p->used_vars()) {
          if (u == k) throw DomainError("parameter " + k + " is defined in terms of itself");
          if (assigned.count(u)) others.emplace(u, assigned.at(u));
        }
      if (others.empty()) continue;
      v = v.substitute(others);
      changed = true;
    }
    if (!changed) break;
    if (round > assigned.size()) throw DomainError("cyclic parameter definitions");
  }
  for (auto& [k, v] : spec.parameters)
    if (v) v = assigned.at(k);
  std::map<std::string, Expr> sub;
  for (const auto& [k, v] : assigned) sub.emplace(k, Expr::from_ratfun(v));
  auto fn = [&](const std::string& name) { return parse_expr(spec.functions.at(name)).substitute(sub); };
  const int N = spec.order;
  const std::string prov = spec.label();

  LienardSystem s;
  if (spec.name == "loud") {
    Expr f = (P("F") + Expr(1)) / (Expr(1) - X());
    Expr g = X() * (Expr(1) - X()) * (Expr(1) + P("D") * X());
    if (spec.functions.count("psi")) {
      Expr psi = fn("psi");
      RSeries ps = psi.series(N);
      if (!(ps[0] == RatFun(1))) throw DomainError("psi(0) must be 1");
      f = f - psi.diff("x") / psi;
      g = g * psi * psi;
    }
    s = LienardSystem::from_exprs(f.substitute(sub), g.substitute(sub), N, prov);
    set_validity(s, -kInf, 1.0, 1.0);
  } else if (spec.name == "kukles_k0") {
    Expr f = P("a3") + P("a6") * X();
    Expr g = X() + P("a1") * X() * X() + P("a4") * Expr::pow(X(), Expr(3));
    s = LienardSystem::from_exprs(f.substitute(sub), g.substitute(sub), N, prov);
    set_validity(s, -kInf, kInf);
  } else if (spec.name == "cubic_c") {
    Expr den = Expr(1) - P("b") * X() * X();
    Expr f = (P("a3") + P("a6") * X() + Expr(2) * P("b") * X()) / den;
    Expr g = (X() + P("a1") * X() * X() + P("a4") * Expr::pow(X(), Expr(3))) * den;
    s = LienardSystem::from_exprs(f.substitute(sub), g.substitute(sub), N, prov);
    if (auto b = rational_value(spec, "b")) {
      double r = b->is_zero() ? kInf : 1.0 / std::sqrt(std::abs(b->to_double()));
      if (b->sign() > 0)
        set_validity(s, -r, r);
      else
        set_validity(s, -kInf, kInf, r);
    }
  } else if (spec.name == "oscillator") {
    auto alpha = rational_value(spec, "alpha");
    if (!alpha || alpha->is_zero()) throw DomainError("oscillator needs a nonzero rational alpha");
    Expr den = Expr(1) + P("lambda") * X() * X();
    Expr f = -(P("lambda") * X()) / den;
    Expr g = P("alpha") * P("alpha") * X() / den;
    s = LienardSystem::from_exprs(f.substitute(sub), g.substitute(sub), N, prov);
    s = normalize_frequency(s);
    if (auto l = rational_value(spec, "lambda")) {
      double r = l->is_zero() ? kInf : 1.0 / std::sqrt(std::abs(l->to_double()));
      if (l->sign() < 0)
        set_validity(s, -r, r);
      else
        set_validity(s, -kInf, kInf, r);
    }
  } else if (spec.name == "eq_general") {
    s = reduce_Eq(fn("alpha"), fn("beta"), fn("xi"), N);
    s.provenance = prov;
    auto [lo, hi] = interval_from_denominators({*s.f_expr, *s.g_expr});
    set_validity(s, lo, hi);
  } else if (spec.name == "custom") {
    s = LienardSystem::from_exprs(fn("f"), fn("g"), N, prov);
    s = normalized_or_throw(s);
    auto [lo, hi] = interval_from_denominators({*s.f_expr, *s.g_expr});
    set_validity(s, lo, hi);
  } else if (spec.name == "potential_isochrone") {
    Expr F = fn("F");
    if (!F.symbols().empty() && F.symbols() != std::set<std::string>{"x"})
      throw DomainError("potential_isochrone needs F in x only");
    std::string t = spec.functions.at("F");
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    if (t == "x") {
      s = LienardSystem::from_exprs(Expr(1), Expr(1) - Expr::exp(-X()), N, prov);
      set_validity(s, -kInf, kInf);
    } else if (t == "log(1+x)") {
      s = LienardSystem::from_exprs(Expr(1) / (Expr(1) + X()),
                                    (X() + X() * X() / Expr(2)) / (Expr(1) + X()), N, prov);
      set_validity(s, -1.0, kInf, 1.0);
    } else {
      // No closed form for int e^F in general: series only.
      RSeries Fs = F.series(N + 2);
      if (!Fs[0].is_zero()) throw DomainError("F(0) must vanish");
      s = trivial_isochrone_g(Fs, N);
      s.provenance = prov;
    }
  } else if (spec.name == "reflection") {
    Expr one_x = Expr(1) + X();
    s = LienardSystem::from_exprs(Expr(1) / one_x, X() / (one_x * one_x), N, prov);
    set_validity(s, -1.0, kInf, 1.0);
  } else if (spec.name == "schaaf_isochrone") {
    Expr g = Expr(1) - Expr::pow(Expr(1) + Expr(2) * X(), Expr(Rational(-1, 2)));
    s = LienardSystem::from_exprs(Expr(0), g, N, prov);
    set_validity(s, -0.5, kInf, 0.5);
  }
  s.check_normalized();
  return s;
}

std::optional<ClosedFormUrabe> closed_form_urabe(const FamilySpec& spec, int order) {
  auto make = [&](const std::string& text) {
    ClosedFormUrabe c;
    c.text = text;
    Expr e = parse_expr(text);
    c.series = e.series(order, "X").retagged(Var::X);
    c.eval = [e](double v) { return e.eval(v, {}, "X"); };
    return c;
  };
  auto is = [&](const char* name, const char* value) {
    auto v = rational_value(spec, name);
    return v && *v == Rational::parse(value);
  };
  if (spec.name == "loud" && !spec.functions.count("psi")) {
    if ((is("D", "0") && is("F", "1")) || (is("D", "-1/2") && is("F", "2"))) return make("0");
    if (is("D", "0") && is("F", "1/4")) return make("X/sqrt(X^2+16)");
    if (is("D", "-1/2") && is("F", "1/2")) return make("X/sqrt(X^2+4)");
  }
  if (spec.name == "cubic_c" && (spec.variant == "I" || spec.variant == "II")) return make("0");
  if (spec.name == "potential_isochrone") return make("0");
  if (spec.name == "schaaf_isochrone" || spec.name == "reflection") return make("X");
  return std::nullopt;
}

}  // namespace isochron
