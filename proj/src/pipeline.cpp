#include "isochron/pipeline.hpp"

#include <functional>
#include <set>

#include "isochron/errors.hpp"

namespace isochron {

namespace {

std::vector<std::string> series_parameters(const RSeries& a, const RSeries& b) {
  std::set<std::string> names;
  for (const RSeries* s : {&a, &b})
    for (const auto& c : s->coeffs()) {
      for (const auto& v : c.num().used_vars()) names.insert(v);
      for (const auto& v : c.den().used_vars()) names.insert(v);
    }
  return {names.begin(), names.end()};
}

RSeries map_coeffs(const RSeries& s, const std::function<RatFun(const RatFun&)>& fn) {
  RSeries r(s.var(), s.order());
  for (int k = 0; k <= s.order(); ++k) r[k] = fn(s[k]);
  return r;
}

Rational factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= Rational(i);
  return r;
}

MultiPoly numerator_of(const RatFun& r) { return r.num(); }

}  // namespace

LienardSystem LienardSystem::from_exprs(const Expr& f, const Expr& g, int order, std::string provenance,
                                        std::optional<double> radius) {
  LienardSystem s;
  s.f_expr = f;
  s.g_expr = g;
  s.f = f.series(order);
  s.g = g.series(order);
  std::set<std::string> names = f.symbols();
  for (const auto& n : g.symbols()) names.insert(n);
  names.erase("x");
  s.parameters.assign(names.begin(), names.end());
  s.validity_radius = radius;
  s.provenance = std::move(provenance);
  return s;
}

LienardSystem LienardSystem::from_series(const RSeries& f, const RSeries& g, std::string provenance,
                                         std::optional<double> radius) {
  if (f.var() != Var::x || g.var() != Var::x) throw DomainError("system series must be in x");
  LienardSystem s;
  s.f = f;
  s.g = g;
  s.parameters = series_parameters(f, g);
  s.validity_radius = radius;
  s.provenance = std::move(provenance);
  return s;
}

void LienardSystem::check_normalized() const {
  if (g.order() < 1) throw DomainError("g needs at least a linear term");
  if (!g[0].is_zero()) throw DomainError("normalization violated: g(0) must be 0");
  if (!(g[1] == RatFun(1)))
    throw DomainError("normalization violated: g'(0) must be 1 (got " + g[1].str() + "); use normalize_frequency");
}

LienardSystem LienardSystem::at_order(int order) const {
  LienardSystem s = *this;
  if (f_expr && g_expr) {
    if (order == this->order()) return s;
    s.f = f_expr->series(order);
    s.g = g_expr->series(order);
    return s;
  }
  if (order > this->order())
    throw DomainError("system known only to order " + std::to_string(this->order()) + ", need " +
                      std::to_string(order));
  s.f = f.truncated(order);
  s.g = g.truncated(order);
  return s;
}

LienardSystem LienardSystem::specialized(const std::map<std::string, Rational>& values) const {
  LienardSystem s = *this;
  auto fn = [&](const RatFun& c) { return c.eval(values); };
  s.f = map_coeffs(f, fn);
  s.g = map_coeffs(g, fn);
  if (f_expr) s.f_expr = f_expr->substitute(values);
  if (g_expr) s.g_expr = g_expr->substitute(values);
  std::vector<std::string> rest;
  for (const auto& p : parameters)
    if (!values.count(p)) rest.push_back(p);
  s.parameters = rest;
  return s;
}

LienardSystem LienardSystem::substituted(const std::map<std::string, RatFun>& values) const {
  LienardSystem s = *this;
  auto fn = [&](const RatFun& c) { return c.substitute(values); };
  s.f = map_coeffs(f, fn);
  s.g = map_coeffs(g, fn);
  std::map<std::string, Expr> sub;
  for (const auto& [k, v] : values) sub.emplace(k, Expr::from_ratfun(v));
  if (f_expr) s.f_expr = f_expr->substitute(sub);
  if (g_expr) s.g_expr = g_expr->substitute(sub);
  s.parameters = series_parameters(s.f, s.g);
  if (s.f_expr) {
    std::set<std::string> names = s.f_expr->symbols();
    for (const auto& n : s.g_expr->symbols()) names.insert(n);
    names.erase("x");
    s.parameters.assign(names.begin(), names.end());
  }
  return s;
}

PipelineResult reduce_to_conservative(const LienardSystem& sys0, int N) {
  if (N < 2) throw DomainError("pipeline order must be at least 2");
  int M = working_order(N);
  LienardSystem sys = sys0.at_order(M);
  sys.check_normalized();
  PipelineResult r;
  r.order = N;
  r.F = integrate(sys.f).truncated(M);
  r.expF = exp(r.F);
  r.phi = integrate(r.expF);
  RSeries x_of_u = reverse(r.phi.truncated(M), Var::u);
  r.gtilde = compose(sys.g * r.expF, x_of_u);
  if (!r.gtilde[0].is_zero() || !(r.gtilde[1] == RatFun(1)))
    throw InternalConsistencyError("conservative form lost its normalization");
  return r;
}

RSeries action_variable(const LienardSystem& sys0, int N) {
  int M = working_order(N);
  LienardSystem sys = sys0.at_order(M);
  sys.check_normalized();
  RSeries expF = exp(integrate(sys.f).truncated(M));
  RSeries G = integrate(sys.g * expF * expF);
  RSeries X = sqrt_positive(scale(G, RatFun(2)), std::optional<RatFun>(RatFun(1)));
  if (!(X[1] == RatFun(1))) throw InternalConsistencyError("action variable has X'(0) != 1");
  return X;
}

PipelineResult urabe_function(const LienardSystem& sys0, int N) {
  PipelineResult r = reduce_to_conservative(sys0, N);
  int M = working_order(N);
  LienardSystem sys = sys0.at_order(M);
  RSeries e2F = r.expF * r.expF;
  r.Gtilde_x = integrate(sys.g * e2F);
  r.X_of_x = sqrt_positive(scale(r.Gtilde_x, RatFun(2)), std::optional<RatFun>(RatFun(1)));
  r.x_of_X = reverse(r.X_of_x, Var::X);
  r.u_of_X = compose(r.phi.truncated(M), r.x_of_X);
  r.H = r.u_of_X - RSeries::identity(Var::X, M);
  r.h = differentiate(r.H);

  // gtilde(u(X)) = X / (1 + h(X))
  RSeries lhs = compose(r.gtilde, r.u_of_X).truncated(N);
  RSeries one_h = r.h + RSeries::constant(Var::X, N, 1);
  RSeries rhs = RSeries::identity(Var::X, N) * inverse(one_h);
  if (!(lhs == rhs)) {
    for (int k = 0; k <= N; ++k)
      if (!(lhs[k] == rhs[k]))
        throw InternalConsistencyError("defining identity fails at X^" + std::to_string(k) + ": " +
                                       (lhs[k] - rhs[k]).str());
  }
  r.identity_checked = true;
  return r;
}

bool ConditionSet::all_zero() const {
  for (const auto& c : conditions)
    if (!c.raw.is_zero()) return false;
  return true;
}

std::vector<MultiPoly> ConditionSet::polynomials() const {
  std::vector<MultiPoly> out;
  for (const auto& c : conditions)
    if (!c.normalized.is_zero()) out.push_back(c.normalized);
  return out;
}

namespace {

// Reduces by the nonconstant polynomials collected so far, then normalizes.
MultiPoly reduce_and_normalize(const RatFun& raw, const std::vector<MultiPoly>& basis) {
  MultiPoly p = numerator_of(raw);
  std::vector<MultiPoly> divisors;
  for (const auto& b : basis)
    if (!b.is_constant()) divisors.push_back(b);
  if (!divisors.empty()) p = reduce(p, divisors);
  return poly_normalize(p).trimmed();
}

}  // namespace

ConditionSet isochronicity_conditions(const PipelineResult& r) {
  ConditionSet cs;
  cs.order = r.order;
  std::vector<MultiPoly> basis;
  for (int k = 2; k <= r.order; k += 2) {
    Condition c;
    c.k = k;
    c.raw = r.h[k];
    c.normalized = reduce_and_normalize(c.raw, basis);
    if (!c.normalized.is_zero()) basis.push_back(c.normalized);
    cs.conditions.push_back(std::move(c));
  }
  return cs;
}

ConditionSet isochronicity_conditions(const LienardSystem& sys, int N) {
  return isochronicity_conditions(urabe_function(sys, N));
}

ConditionSet closed_form_relations(const PipelineResult& r) {
  ConditionSet evens = isochronicity_conditions(r);
  std::vector<MultiPoly> basis = evens.polynomials();
  ConditionSet cs;
  cs.order = r.order;
  RatFun a = r.h[1];
  Rational binom = 1;
  for (int k = 3; k <= r.order; k += 2) {
    int j = (k - 1) / 2;
    binom = binom * (Rational(mpz_class(-1), mpz_class(2)) - Rational(j - 1)) / Rational(j);
    Condition c;
    c.k = k;
    c.raw = r.h[k] - RatFun(binom) * a.pow(k);
    c.normalized = reduce_and_normalize(c.raw, basis);
    cs.conditions.push_back(std::move(c));
  }
  return cs;
}

const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing:
      return "increasing";
    case Monotonicity::decreasing:
      return "decreasing";
    default:
      return "inconclusive";
  }
}

SchaafIndex schaaf_index(const LienardSystem& sys0) {
  LienardSystem sys = sys0.order() >= 3 ? sys0 : sys0.at_order(3);
  if (sys.g.order() < 3 || sys.f.order() < 1) throw DomainError("Schaaf index needs g to order 3 and f to order 1");
  RatFun g2 = sys.g[2] * RatFun(2), g3 = sys.g[3] * RatFun(6), f0 = sys.f[0], f1 = sys.f[1];
  SchaafIndex s;
  s.value = RatFun(5) * g2 * g2 + RatFun(10) * g2 * f0 + RatFun(8) * f0 * f0 - RatFun(3) * g3 - RatFun(6) * f1;
  if (s.value.is_constant()) {
    int sg = s.value.constant_value().sign();
    s.verdict = sg > 0 ? Monotonicity::increasing : (sg < 0 ? Monotonicity::decreasing : Monotonicity::inconclusive);
  }
  return s;
}

IdentityReport isochrone_identity_check(const LienardSystem& sys0, const RSeries& h, int N) {
  if (h.var() != Var::X) throw DomainError("h must be a series in X");
  int n = std::min(N, h.order());
  if (n < 1) throw DomainError("identity check needs h to order 1");
  RSeries hn = h.truncated(n);
  RSeries X = action_variable(sys0, n);
  LienardSystem sys = sys0.at_order(working_order(n));
  RSeries lhs = differentiate(sys.g) + sys.f * sys.g;
  RSeries one_h = hn + RSeries::constant(Var::X, n, 1);
  RSeries dh = differentiate(hn);
  RSeries Xid = RSeries::identity(Var::X, n - 1);
  RSeries num = one_h.truncated(n - 1) - Xid * dh;
  RSeries den = one_h.truncated(n - 1);
  RSeries rhs = num * inverse(den * den * den);
  RSeries rhs_x = compose(rhs, X.truncated(n - 1).retagged(Var::x));
  IdentityReport rep;
  rep.order = n - 1;
  rep.holds = true;
  for (int k = 0; k < n; ++k) {
    RatFun d = lhs[k] - rhs_x[k];
    if (!d.is_zero()) rep.holds = false;
    rep.residuals.push_back(d);
  }
  return rep;
}

std::vector<PeriodTerm> period_series(const PipelineResult& r) {
  std::vector<PeriodTerm> out{{0, RatFun(2)}};
  Rational wallis = 1;  // (2m-1)!!/(2m)!!
  for (int m = 1; 2 * m <= r.order; ++m) {
    wallis = wallis * Rational(2 * m - 1) / Rational(2 * m);
    Rational c = Rational(2) * wallis * Rational(2).pow(m);
    out.push_back({m, RatFun(c) * r.h[2 * m]});
  }
  return out;
}

std::vector<PeriodTerm> period_series(const LienardSystem& sys, int N) { return period_series(urabe_function(sys, N)); }

RatFun gtilde_derivative(const PipelineResult& r, int k) {
  if (k > r.gtilde.order()) throw DomainError("gtilde known only to order " + std::to_string(r.gtilde.order()));
  return r.gtilde[k] * RatFun(factorial(k));
}

LienardSystem trivial_isochrone_g(const RSeries& F, int N) {
  if (!F[0].is_zero()) throw DomainError("F(0) must be 0");
  if (F.order() < N + 2) throw DomainError("F must be known to order N + 2");
  RSeries Fx = F.retagged(Var::x).truncated(N + 2);
  RSeries f = differentiate(Fx);
  RSeries g = (exp(-Fx) * integrate(exp(Fx))).truncated(N + 2);
  return LienardSystem::from_series(f.truncated(N + 1), g.truncated(N + 1), "trivial isochrone");
}

bool is_reflection_isochrone(const RSeries& F, int N) {
  if (!F[0].is_zero()) throw DomainError("F(0) must be 0");
  RSeries e = exp(F.truncated(std::min(N, F.order())));
  auto [even, odd] = parity_split(e);
  even[0] -= RatFun(1);
  return even.is_zero();
}

LienardSystem normalize_frequency(const LienardSystem& sys) {
  if (sys.g.order() < 1 || !sys.g[0].is_zero()) throw DomainError("g(0) must be 0");
  const RatFun& K = sys.g[1];
  if (!K.is_constant() || K.constant_value().sign() <= 0)
    throw DomainError("g'(0) must be a positive rational to rescale time");
  Rational k = K.constant_value();
  LienardSystem s = sys;
  s.g = scale(sys.g, RatFun(k.inv()));
  if (s.g_expr) s.g_expr = *sys.g_expr / Expr(k);
  s.frequency_scale = sys.frequency_scale * k;
  s.check_normalized();
  return s;
}

}  // namespace isochron
