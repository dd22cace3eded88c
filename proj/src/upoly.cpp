#include "isochron/upoly.hpp"

#include <sstream>

#include "isochron/errors.hpp"
#include "isochron/polyalg.hpp"

namespace isochron {

UPoly UPoly::monomial(const Rational& c, int k) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return UPoly(std::move(v));
}

UPoly UPoly::from_multi(const MultiPoly& p) {
  auto used = p.used_vars();
  if (used.size() > 1) throw DomainError("polynomial is not univariate: " + p.str());
  if (used.empty()) return UPoly(p.constant_term());
  auto cs = p.coeffs_in(used[0]);
  std::vector<Rational> c;
  c.reserve(cs.size());
  for (const auto& q : cs) c.push_back(q.constant_term());
  return UPoly(std::move(c));
}

MultiPoly UPoly::to_multi(const std::string& var) const {
  std::vector<MultiPoly> cs(c_.begin(), c_.end());
  return MultiPoly::from_coeffs_in(var, cs);
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(c));
}

UPoly UPoly::scaled(const Rational& s) const {
  if (s.is_zero()) return {};
  UPoly r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const { return is_zero() ? *this : scaled(lc().inv()); }

UPoly UPoly::primitive() const {
  if (is_zero()) return *this;
  mpz_class g = 0, l = 1;
  for (const auto& x : c_) {
    g = gcd(g, x.num());
    l = lcm(l, x.den());
  }
  Rational s(l, g);
  if (lc().sign() < 0) s = -s;
  return scaled(s);
}

Rational UPoly::eval(const Rational& x) const {
  Rational r;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

double UPoly::eval_double(double x) const {
  double r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i].to_double();
  return r;
}

std::string UPoly::str(const std::string& var) const { return to_multi(var).str(); }

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rational> r = a.coeffs(), q(a.degree() - b.degree() + 1);
  Rational inv = b.lc().inv();
  int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (r[k].is_zero()) continue;
    Rational c = r[k] * inv;
    q[k - db] = c;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= c * b[j];
  }
  r.resize(db);
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a.primitive(), y = b.primitive();
  while (!y.is_zero()) {
    UPoly r = (x % y).primitive();
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

XGcd xgcd(const UPoly& a, const UPoly& b) {
  UPoly r0 = a, r1 = b, s0(Rational(1)), s1, t0, t1(Rational(1));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    UPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Rational k = r0.lc().inv();
  return {r0.scaled(k), s0.scaled(k), t0.scaled(k)};
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  return divmod(p, gcd(p, p.derivative())).first.monic();
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  std::vector<UPoly> out;
  if (p.degree() <= 0) return out;
  UPoly f = p.monic();
  UPoly d = f.derivative();
  UPoly a = gcd(f, d);
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(d, a).first;
  UPoly e = c - b.derivative();
  while (b.degree() > 0) {
    UPoly g = gcd(b, e);
    out.push_back(g);
    b = divmod(b, g).first;
    c = divmod(e, g).first;
    e = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

Rational resultant(const UPoly& a, const UPoly& b) {
  MultiPoly r = poly_resultant(a.to_multi("t"), b.to_multi("t"), "t");
  return r.constant_term();
}

}  // namespace isochron
