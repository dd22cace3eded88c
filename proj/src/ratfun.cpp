#include "isochron/ratfun.hpp"

#include "isochron/errors.hpp"
#include "isochron/polyalg.hpp"

namespace isochron {

RatFun::RatFun(const MultiPoly& n, const MultiPoly& d) : num_(n), den_(d) {
  if (den_.is_zero()) throw DomainError("division by zero RatFun");
  normalize();
}

void RatFun::normalize() {
  if (num_.is_zero()) {
    num_ = MultiPoly();
    den_ = MultiPoly(1);
    return;
  }
  if (!den_.is_constant()) {
    MultiPoly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
  }
  // fix the scale so that den is primitive with positive leading coefficient
  Rational c = den_.content();
  if (den_.lc().sign() < 0) c = -c;
  if (den_.is_constant()) c = den_.constant_term();
  Rational ci = c.inv();
  num_ = num_.scaled(ci).trimmed();
  den_ = den_.scaled(ci).trimmed();
}

Rational RatFun::constant_value() const {
  if (!is_constant()) throw DomainError("RatFun is not constant: " + str());
  return num_.constant_term();
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  RatFun r;
  if (a.den_.is_constant() && b.den_.is_constant()) {
    r.num_ = (a.num_ + b.num_).trimmed();
    return r;
  }
  if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
  MultiPoly g = poly_gcd(a.den_, b.den_);
  MultiPoly da = exact_div(a.den_, g), db = exact_div(b.den_, g);
  return RatFun(a.num_ * db + b.num_ * da, da * b.den_);
}

RatFun operator*(const RatFun& a, const RatFun& b) {
  RatFun r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.den_.is_constant() && b.den_.is_constant()) {
    r.num_ = (a.num_ * b.num_).trimmed();
    return r;
  }
  MultiPoly g1 = b.den_.is_constant() ? MultiPoly(1) : poly_gcd(a.num_, b.den_);
  MultiPoly g2 = a.den_.is_constant() ? MultiPoly(1) : poly_gcd(b.num_, a.den_);
  r.num_ = exact_div(a.num_, g1) * exact_div(b.num_, g2);
  r.den_ = exact_div(a.den_, g2) * exact_div(b.den_, g1);
  Rational c = r.den_.content();
  if (r.den_.lc().sign() < 0) c = -c;
  if (r.den_.is_constant()) c = r.den_.constant_term();
  r.num_ = r.num_.scaled(c.inv()).trimmed();
  r.den_ = r.den_.scaled(c.inv()).trimmed();
  return r;
}

RatFun RatFun::inv() const {
  if (is_zero()) throw DomainError("division by zero RatFun");
  return RatFun(den_, num_);
}

RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inv(); }

bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

RatFun RatFun::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  RatFun r(1), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

RatFun RatFun::derivative(const std::string& v) const {
  if (den_.is_constant()) return RatFun(num_.derivative(v));
  return RatFun(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

RatFun RatFun::eval(const std::map<std::string, Rational>& point, bool strict) const {
  MultiPoly d = den_.eval(point, strict);
  if (d.is_zero()) throw DomainError("denominator vanishes at evaluation point");
  return RatFun(num_.eval(point, strict), d);
}

Rational RatFun::eval_full(const std::map<std::string, Rational>& point) const {
  RatFun r = eval(point);
  return r.constant_value();
}

RatFun substitute(const MultiPoly& p, const std::map<std::string, RatFun>& sub) {
  // recursive Horner over the substituted variables
  for (const auto& [name, val] : sub) {
    if (!p.has_var(name) || p.degree(name) <= 0) continue;
    auto cs = p.coeffs_in(name);
    RatFun acc;
    for (std::size_t k = cs.size(); k-- > 0;) acc = acc * val + substitute(cs[k], sub);
    return acc;
  }
  return RatFun(p);
}

RatFun RatFun::substitute(const std::map<std::string, RatFun>& sub) const {
  RatFun d = isochron::substitute(den_, sub);
  if (d.is_zero()) throw DomainError("denominator vanishes identically under substitution");
  return isochron::substitute(num_, sub) / d;
}

double RatFun::eval_double(const std::map<std::string, double>& point) const {
  return num_.eval_double(point) / den_.eval_double(point);
}

std::string RatFun::str() const {
  if (den_.is_constant()) return num_.str();
  auto wrap = [](const MultiPoly& p) {
    std::string s = p.str();
    return p.size() > 1 ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

}  // namespace isochron
