#include "isochron/algebraic.hpp"

#include <algorithm>

#include "isochron/errors.hpp"

namespace isochron {

RealAlgebraic::RealAlgebraic(const UPoly& q, const IsolatingInterval& iv) : q_(q.monic()), iv_(iv) {
  if (q_.degree() < 1) throw DomainError("algebraic number needs a nonconstant polynomial");
  if (q_.degree() == 1) {
    Rational r = -q_.coeff(0);
    iv_ = {r, r, r, 1};
  } else if (iv_.exact) {
    q_ = UPoly({-*iv_.exact, Rational(1)});
  }
}

RealAlgebraic RealAlgebraic::rational(const Rational& r) {
  return RealAlgebraic(UPoly({-r, Rational(1)}), IsolatingInterval{r, r, r, 1});
}

Rational RealAlgebraic::rational_value() const {
  if (!is_rational()) throw DomainError("not a rational number");
  return -q_.coeff(0);
}

bool RealAlgebraic::is_zero(const UPoly& e) {
  UPoly r = e % q_;
  if (r.is_zero()) return true;
  UPoly g = gcd(r, q_);
  if (g.degree() <= 0) return false;
  UPoly other = divmod(q_, g).first;
  bool in_g;
  if (iv_.exact)
    in_g = g.eval(*iv_.exact).is_zero();
  else
    in_g = SturmSequence(g.primitive()).count(iv_.lo, iv_.hi) > 0;
  q_ = (in_g ? g : other).monic();
  if (q_.degree() == 1) {
    Rational v = -q_.coeff(0);
    iv_ = {v, v, v, 1};
  }
  return in_g;
}

UPoly RealAlgebraic::inverse(const UPoly& e) {
  if (is_zero(e)) throw DomainError("division by an algebraic zero");
  XGcd x = xgcd(e % q_, q_);
  if (x.g.degree() != 0) throw InternalConsistencyError("element not invertible after splitting");
  return x.s.scaled(x.g.coeff(0).inv()) % q_;
}

std::pair<Rational, Rational> RealAlgebraic::horner_interval(const UPoly& e) const {
  Rational lo = 0, hi = 0;
  for (int k = e.degree(); k >= 0; --k) {
    Rational p[4] = {lo * iv_.lo, lo * iv_.hi, hi * iv_.lo, hi * iv_.hi};
    lo = *std::min_element(p, p + 4) + e.coeff(k);
    hi = *std::max_element(p, p + 4) + e.coeff(k);
  }
  return {lo, hi};
}

void RealAlgebraic::refine_to(const Rational& width) {
  if (iv_.exact) return;
  isochron::refine(iv_, q_, width);
  if (iv_.exact) q_ = UPoly({-*iv_.exact, Rational(1)});
}

std::pair<Rational, Rational> RealAlgebraic::enclose(const UPoly& e0, const Rational& width) {
  UPoly e = e0 % q_;
  if (e.degree() <= 0) return {e.coeff(0), e.coeff(0)};
  if (iv_.exact) {
    Rational v = e.eval(*iv_.exact);
    return {v, v};
  }
  while (true) {
    auto [lo, hi] = horner_interval(e);
    if (hi - lo <= width || iv_.exact) {
      if (iv_.exact) {
        Rational v = e.eval(*iv_.exact);
        return {v, v};
      }
      return {lo, hi};
    }
    refine_to((iv_.hi - iv_.lo) / Rational(1024));
  }
}

int RealAlgebraic::sign(const UPoly& e) {
  if (is_zero(e)) return 0;
  Rational w = Rational(1);
  while (true) {
    auto [lo, hi] = enclose(e, w);
    if (lo.sign() > 0) return 1;
    if (hi.sign() < 0) return -1;
    w = (hi - lo) / Rational(1024);
  }
}

double RealAlgebraic::approx(const UPoly& e) {
  auto [lo, hi] = enclose(e, Rational(mpz_class(1), mpz_class(1) << 80));
  return ((lo + hi) / Rational(2)).to_double();
}

}  // namespace isochron
