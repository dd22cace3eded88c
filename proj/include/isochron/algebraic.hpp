#pragma once

#include <utility>

#include "isochron/roots.hpp"
#include "isochron/upoly.hpp"

namespace isochron {

// A fixed real root alpha of a squarefree polynomial q over Q. Elements of
// Q[alpha] are polynomials in alpha reduced mod q. Zero tests are exact: when an
// element shares a factor with q, q is replaced by the factor that vanishes at
// alpha (dynamic evaluation), so earlier elements stay valid.
class RealAlgebraic {
 public:
  RealAlgebraic(const UPoly& q, const IsolatingInterval& iv);
  static RealAlgebraic rational(const Rational& r);

  const UPoly& modulus() const { return q_; }
  const IsolatingInterval& interval() const { return iv_; }
  int degree() const { return q_.degree(); }
  bool is_rational() const { return q_.degree() == 1; }
  Rational rational_value() const;  // requires is_rational()

  UPoly reduce(const UPoly& e) const { return e % q_; }
  UPoly mul(const UPoly& a, const UPoly& b) const { return (a * b) % q_; }
  bool is_zero(const UPoly& e);
  // Sign of e(alpha).
  int sign(const UPoly& e);
  // Requires e(alpha) != 0.
  UPoly inverse(const UPoly& e);
  // Interval [lo, hi] containing e(alpha) with hi - lo <= width.
  std::pair<Rational, Rational> enclose(const UPoly& e, const Rational& width);
  double approx(const UPoly& e);

 private:
  std::pair<Rational, Rational> horner_interval(const UPoly& e) const;
  void refine_to(const Rational& width);
  UPoly q_;
  IsolatingInterval iv_;
};

}  // namespace isochron
