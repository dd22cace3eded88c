#pragma once

#include <optional>
#include <vector>

#include "isochron/multipoly.hpp"
#include "isochron/upoly.hpp"

namespace isochron {

// Exactly one real root of the target polynomial lies in [lo, hi]; when the
// root is rational, exact is set and lo == hi == *exact.
struct IsolatingInterval {
  Rational lo, hi;
  std::optional<Rational> exact;
  int multiplicity = 1;
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  double approx() const { return exact ? exact->to_double() : ((lo + hi) / Rational(2)).to_double(); }
};

class SturmSequence {
 public:
  explicit SturmSequence(const UPoly& squarefree);
  // Number of sign variations at x (zeros skipped).
  int variations(const Rational& x) const;
  int variations_at_infinity(int sign) const;
  // Distinct roots in the half-open interval (a, b].
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

 private:
  std::vector<std::vector<mpz_class>> seq_;  // primitive integer polynomials
};

int sign_at(const std::vector<mpz_class>& p, const Rational& x);
Rational cauchy_bound(const UPoly& p);

// Distinct real roots in increasing order, with multiplicities in p.
std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p);
std::vector<IsolatingInterval> isolate_real_roots(const MultiPoly& p);

// Shrinks a non-exact interval of the squarefree polynomial sqf around its root
// until hi - lo <= width.
void refine(IsolatingInterval& iv, const UPoly& sqf, const Rational& width);

// Rational with the smallest denominator in the open interval (lo, hi).
Rational simplest_between(const Rational& lo, const Rational& hi);

// Number of non-real roots counted with multiplicity (always even).
int complex_root_count(const UPoly& p);

}  // namespace isochron
