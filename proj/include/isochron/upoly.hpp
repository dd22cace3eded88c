#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isochron/multipoly.hpp"
#include "isochron/rational.hpp"

namespace isochron {

// Dense univariate polynomial over Q; c[i] is the coefficient of t^i.
// No trailing zeros are stored, so the zero polynomial is the empty vector.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  UPoly(const Rational& c) { if (!c.is_zero()) c_.push_back(c); }  // NOLINT(implicit)
  static UPoly monomial(const Rational& c, int k);
  static UPoly t() { return UPoly({Rational(0), Rational(1)}); }

  // From a MultiPoly with at most one used variable.
  static UPoly from_multi(const MultiPoly& p);
  MultiPoly to_multi(const std::string& var) const;

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  Rational coeff(int i) const { return i < 0 || i > degree() ? Rational(0) : c_[i]; }
  const Rational& lc() const { return c_.back(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  UPoly operator-() const;
  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  UPoly scaled(const Rational& s) const;

  UPoly derivative() const;
  UPoly monic() const;
  // Primitive integer version with positive leading coefficient.
  UPoly primitive() const;
  Rational eval(const Rational& x) const;
  double eval_double(double x) const;

  std::string str(const std::string& var = "t") const;

 private:
  void trim() { while (!c_.empty() && c_.back().is_zero()) c_.pop_back(); }
  std::vector<Rational> c_;
};

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly operator%(const UPoly& a, const UPoly& b);
UPoly gcd(const UPoly& a, const UPoly& b);  // monic, gcd(0,0) = 0
// Extended Euclid: returns (g, s, t) with s a + t b = g monic.
struct XGcd {
  UPoly g, s, t;
};
XGcd xgcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);
// Yun's algorithm: p = lc * prod_i f_i^i; entry i-1 holds f_i (monic, possibly 1).
std::vector<UPoly> squarefree_decomposition(const UPoly& p);
Rational resultant(const UPoly& a, const UPoly& b);

}  // namespace isochron
