#pragma once

#include <concepts>
#include <map>
#include <string>

#include "isochron/multipoly.hpp"

namespace isochron {

// num/den with gcd(num, den) = 1 and den primitive (integer coprime
// coefficients, positive leading coefficient). Constant denominators are 1.
class RatFun {
 public:
  RatFun() : den_(1) {}
  RatFun(const MultiPoly& n) : num_(n), den_(1) {}  // NOLINT(implicit)
  RatFun(const Rational& c) : num_(c), den_(1) {}   // NOLINT(implicit)
  template <std::integral I>
  RatFun(I c) : RatFun(Rational(c)) {}  // NOLINT(implicit)
  RatFun(const MultiPoly& n, const MultiPoly& d);

  static RatFun var(const std::string& name) { return RatFun(MultiPoly::var(name)); }
  static RatFun from(const Rational& c) { return RatFun(c); }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return den_.is_constant() && num_.is_constant(); }
  Rational constant_value() const;  // requires is_constant()

  RatFun operator-() const;
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  RatFun& operator/=(const RatFun& o) { return *this = *this / o; }
  friend bool operator==(const RatFun& a, const RatFun& b);

  RatFun inv() const;
  RatFun pow(int e) const;
  RatFun derivative(const std::string& v) const;

  // Partial evaluation; throws DomainError if the denominator vanishes.
  RatFun eval(const std::map<std::string, Rational>& point, bool strict = false) const;
  Rational eval_full(const std::map<std::string, Rational>& point) const;
  RatFun substitute(const std::map<std::string, RatFun>& sub) const;
  double eval_double(const std::map<std::string, double>& point) const;

  std::string str() const;

 private:
  void normalize();
  MultiPoly num_, den_;
};

// Evaluates a polynomial at RatFun values (Horner in each variable).
RatFun substitute(const MultiPoly& p, const std::map<std::string, RatFun>& sub);

}  // namespace isochron
