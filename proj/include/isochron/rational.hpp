#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>

namespace isochron {

// Exact rational number. mpq_class keeps it canonical (reduced, den > 0).
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I v) : v_(static_cast<long>(v)) {}  // NOLINT(implicit)
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p", "p/q", "-p/q" and finite decimals like "0.25" or "-1.5e-3".
  static Rational parse(std::string_view s);
  static Rational from_double(double d);  // exact binary value of d

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Rational inv() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational pow(long e) const;
  // Exact square root when this is the square of a rational.
  std::optional<Rational> sqrt_exact() const;
  Rational floor() const;

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  static Rational one() { return Rational(1); }
  static Rational zero() { return Rational(0); }
  static Rational from(const Rational& r) { return r; }

 private:
  mpq_class v_;
};

}  // namespace isochron
