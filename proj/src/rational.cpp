#include "isochron/rational.hpp"

#include <cctype>
#include <cmath>

#include "isochron/errors.hpp"

namespace isochron {

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::inv() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return Rational(mpq_class(1 / v_));
}

Rational Rational::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

std::optional<Rational> Rational::sqrt_exact() const {
  if (sign() < 0) return std::nullopt;
  if (!mpz_perfect_square_p(v_.get_num_mpz_t()) || !mpz_perfect_square_p(v_.get_den_mpz_t()))
    return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), v_.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), v_.get_den_mpz_t());
  return Rational(n, d);
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(q, 1);
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d)) throw DomainError("non-finite double");
  return Rational(mpq_class(d));
}

namespace {

mpz_class parse_int(std::string_view s) {
  if (s.empty()) throw DomainError("empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw DomainError("bad integer: " + std::string(s));
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw DomainError("bad integer: " + std::string(s));
  std::string t(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(t, 10);
}

}  // namespace

Rational Rational::parse(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (auto slash = s.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));

  // decimal with optional exponent
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exp10 = parse_int(s.substr(e + 1)).get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    exp10 -= static_cast<long>(s.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+") throw DomainError("bad number");
  } else {
    digits = std::string(s);
  }
  mpz_class n = parse_int(digits);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  return exp10 < 0 ? Rational(n, p) : Rational(n * p, 1);
}

}  // namespace isochron
