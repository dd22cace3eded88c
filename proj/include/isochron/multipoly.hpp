#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isochron/rational.hpp"

namespace isochron {

inline constexpr std::size_t kMaxVars = 8;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};
  std::uint32_t deg = 0;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;  // requires divides
};

// Graded lexicographic comparison; variables are kept in alphabetical order,
// so slot 0 is the most significant. Returns <0, 0, >0.
int grlex_cmp(const Monomial& a, const Monomial& b);

// Sparse polynomial over Q in named variables. Terms are stored in strictly
// decreasing grlex order with nonzero coefficients. Variable names are sorted.
class MultiPoly {
 public:
  struct Term {
    Monomial m;
    Rational c;
  };

  MultiPoly() = default;
  MultiPoly(const Rational& c);  // NOLINT(implicit)
  template <std::integral I>
  MultiPoly(I c) : MultiPoly(Rational(c)) {}  // NOLINT(implicit)

  static MultiPoly var(const std::string& name);
  static MultiPoly from_terms(std::vector<std::string> vars,
                              const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.deg == 0); }
  // Coefficient of the monomial 1.
  Rational constant_term() const;
  const Term& lead() const { return terms_.front(); }
  const Rational& lc() const { return terms_.front().c; }

  int var_index(const std::string& v) const;
  bool has_var(const std::string& v) const { return var_index(v) >= 0; }
  int degree(const std::string& v) const;
  int total_degree() const { return is_zero() ? -1 : static_cast<int>(terms_.front().m.deg); }
  // Variables that actually occur.
  std::vector<std::string> used_vars() const;

  MultiPoly with_vars(const std::vector<std::string>& superset) const;
  MultiPoly trimmed() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const Rational& c) const;
  MultiPoly pow(unsigned e) const;

  // Equality ignores unused variables.
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly derivative(const std::string& v) const;
  // Coefficients with respect to v, index = power of v; v is dropped from the result vars.
  std::vector<MultiPoly> coeffs_in(const std::string& v) const;
  static MultiPoly from_coeffs_in(const std::string& v, const std::vector<MultiPoly>& cs);

  // Partial or total evaluation. With strict, names absent from vars() are an error.
  MultiPoly eval(const std::map<std::string, Rational>& point, bool strict = true) const;
  Rational eval_full(const std::map<std::string, Rational>& point) const;
  MultiPoly substitute(const std::string& v, const MultiPoly& p) const;
  double eval_double(const std::map<std::string, double>& point) const;

  // Positive rational c such that p/c has coprime integer coefficients.
  Rational content() const;

  std::string str() const;

 private:
  friend class PolyBuilder;
  std::vector<std::string> vars_;
  std::vector<Term> terms_;
};

// Accumulates terms in any order and produces a canonical MultiPoly.
class PolyBuilder {
 public:
  explicit PolyBuilder(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  void add(const Monomial& m, const Rational& c) { raw_.push_back({m, c}); }
  MultiPoly build();

 private:
  std::vector<std::string> vars_;
  std::vector<MultiPoly::Term> raw_;
};

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Divide by content and fix the sign so the leading coefficient is positive.
MultiPoly poly_normalize(const MultiPoly& p);

// Multivariate division in grlex order: p = sum q_i d_i + r, no term of r divisible
// by any lead(d_i).
MultiPoly reduce(const MultiPoly& p, const std::vector<MultiPoly>& divisors);
// Exact quotient a/b; throws DomainError when b does not divide a.
MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b);
// Quotient and remainder of division by a single polynomial.
std::pair<MultiPoly, MultiPoly> divide(const MultiPoly& a, const MultiPoly& b);

}  // namespace isochron
