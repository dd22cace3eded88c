#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "isochron/ratfun.hpp"
#include "isochron/series.hpp"

namespace isochron {

// Closed-form expression in one real variable plus named parameters. Expands
// exactly into a power series and evaluates in floating point.
class Expr {
 public:
  enum class Kind { Num, Sym, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt };

  Expr() : Expr(Rational(0)) {}
  Expr(const Rational& c);  // NOLINT(implicit)
  template <std::integral I>
  Expr(I c) : Expr(Rational(c)) {}  // NOLINT(implicit)
  static Expr sym(const std::string& name);
  static Expr from_ratfun(const RatFun& r);
  static Expr exp(const Expr& a) { return make(Kind::Exp, {a}); }
  static Expr log(const Expr& a) { return make(Kind::Log, {a}); }
  static Expr sqrt(const Expr& a) { return make(Kind::Sqrt, {a}); }
  static Expr pow(const Expr& b, const Expr& e) { return make(Kind::Pow, {b, e}); }

  friend Expr operator+(const Expr& a, const Expr& b) { return make(Kind::Add, {a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return make(Kind::Sub, {a, b}); }
  friend Expr operator*(const Expr& a, const Expr& b) { return make(Kind::Mul, {a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return make(Kind::Div, {a, b}); }
  Expr operator-() const { return make(Kind::Neg, {*this}); }

  Kind kind() const { return n_->kind; }
  std::set<std::string> symbols() const;
  bool is_rational_function() const;
  // Throws DomainError when the expression uses exp/log/sqrt or a non-integer power.
  RatFun to_ratfun() const;

  Expr substitute(const std::map<std::string, Expr>& sub) const;
  // Derivative with respect to x (no simplification beyond dropping zeros).
  Expr diff(const std::string& x = "x") const;
  Expr substitute(const std::map<std::string, Rational>& values) const;

  // Series about x = 0 of the given order; other symbols become RatFun parameters.
  RSeries series(int order, const std::string& x = "x") const;
  // Floating-point value; every symbol other than x must be in params.
  double eval(double x, const std::map<std::string, double>& params = {}, const std::string& xname = "x") const;

  std::string str() const;

 private:
  struct Node {
    Kind kind;
    Rational value;
    double dvalue = 0;
    std::string name;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Expr make(Kind k, std::vector<Expr> args);
  static Expr folded(Kind k, std::vector<Expr> args);
  std::optional<Rational> constant_value() const;
  int precedence() const;
  std::shared_ptr<const Node> n_;
};

// Infix grammar: + - * / ^, parentheses, exp(), log(), sqrt(), identifiers,
// integer or decimal literals. Exponents may be any expression.
Expr parse_expr(std::string_view text);

}  // namespace isochron
