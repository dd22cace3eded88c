#include "isochron/expr.hpp"

#include <cctype>
#include <cmath>

#include "isochron/errors.hpp"
#include "isochron/parse.hpp"

namespace isochron {

Expr::Expr(const Rational& c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->value = c;
  n->dvalue = c.to_double();
  n_ = std::move(n);
}

Expr Expr::sym(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sym;
  n->name = name;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(Kind k, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::from_ratfun(const RatFun& r) {
  auto poly = [](const MultiPoly& p) {
    if (p.is_zero()) return Expr(0);
    std::optional<Expr> sum;
    for (const auto& [m, c] : p.terms()) {
      Expr t(c);
      for (std::size_t i = 0; i < p.vars().size(); ++i)
        if (m.e[i] > 0) t = t * (m.e[i] == 1 ? sym(p.vars()[i]) : pow(sym(p.vars()[i]), Expr(m.e[i])));
      sum = sum ? *sum + t : t;
    }
    return *sum;
  };
  if (r.den().is_constant()) return poly(r.num().scaled(r.den().constant_term().inv()));
  return poly(r.num()) / poly(r.den());
}

std::set<std::string> Expr::symbols() const {
  if (kind() == Kind::Sym) return {n_->name};
  std::set<std::string> out;
  for (const auto& a : n_->args) {
    auto s = a.symbols();
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::optional<Rational> Expr::constant_value() const {
  if (!symbols().empty()) return std::nullopt;
  if (!is_rational_function()) return std::nullopt;
  RatFun r = to_ratfun();
  return r.constant_value();
}

bool Expr::is_rational_function() const {
  switch (kind()) {
    case Kind::Num:
    case Kind::Sym:
      return true;
    case Kind::Exp:
    case Kind::Log:
    case Kind::Sqrt:
      return false;
    case Kind::Pow: {
      if (!n_->args[0].is_rational_function()) return false;
      auto e = n_->args[1].constant_value();
      return e && e->is_integer();
    }
    default:
      for (const auto& a : n_->args)
        if (!a.is_rational_function()) return false;
      return true;
  }
}

RatFun Expr::to_ratfun() const {
  const auto& a = n_->args;
  switch (kind()) {
    case Kind::Num:
      return RatFun(n_->value);
    case Kind::Sym:
      return RatFun::var(n_->name);
    case Kind::Add:
      return a[0].to_ratfun() + a[1].to_ratfun();
    case Kind::Sub:
      return a[0].to_ratfun() - a[1].to_ratfun();
    case Kind::Mul:
      return a[0].to_ratfun() * a[1].to_ratfun();
    case Kind::Div:
      return a[0].to_ratfun() / a[1].to_ratfun();
    case Kind::Neg:
      return -a[0].to_ratfun();
    case Kind::Pow: {
      auto e = a[1].constant_value();
      if (!e || !e->is_integer()) throw DomainError("non-integer power in a rational expression: " + str());
      return a[0].to_ratfun().pow(static_cast<int>(e->num().get_si()));
    }
    default:
      throw DomainError("not a rational function: " + str());
  }
}

Expr Expr::substitute(const std::map<std::string, Expr>& sub) const {
  if (kind() == Kind::Num) return *this;
  if (kind() == Kind::Sym) {
    auto it = sub.find(n_->name);
    return it == sub.end() ? *this : it->second;
  }
  std::vector<Expr> args;
  for (const auto& a : n_->args) args.push_back(a.substitute(sub));
  return folded(kind(), std::move(args));
}

// Folds rational constants and drops neutral elements.
Expr Expr::folded(Kind k, std::vector<Expr> args) {
  auto num = [](const Expr& e) -> std::optional<Rational> {
    if (e.kind() == Kind::Num) return e.n_->value;
    return std::nullopt;
  };
  std::optional<Rational> a = num(args[0]), b = args.size() > 1 ? num(args[1]) : std::nullopt;
  switch (k) {
    case Kind::Add:
      if (a && b) return Expr(*a + *b);
      if (a && a->is_zero()) return args[1];
      if (b && b->is_zero()) return args[0];
      break;
    case Kind::Sub:
      if (a && b) return Expr(*a - *b);
      if (b && b->is_zero()) return args[0];
      if (a && a->is_zero()) return -args[1];
      break;
    case Kind::Mul:
      if (a && b) return Expr(*a * *b);
      if ((a && a->is_zero()) || (b && b->is_zero())) return Expr(0);
      if (a && *a == Rational(1)) return args[1];
      if (b && *b == Rational(1)) return args[0];
      break;
    case Kind::Div:
      if (a && b && !b->is_zero()) return Expr(*a / *b);
      if (a && a->is_zero()) return Expr(0);
      if (b && *b == Rational(1)) return args[0];
      break;
    case Kind::Neg:
      if (a) return Expr(-*a);
      break;
    case Kind::Pow:
      if (b && b->is_zero()) return Expr(1);
      if (b && *b == Rational(1)) return args[0];
      if (a && b && b->is_integer() && !(a->is_zero() && b->sign() < 0)) {
        long e = b->num().get_si();
        Rational base = e < 0 ? a->inv() : *a, r = 1;
        for (long i = 0; i < std::labs(e); ++i) r *= base;
        return Expr(r);
      }
      break;
    default:
      break;
  }
  return make(k, std::move(args));
}

Expr Expr::substitute(const std::map<std::string, Rational>& values) const {
  std::map<std::string, Expr> sub;
  for (const auto& [k, v] : values) sub.emplace(k, Expr(v));
  return substitute(sub);
}

Expr Expr::diff(const std::string& x) const {
  if (!symbols().count(x)) return Expr(0);
  const auto& a = n_->args;
  auto is0 = [](const Expr& e) { return e.kind() == Kind::Num && e.n_->value.is_zero(); };
  auto add = [&](const Expr& p, const Expr& q) { return is0(p) ? q : is0(q) ? p : p + q; };
  auto mul = [&](const Expr& p, const Expr& q) { return is0(p) || is0(q) ? Expr(0) : p * q; };
  switch (kind()) {
    case Kind::Sym:
      return Expr(1);
    case Kind::Add:
      return add(a[0].diff(x), a[1].diff(x));
    case Kind::Sub:
      return add(a[0].diff(x), -a[1].diff(x));
    case Kind::Neg:
      return -a[0].diff(x);
    case Kind::Mul:
      return add(mul(a[0].diff(x), a[1]), mul(a[0], a[1].diff(x)));
    case Kind::Div:
      return (add(mul(a[0].diff(x), a[1]), -mul(a[0], a[1].diff(x)))) / pow(a[1], Expr(2));
    case Kind::Exp:
      return mul(*this, a[0].diff(x));
    case Kind::Log:
      return a[0].diff(x) / a[0];
    case Kind::Sqrt:
      return a[0].diff(x) / (Expr(2) * *this);
    case Kind::Pow:
      if (!a[1].symbols().count(x))
        return mul(a[1] * pow(a[0], a[1] - Expr(1)), a[0].diff(x));
      return *this * add(mul(a[1].diff(x), log(a[0])), mul(a[1], a[0].diff(x) / a[0]));
    default:
      return Expr(0);
  }
}

namespace {

RSeries shift_down(const RSeries& s, int v) {
  RSeries r(s.var(), s.order() - v);
  for (int k = 0; k <= r.order(); ++k) r[k] = s[k + v];
  return r;
}

RSeries series_pow_int(const RSeries& b, long e) {
  if (e < 0) {
    if (b[0].is_zero()) throw DomainError("negative power of a series vanishing at 0");
    return inverse(series_pow_int(b, -e));
  }
  RSeries r = RSeries::constant(b.var(), b.order(), 1), base = b;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

}  // namespace

RSeries Expr::series(int order, const std::string& x) const {
  const auto& a = n_->args;
  switch (kind()) {
    case Kind::Num:
      return RSeries::constant(Var::x, order, RatFun(n_->value));
    case Kind::Sym:
      if (n_->name == x) return RSeries::identity(Var::x, order);
      return RSeries::constant(Var::x, order, RatFun::var(n_->name));
    case Kind::Add:
      return a[0].series(order, x) + a[1].series(order, x);
    case Kind::Sub:
      return a[0].series(order, x) - a[1].series(order, x);
    case Kind::Mul:
      return a[0].series(order, x) * a[1].series(order, x);
    case Kind::Neg:
      return -a[0].series(order, x);
    case Kind::Div: {
      RSeries d = a[1].series(order, x);
      int v = d.valuation();
      if (v < 0) throw DomainError("division by zero in " + str());
      if (v == 0) return a[0].series(order, x) / d;
      RSeries nn = a[0].series(order + v, x), dd = a[1].series(order + v, x);
      int vn = nn.valuation();
      if (vn >= 0 && vn < v) throw DomainError("pole at x = 0 in " + str());
      return shift_down(nn, v) / shift_down(dd, v);
    }
    case Kind::Exp: {
      RSeries s = a[0].series(order, x);
      if (!s[0].is_zero()) throw DomainError("exp argument must vanish at x = 0 for an exact expansion: " + str());
      return isochron::exp(s);
    }
    case Kind::Log: {
      RSeries s = a[0].series(order, x);
      if (!(s[0] == RatFun(1))) throw DomainError("log argument must equal 1 at x = 0 for an exact expansion: " + str());
      return isochron::log(s);
    }
    case Kind::Sqrt:
      return pow(a[0], Expr(Rational(mpz_class(1), mpz_class(2)))).series(order, x);
    case Kind::Pow: {
      if (a[1].symbols().count(x)) throw DomainError("exponent depends on " + x + ": " + str());
      RSeries b = a[0].series(order, x);
      RatFun e = a[1].to_ratfun();
      if (e.is_constant() && e.constant_value().is_integer())
        return series_pow_int(b, e.constant_value().num().get_si());
      if (b[0].is_zero()) throw DomainError("non-integer power of a series vanishing at 0: " + str());
      RatFun c0 = b[0];
      RatFun scale_c = 1;
      if (!(c0 == RatFun(1))) {
        std::optional<Rational> root;
        if (c0.is_constant() && e.is_constant() && c0.constant_value().sign() > 0) {
          Rational ev = e.constant_value();
          auto s = c0.constant_value().sqrt_exact();
          if (ev.den() == 2 && s) root = s->pow(ev.num().get_si());
        }
        if (!root) throw DomainError("power base must equal 1 at x = 0 for an exact expansion: " + str());
        scale_c = RatFun(*root);
        b = scale(b, RatFun(1) / c0);
      }
      return scale(isochron::exp(scale(isochron::log(b), e)), scale_c);
    }
  }
  throw InternalConsistencyError("unhandled expression kind");
}

double Expr::eval(double xv, const std::map<std::string, double>& params, const std::string& xname) const {
  const auto& a = n_->args;
  switch (kind()) {
    case Kind::Num:
      return n_->dvalue;
    case Kind::Sym: {
      if (n_->name == xname) return xv;
      auto it = params.find(n_->name);
      if (it == params.end()) throw DomainError("no value for parameter " + n_->name);
      return it->second;
    }
    case Kind::Add:
      return a[0].eval(xv, params, xname) + a[1].eval(xv, params, xname);
    case Kind::Sub:
      return a[0].eval(xv, params, xname) - a[1].eval(xv, params, xname);
    case Kind::Mul:
      return a[0].eval(xv, params, xname) * a[1].eval(xv, params, xname);
    case Kind::Div:
      return a[0].eval(xv, params, xname) / a[1].eval(xv, params, xname);
    case Kind::Neg:
      return -a[0].eval(xv, params, xname);
    case Kind::Pow:
      return std::pow(a[0].eval(xv, params, xname), a[1].eval(xv, params, xname));
    case Kind::Exp:
      return std::exp(a[0].eval(xv, params, xname));
    case Kind::Log:
      return std::log(a[0].eval(xv, params, xname));
    case Kind::Sqrt:
      return std::sqrt(a[0].eval(xv, params, xname));
  }
  return 0;
}

int Expr::precedence() const {
  switch (kind()) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    case Kind::Num:
      return n_->value.sign() < 0 ? 3 : (n_->value.is_integer() ? 5 : 2);
    default:
      return 5;
  }
}

std::string Expr::str() const {
  const auto& a = n_->args;
  auto wrap = [](const Expr& e, int min_prec) {
    return e.precedence() < min_prec ? "(" + e.str() + ")" : e.str();
  };
  switch (kind()) {
    case Kind::Num:
      return n_->value.str();
    case Kind::Sym:
      return n_->name;
    case Kind::Add:
      return wrap(a[0], 1) + " + " + wrap(a[1], 1);
    case Kind::Sub:
      return wrap(a[0], 1) + " - " + wrap(a[1], 2);
    case Kind::Mul:
      return wrap(a[0], 2) + "*" + wrap(a[1], 3);
    case Kind::Div:
      return wrap(a[0], 2) + "/" + wrap(a[1], 3);
    case Kind::Neg:
      return "-" + wrap(a[0], 4);
    case Kind::Pow:
      return wrap(a[0], 5) + "^" + wrap(a[1], 5);
    case Kind::Exp:
      return "exp(" + a[0].str() + ")";
    case Kind::Log:
      return "log(" + a[0].str() + ")";
    case Kind::Sqrt:
      return "sqrt(" + a[0].str() + ")";
  }
  return "?";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr r = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("parse error at " + std::to_string(i_) + " in \"" + std::string(s_) + "\": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr r = term();
    while (true) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  Expr term() {
    Expr r = unary();
    while (true) {
      if (eat('*'))
        r = r * unary();
      else if (eat('/'))
        r = r / unary();
      else
        return r;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = atom();
    if (eat('^')) return Expr::pow(b, unary());
    return b;
  }

  Expr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr r = expr();
      if (!eat(')')) fail("')' expected");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t st = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      return Expr(Rational::parse(s_.substr(st, i_ - st)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t st = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string name(s_.substr(st, i_ - st));
      if (eat('(')) {
        Expr arg = expr();
        if (!eat(')')) fail("')' expected");
        if (name == "exp") return Expr::exp(arg);
        if (name == "log") return Expr::log(arg);
        if (name == "sqrt") return Expr::sqrt(arg);
        fail("unknown function " + name);
      }
      return Expr::sym(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

RatFun parse_ratfun(std::string_view text) { return parse_expr(text).to_ratfun(); }

MultiPoly parse_poly(std::string_view text) {
  RatFun r = parse_ratfun(text);
  if (!r.is_polynomial()) throw DomainError("not a polynomial: " + std::string(text));
  return r.num().scaled(r.den().constant_term().inv());
}

}  // namespace isochron
