#pragma once

#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isochron/errors.hpp"
#include "isochron/ratfun.hpp"
#include "isochron/rational.hpp"

namespace isochron {

enum class Var { x, u, X };
inline const char* var_name(Var v) { return v == Var::x ? "x" : (v == Var::u ? "u" : "X"); }

// Scalar helpers shared by Rational and RatFun coefficients.
inline std::optional<Rational> exact_sqrt(const Rational& c) { return c.sqrt_exact(); }
inline std::optional<RatFun> exact_sqrt(const RatFun& c) {
  if (!c.is_constant()) return std::nullopt;
  auto r = c.constant_value().sqrt_exact();
  if (!r) return std::nullopt;
  return RatFun(*r);
}
inline bool positive_constant(const Rational& c) { return c.sign() > 0; }
inline bool positive_constant(const RatFun& c) { return c.is_constant() && c.constant_value().sign() > 0; }
inline std::string scalar_str(const Rational& c) { return c.str(); }
inline std::string scalar_str(const RatFun& c) { return c.str(); }

// Power series in one formal variable, known for degrees 0..order.
template <class T>
class TruncatedSeries {
 public:
  TruncatedSeries() : var_(Var::x), c_(1) {}
  TruncatedSeries(Var v, int order) : var_(v), c_(check(order) + 1) {}
  TruncatedSeries(Var v, std::vector<T> c) : var_(v), c_(std::move(c)) {
    if (c_.empty()) throw DomainError("series needs at least one coefficient");
  }
  static TruncatedSeries constant(Var v, int order, const T& c) {
    TruncatedSeries s(v, order);
    s.c_[0] = c;
    return s;
  }
  static TruncatedSeries identity(Var v, int order) {
    TruncatedSeries s(v, order);
    if (order >= 1) s.c_[1] = T(1);
    return s;
  }

  Var var() const { return var_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_[k]; }
  T& operator[](int k) { return c_[k]; }
  T coeff(int k) const { return k < 0 || k > order() ? T(0) : c_[k]; }
  const std::vector<T>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& c : c_)
      if (!c.is_zero()) return false;
    return true;
  }
  // Index of the first nonzero coefficient, -1 for the zero series.
  int valuation() const {
    for (int k = 0; k <= order(); ++k)
      if (!c_[k].is_zero()) return k;
    return -1;
  }

  TruncatedSeries truncated(int n) const {
    if (n > order()) throw DomainError("cannot extend a truncated series");
    return TruncatedSeries(var_, std::vector<T>(c_.begin(), c_.begin() + n + 1));
  }
  // Pads with zero coefficients; only valid when the caller knows they are zero.
  TruncatedSeries padded(int n) const {
    TruncatedSeries s = *this;
    s.c_.resize(std::max(n, order()) + 1);
    return s;
  }
  TruncatedSeries retagged(Var v) const {
    TruncatedSeries s = *this;
    s.var_ = v;
    return s;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.var_ == b.var_ && a.c_ == b.c_;
  }

 private:
  static int check(int order) {
    if (order < 0) throw DomainError("negative series order");
    return order;
  }
  Var var_;
  std::vector<T> c_;
};

using QSeries = TruncatedSeries<Rational>;
using RSeries = TruncatedSeries<RatFun>;

namespace detail {
template <class T>
void same_var(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  if (a.var() != b.var()) throw DomainError("series variable mismatch");
}
}  // namespace detail

template <class T>
TruncatedSeries<T> operator+(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::same_var(a, b);
  int n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(a.var(), n);
  for (int k = 0; k <= n; ++k) r[k] = a[k] + b[k];
  return r;
}

template <class T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a) {
  TruncatedSeries<T> r(a.var(), a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
  return r;
}

template <class T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  return a + (-b);
}

template <class T>
TruncatedSeries<T> scale(const TruncatedSeries<T>& a, const T& c) {
  TruncatedSeries<T> r(a.var(), a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k] * c;
  return r;
}

// Cauchy product, one output coefficient per loop iteration. This is the
// reference the parallel kernel is tested against.
template <class T>
TruncatedSeries<T> mul_serial(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::same_var(a, b);
  int n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(a.var(), n);
  for (int k = 0; k <= n; ++k) {
    T acc(0);
    for (int i = 0; i <= k; ++i)
      if (!a[i].is_zero() && !b[k - i].is_zero()) acc += a[i] * b[k - i];
    r[k] = std::move(acc);
  }
  return r;
}

// Parallel over output coefficients. Each coefficient is still summed in
// increasing i, so the result is identical to mul_serial.
template <class T>
TruncatedSeries<T> mul_parallel(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::same_var(a, b);
  int n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(a.var(), n);
  std::vector<std::exception_ptr> err(n + 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = n; k >= 0; --k) {
    try {
      T acc(0);
      for (int i = 0; i <= k; ++i)
        if (!a[i].is_zero() && !b[k - i].is_zero()) acc += a[i] * b[k - i];
      r[k] = std::move(acc);
    } catch (...) {
      err[k] = std::current_exception();
    }
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return r;
}

template <class T>
constexpr bool heavy_scalar = false;
template <>
inline constexpr bool heavy_scalar<RatFun> = true;

template <class T>
TruncatedSeries<T> operator*(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  if constexpr (heavy_scalar<T>) {
    if (std::min(a.order(), b.order()) >= 6) return mul_parallel(a, b);
  }
  return mul_serial(a, b);
}

// Multiplicative inverse; requires an invertible constant term.
template <class T>
TruncatedSeries<T> inverse(const TruncatedSeries<T>& b) {
  if (b[0].is_zero()) throw DomainError("division by series with zero constant term");
  int n = b.order();
  TruncatedSeries<T> r(b.var(), n);
  T inv0 = T(1) / b[0];
  r[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    T acc(0);
    for (int i = 1; i <= k; ++i)
      if (!b[i].is_zero() && !r[k - i].is_zero()) acc += b[i] * r[k - i];
    r[k] = -(acc * inv0);
  }
  return r;
}

template <class T>
TruncatedSeries<T> operator/(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::same_var(a, b);
  int n = std::min(a.order(), b.order());
  return a.truncated(n) * inverse(b.truncated(n));
}

template <class T>
TruncatedSeries<T> integrate(const TruncatedSeries<T>& s) {
  TruncatedSeries<T> r(s.var(), s.order() + 1);
  for (int k = 0; k <= s.order(); ++k)
    if (!s[k].is_zero()) r[k + 1] = s[k] * T(Rational(mpz_class(1), mpz_class(k + 1)));
  return r;
}

template <class T>
TruncatedSeries<T> differentiate(const TruncatedSeries<T>& s) {
  if (s.order() == 0) return TruncatedSeries<T>(s.var(), 0);
  TruncatedSeries<T> r(s.var(), s.order() - 1);
  for (int k = 1; k <= s.order(); ++k)
    if (!s[k].is_zero()) r[k - 1] = s[k] * T(k);
  return r;
}

template <class T>
std::pair<TruncatedSeries<T>, TruncatedSeries<T>> parity_split(const TruncatedSeries<T>& s) {
  TruncatedSeries<T> even(s.var(), s.order()), odd(s.var(), s.order());
  for (int k = 0; k <= s.order(); ++k) (k % 2 ? odd : even)[k] = s[k];
  return {even, odd};
}

// outer(inner(t)); the result carries inner's variable tag.
template <class T>
TruncatedSeries<T> compose(const TruncatedSeries<T>& outer, const TruncatedSeries<T>& inner) {
  if (!inner[0].is_zero()) throw DomainError("composition with nonzero constant term");
  int n = std::min(outer.order(), inner.order());
  TruncatedSeries<T> in = inner.truncated(n);
  TruncatedSeries<T> r = TruncatedSeries<T>::constant(inner.var(), n, outer[n]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * in;
    r[0] += outer[k];
  }
  return r;
}

// Compositional inverse by Newton iteration on s(r) = t; the result is tagged v.
template <class T>
TruncatedSeries<T> reverse(const TruncatedSeries<T>& s, Var v) {
  if (!s[0].is_zero()) throw DomainError("reversion needs s(0) = 0");
  if (s.order() < 1 || s[1].is_zero()) throw DomainError("degenerate coordinate change");
  int N = s.order();
  TruncatedSeries<T> src = s.retagged(v);
  TruncatedSeries<T> r(v, 1);
  r[1] = T(1) / s[1];
  int p = 1;
  while (p < N) {
    p = std::min(2 * p + 1, N);
    TruncatedSeries<T> sp = src.truncated(p);
    TruncatedSeries<T> rp = r.padded(p);
    TruncatedSeries<T> err = compose(sp, rp) - TruncatedSeries<T>::identity(v, p);
    TruncatedSeries<T> ds = compose(differentiate(sp).padded(p), rp);
    r = rp - err / ds;
  }
  return r.truncated(N);
}

template <class T>
TruncatedSeries<T> exp(const TruncatedSeries<T>& s) {
  if (!s[0].is_zero()) throw DomainError("exp needs s(0) = 0");
  int n = s.order();
  TruncatedSeries<T> e(s.var(), n);
  e[0] = T(1);
  for (int k = 1; k <= n; ++k) {
    T acc(0);
    for (int j = 1; j <= k; ++j)
      if (!s[j].is_zero() && !e[k - j].is_zero()) acc += T(j) * s[j] * e[k - j];
    e[k] = acc * T(Rational(mpz_class(1), mpz_class(k)));
  }
  return e;
}

template <class T>
TruncatedSeries<T> log(const TruncatedSeries<T>& s) {
  if (!(s[0] == T(1))) throw DomainError("log needs s(0) = 1");
  if (s.order() == 0) return TruncatedSeries<T>(s.var(), 0);
  TruncatedSeries<T> q = differentiate(s) / s.truncated(s.order() - 1);
  return integrate(q);
}

// Square root of a series of valuation exactly 2 with positive leading
// coefficient, choosing the branch with positive linear term. Order drops by one.
template <class T>
TruncatedSeries<T> sqrt_positive(const TruncatedSeries<T>& s, std::optional<T> declared_root = std::nullopt) {
  int N = s.order();
  if (N < 2 || !s[0].is_zero() || !s[1].is_zero() || s[2].is_zero())
    throw DomainError("branch undefined: valuation is not exactly 2");
  std::optional<T> root = declared_root;
  if (root) {
    if (!(*root * *root == s[2])) throw DomainError("declared root does not square to the leading coefficient");
  } else {
    if (!positive_constant(s[2])) throw DomainError("branch undefined: leading coefficient not a positive constant");
    root = exact_sqrt(s[2]);
    if (!root) throw DomainError("leading coefficient is not a rational square: " + scalar_str(s[2]));
  }
  int n = N - 2;
  TruncatedSeries<T> t(s.var(), n);
  t[0] = *root;
  T inv2 = T(1) / (T(2) * *root);
  for (int k = 1; k <= n; ++k) {
    T acc = s[k + 2];
    for (int i = 1; i < k; ++i)
      if (!t[i].is_zero() && !t[k - i].is_zero()) acc -= t[i] * t[k - i];
    t[k] = acc * inv2;
  }
  TruncatedSeries<T> r(s.var(), N - 1);
  for (int k = 0; k <= n; ++k) r[k + 1] = t[k];
  return r;
}

// Series of a closed-form rational function of x (possibly with parameters)
// about x = 0.
inline RSeries expand_ratfun(const RatFun& f, int order, const std::string& xname = "x") {
  auto to_series = [&](const MultiPoly& p) {
    RSeries s(Var::x, order);
    auto cs = p.coeffs_in(xname);
    for (int k = 0; k < static_cast<int>(cs.size()) && k <= order; ++k) s[k] = RatFun(cs[k].trimmed());
    return s;
  };
  RSeries num = to_series(f.num()), den = to_series(f.den());
  if (den[0].is_zero()) throw DomainError("closed form has a pole at x = 0");
  return num / den;
}

// Drops parameters: every coefficient must be a constant.
inline QSeries to_rational_series(const RSeries& s) {
  QSeries r(s.var(), s.order());
  for (int k = 0; k <= s.order(); ++k) r[k] = s[k].constant_value();
  return r;
}
inline RSeries to_ratfun_series(const QSeries& s) {
  RSeries r(s.var(), s.order());
  for (int k = 0; k <= s.order(); ++k) r[k] = RatFun(s[k]);
  return r;
}

template <class T>
std::string series_str(const TruncatedSeries<T>& s) {
  std::string out;
  for (int k = 0; k <= s.order(); ++k) {
    if (s[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + scalar_str(s[k]) + ")";
    if (k > 0) out += std::string("*") + var_name(s.var()) + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return (out.empty() ? "0" : out) + " + O(" + var_name(s.var()) + "^" + std::to_string(s.order() + 1) + ")";
}

}  // namespace isochron
