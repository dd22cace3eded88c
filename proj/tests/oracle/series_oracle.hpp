#pragma once
// Independent coefficient generators for checking the series engine. None of
// these call the library's series operations.

#include <map>
#include <random>
#include <vector>

#include "isochron/ratfun.hpp"
#include "isochron/rational.hpp"

namespace oracle {

using isochron::RatFun;
using isochron::Rational;
using QVec = std::vector<Rational>;

inline QVec naive_mul(const QVec& a, const QVec& b, int n) {
  QVec r(n + 1, Rational(0));
  for (int i = 0; i <= n && i < (int)a.size(); ++i)
    for (int j = 0; i + j <= n && j < (int)b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline QVec naive_pow(const QVec& a, int k, int n) {
  QVec r(n + 1, Rational(0));
  r[0] = 1;
  for (int i = 0; i < k; ++i) r = naive_mul(r, a, n);
  return r;
}

// sum_k outer[k] * inner^k with inner^k built by repeated naive products.
inline QVec naive_compose(const QVec& outer, const QVec& inner, int n) {
  QVec r(n + 1, Rational(0));
  for (int k = 0; k <= n && k < (int)outer.size(); ++k) {
    QVec p = naive_pow(inner, k, n);
    for (int i = 0; i <= n; ++i) r[i] += outer[k] * p[i];
  }
  return r;
}

// Coefficients of (1 + t)^a for rational a.
inline QVec binomial(const Rational& a, int n) {
  QVec r(n + 1);
  r[0] = 1;
  for (int k = 1; k <= n; ++k) r[k] = r[k - 1] * (a - Rational(k - 1)) / Rational(k);
  return r;
}

// Lagrange inversion: [t^n] s^{-1} = (1/n) [w^{n-1}] (w / s(w))^n.
inline QVec lagrange_reverse(const QVec& s, int n) {
  // w/s(w) = 1/(s1 + s2 w + ...), inverted by long division.
  QVec q(n + 1, Rational(0));
  for (int i = 0; i <= n && i + 1 < (int)s.size(); ++i) q[i] = s[i + 1];
  QVec inv(n + 1, Rational(0));
  inv[0] = q[0].inv();
  for (int k = 1; k <= n; ++k) {
    Rational acc = 0;
    for (int i = 1; i <= k; ++i) acc += q[i] * inv[k - i];
    inv[k] = -acc * inv[0];
  }
  QVec r(n + 1, Rational(0));
  for (int m = 1; m <= n; ++m) r[m] = naive_pow(inv, m, n)[m - 1] / Rational(m);
  return r;
}

// exp(s) = sum s^k / k!  (s(0) = 0)
inline QVec power_sum_exp(const QVec& s, int n) {
  QVec r(n + 1, Rational(0));
  Rational fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= Rational(k);
    QVec p = naive_pow(s, k, n);
    for (int i = 0; i <= n; ++i) r[i] += p[i] / fact;
  }
  return r;
}

// log(1 + t) = sum (-1)^{k+1} t^k / k  (t(0) = 0)
inline QVec power_sum_log1p(const QVec& t, int n) {
  QVec r(n + 1, Rational(0));
  for (int k = 1; k <= n; ++k) {
    QVec p = naive_pow(t, k, n);
    Rational c = Rational(k % 2 ? 1 : -1) / Rational(k);
    for (int i = 0; i <= n; ++i) r[i] += c * p[i];
  }
  return r;
}

// Taylor coefficients of a rational function of x at 0 by repeated symbolic
// differentiation: c_k = f^{(k)}(0) / k!.
inline QVec taylor_by_differentiation(RatFun f, int n, const std::string& x = "x") {
  QVec r(n + 1);
  Rational fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= Rational(k);
    r[k] = f.eval_full({{x, Rational(0)}}) / fact;
    f = f.derivative(x);
  }
  return r;
}

// Taylor coefficients in u of a rational function of w = e^u, using
// d/du = w d/dw and evaluating at w = 1.
inline QVec taylor_in_exp_variable(RatFun f, int n, const std::string& w = "w") {
  QVec r(n + 1);
  RatFun wv = RatFun::var(w);
  Rational fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= Rational(k);
    r[k] = f.eval_full({{w, Rational(1)}}) / fact;
    f = wv * f.derivative(w);
  }
  return r;
}

inline QVec random_qvec(std::mt19937_64& rng, int n, int range = 3, int maxden = 3) {
  std::uniform_int_distribution<int> num(-range, range), den(1, maxden);
  QVec r(n + 1);
  for (auto& c : r) c = Rational(mpz_class(num(rng)), mpz_class(den(rng)));
  return r;
}

}  // namespace oracle
