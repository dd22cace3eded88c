#include <doctest.h>

#include <random>

#include "isochron/parse.hpp"
#include "isochron/series.hpp"
#include "oracle/algebra_oracle.hpp"
#include "oracle/series_oracle.hpp"

using namespace isochron;
using oracle::QVec;

namespace {

QSeries qs(std::initializer_list<Rational> c, Var v = Var::x) { return QSeries(v, std::vector<Rational>(c)); }
QSeries qs(const QVec& c, Var v = Var::x) { return QSeries(v, c); }
Rational q(long a, long b = 1) { return Rational(mpz_class(a), mpz_class(b)); }

QSeries random_series(std::mt19937_64& rng, int n, bool zero_const, bool unit_linear = false) {
  QVec c = oracle::random_qvec(rng, n);
  if (zero_const) c[0] = 0;
  if (unit_linear) c[1] = 1;
  return qs(c);
}

}  // namespace

TEST_CASE("series arithmetic examples") {
  CHECK(qs({1, 1, 0}) * qs({1, -1, 0}) == qs({1, 0, -1}));
  QSeries one_minus_x = qs({1, -1, 0, 0, 0});
  CHECK(QSeries::constant(Var::x, 4, 1) / one_minus_x == qs({1, 1, 1, 1, 1}));
  CHECK_THROWS_AS(QSeries::constant(Var::x, 3, 1) / qs({0, 1, 0, 0}), DomainError);
  CHECK_THROWS_AS(qs({1, 1}, Var::x) + qs({1, 1}, Var::X), DomainError);

  // x (1 + D x) (1 - x)^{-2F}, symbolic then specialized at (D, F) = (0, 1).
  int n = 3;
  RSeries lin = RSeries::identity(Var::x, n);
  RSeries onepdx = RSeries::constant(Var::x, n, 1);
  onepdx[1] = RatFun::var("D");
  RSeries l = log(RSeries(Var::x, {RatFun(1), RatFun(-1), RatFun(0), RatFun(0)}));
  RSeries pw = exp(scale(l, RatFun(-2) * RatFun::var("F")));
  RSeries prod = lin * onepdx * pw;
  QSeries at(Var::x, n);
  for (int k = 0; k <= n; ++k) at[k] = prod[k].eval_full({{"D", 0}, {"F", 1}});
  QVec ref = oracle::naive_mul({0, 1}, oracle::binomial(-2, n), n);  // x (1+t)^{-2}, t = -x
  for (int k = 0; k <= n; ++k) ref[k] *= (k % 2 == 1 ? 1 : -1);       // t = -x flips odd powers of (1+t)
  CHECK(at == qs({0, 1, 2, 3}));
  CHECK(at == qs(ref));
}

TEST_CASE("composition examples") {
  QSeries outer = qs({0, 0, 1, 0, 0}, Var::u);
  QSeries inner = qs({0, 1, 1, 0, 0});
  QSeries r = compose(outer, inner);
  CHECK(r.var() == Var::x);
  CHECK(r == qs({0, 0, 1, 2, 1}));
  CHECK_THROWS_AS(compose(outer, qs({1, 1, 0, 0, 0})), DomainError);

  QSeries s = qs({0, 1, 3, 0, 0, 0, 0});
  CHECK(compose(reverse(s, Var::x), s) == QSeries::identity(Var::x, 6));

  // sinh u / cosh^3 u composed with arcsinh x equals x (1 + x^2)^{-3/2}.
  int n = 11;
  QSeries u = QSeries::identity(Var::u, n);
  QSeries eu = exp(u), emu = exp(-u);
  QSeries half = QSeries::constant(Var::u, n, q(1, 2));
  QSeries sinh_u = (eu - emu) * half, cosh_u = (eu + emu) * half;
  QSeries outer2 = sinh_u / (cosh_u * cosh_u * cosh_u);
  QSeries sinh_x = sinh_u.retagged(Var::x);
  QSeries arcsinh = reverse(sinh_x, Var::x);
  QSeries lhs = compose(outer2, arcsinh);
  QVec b = oracle::binomial(q(-3, 2), n);  // (1+t)^{-3/2}, t = x^2
  QVec ref(n + 1, Rational(0));
  for (int k = 0; 2 * k + 1 <= n; ++k) ref[2 * k + 1] = b[k];
  CHECK(lhs == qs(ref));
}

TEST_CASE("reversion examples") {
  CHECK(reverse(QSeries::identity(Var::x, 5), Var::X) == QSeries::identity(Var::X, 5));
  CHECK(reverse(qs({0, 1, 1, 0, 0}), Var::x) == qs({0, 1, -1, 2, -5}));
  // Catalan numbers with alternating signs to order 12, Lagrange oracle.
  QVec s(13, Rational(0));
  s[1] = 1;
  s[2] = 1;
  CHECK(reverse(qs(s), Var::x) == qs(oracle::lagrange_reverse(s, 12)));
  QSeries odd = qs({0, 2, 0, q(1, 3), 0, -1, 0, q(5, 7), 0});
  QSeries r = reverse(odd, Var::x);
  CHECK(parity_split(r).first.is_zero());
  CHECK_THROWS_WITH_AS(reverse(qs({0, 0, 1, 0}), Var::x), "degenerate coordinate change", DomainError);
}

TEST_CASE("exp and log examples") {
  CHECK(exp(QSeries(Var::x, 6)) == QSeries::constant(Var::x, 6, 1));
  CHECK(log(QSeries::constant(Var::x, 6, 1)) == QSeries(Var::x, 6));
  CHECK_THROWS_AS(exp(QSeries::constant(Var::x, 3, 1)), DomainError);
  CHECK_THROWS_AS(log(QSeries(Var::x, 3)), DomainError);

  // exp(-(F+1) log(1-x)) at F = 1/4.
  QSeries l = log(qs({1, -1, 0, 0}));
  QSeries e = exp(scale(l, -q(5, 4)));
  CHECK(e == qs({1, q(5, 4), q(45, 32), q(195, 128)}));
  QVec b = oracle::binomial(-q(5, 4), 3);
  for (int k = 1; k <= 3; k += 2) b[k] = -b[k];
  CHECK(e == qs(b));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    QSeries s = random_series(rng, 8, true);
    CHECK(log(exp(s)) == s);
  }
}

TEST_CASE("sqrt_positive examples") {
  CHECK(sqrt_positive(qs({0, 0, 1, 0, 0})) == qs({0, 1, 0, 0}));
  // 2 (1 + u - sqrt(1 + 2u)) = u^2 - u^3 + (5/4) u^4 + ...
  QSeries s = qs({0, 0, 1, -1, q(5, 4)});
  QSeries r = sqrt_positive(s);
  CHECK(r == qs({0, 1, q(-1, 2), q(1, 2)}));
  CHECK(r * r == s.truncated(3));
  QSeries sq = r.padded(4) * r.padded(4);
  CHECK(sq[4] == q(5, 4));

  RSeries ks(Var::x, 3);
  ks[2] = RatFun::var("K");
  CHECK_THROWS_AS(sqrt_positive(ks), DomainError);
  RSeries k2(Var::x, 3);
  k2[2] = RatFun::var("k") * RatFun::var("k");
  RSeries kr = sqrt_positive(k2, std::optional<RatFun>(RatFun::var("k")));
  CHECK(kr[1] == RatFun::var("k"));
  CHECK_THROWS_AS(sqrt_positive(k2, std::optional<RatFun>(RatFun::var("K"))), DomainError);
  CHECK_THROWS_WITH_AS(sqrt_positive(qs({0, 1, 1, 0})), doctest::Contains("branch undefined"), DomainError);
  CHECK_THROWS_AS(sqrt_positive(qs({0, 0, -1, 0})), DomainError);
  CHECK_THROWS_AS(sqrt_positive(qs({0, 0, 2, 0})), DomainError);
}

TEST_CASE("calculus and parity examples") {
  QSeries geo = QSeries::constant(Var::x, 3, 1) / qs({1, -1, 0, 0});
  CHECK(integrate(geo) == qs({0, 1, q(1, 2), q(1, 3), q(1, 4)}));
  RSeries f(Var::x, {RatFun::var("a3"), RatFun::var("a6")});
  RSeries F = integrate(f);
  CHECK(F[0].is_zero());
  CHECK(F[1] == RatFun::var("a3"));
  CHECK(F[2] == RatFun::var("a6") / RatFun(2));

  auto [ev, od] = parity_split(qs({0, 1, 1, 1}));
  CHECK(ev == qs({0, 0, 1, 0}));
  CHECK(od == qs({0, 1, 0, 1}));
  QSeries H = qs({0, 0, q(1, 2), 0}, Var::X);
  CHECK(parity_split(H).first == H);

  // h = X / sqrt(X^2 + 16) = (X/4) (1 + X^2/16)^{-1/2}
  int n = 7;
  QVec b = oracle::binomial(q(-1, 2), n);
  QSeries h(Var::X, n);
  for (int k = 0; 2 * k + 1 <= n; ++k) h[2 * k + 1] = b[k] / Rational(4) / Rational(16).pow(k);
  CHECK(parity_split(h).first.is_zero());
}

TEST_CASE("series property suites") {
  std::mt19937_64 rng(20241015);
  SUBCASE("reversion is a two-sided inverse and matches Lagrange inversion") {
    for (int trial = 0; trial < 50; ++trial) {
      QSeries s = random_series(rng, 10, true, true);
      QSeries r = reverse(s, Var::x);
      CHECK(compose(s, r) == QSeries::identity(Var::x, 10));
      CHECK(compose(r, s) == QSeries::identity(Var::x, 10));
      CHECK(r == qs(oracle::lagrange_reverse(s.coeffs(), 10)));
    }
  }
  SUBCASE("exp and log homomorphisms, power-sum oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      QSeries a = random_series(rng, 8, true), b = random_series(rng, 8, true);
      CHECK(exp(a + b) == exp(a) * exp(b));
      CHECK(exp(a) == qs(oracle::power_sum_exp(a.coeffs(), 8)));
      QSeries pa = a + QSeries::constant(Var::x, 8, 1), pb = b + QSeries::constant(Var::x, 8, 1);
      CHECK(log(pa * pb) == log(pa) + log(pb));
      CHECK(log(pa) == qs(oracle::power_sum_log1p(a.coeffs(), 8)));
    }
  }
  SUBCASE("sqrt squares back") {
    for (int trial = 0; trial < 20; ++trial) {
      QSeries t = random_series(rng, 8, true);
      t[1] = Rational(std::abs(trial % 5) + 1, 1) / Rational(trial % 3 + 1);
      QSeries s = t * t;
      QSeries r = sqrt_positive(s);
      CHECK(r == t.truncated(7));
      CHECK(r * r == s.truncated(7));
    }
  }
  SUBCASE("calculus round trips") {
    for (int trial = 0; trial < 20; ++trial) {
      QSeries s = random_series(rng, 8, false);
      CHECK(differentiate(integrate(s)) == s);
      QSeries s0 = s;
      s0[0] = 0;
      CHECK(integrate(differentiate(s)) == s0);
    }
  }
  SUBCASE("odd series compose and reverse to odd series") {
    for (int trial = 0; trial < 20; ++trial) {
      QSeries a = random_series(rng, 9, true, true), b = random_series(rng, 9, true);
      a = parity_split(a).second;
      b = parity_split(b).second;
      CHECK(parity_split(compose(a, b)).first.is_zero());
      CHECK(parity_split(reverse(a, Var::x)).first.is_zero());
    }
  }
  SUBCASE("naive composition oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      QSeries a = random_series(rng, 8, false), b = random_series(rng, 8, true);
      CHECK(compose(a, b) == qs(oracle::naive_compose(a.coeffs(), b.coeffs(), 8)));
    }
  }
  SUBCASE("differentiation oracle on rational functions") {
    for (int trial = 0; trial < 15; ++trial) {
      QVec nc = oracle::random_qvec(rng, 3), dc = oracle::random_qvec(rng, 3);
      dc[0] = 1;
      MultiPoly x = MultiPoly::var("x"), num, den;
      for (int k = 3; k >= 0; --k) {
        num = num * x + MultiPoly(nc[k]);
        den = den * x + MultiPoly(dc[k]);
      }
      RatFun f(num, den);
      QSeries ser = qs(nc).padded(8) / qs(dc).padded(8);
      CHECK(ser == qs(oracle::taylor_by_differentiation(f, 8)));
      // f(x) composed with x + x^2 against differentiating f(x + x^2).
      QSeries inner = qs({0, 1, 1, 0, 0, 0, 0, 0, 0});
      RatFun fx = f.substitute({{"x", RatFun(x + x * x)}});
      CHECK(compose(ser, inner) == qs(oracle::taylor_by_differentiation(fx, 8)));
      CHECK(differentiate(ser) == qs(oracle::taylor_by_differentiation(f.derivative("x"), 7)));
    }
  }
  SUBCASE("parallel multiplication equals the serial reference") {
    for (int trial = 0; trial < 5; ++trial) {
      RSeries a(Var::x, 10), b(Var::x, 10);
      for (int k = 0; k <= 10; ++k) {
        a[k] = RatFun(MultiPoly(oracle::small_rational(rng)) * MultiPoly::var("p") + MultiPoly(k));
        b[k] = RatFun(MultiPoly::var("q") * MultiPoly(oracle::small_rational(rng)), MultiPoly::var("r") + MultiPoly(k + 1));
      }
      CHECK(mul_parallel(a, b) == mul_serial(a, b));
    }
  }
}

TEST_CASE("sinh over cosh cubed by the exponential-variable oracle") {
  int n = 9;
  QSeries u = QSeries::identity(Var::u, n);
  QSeries eu = exp(u), emu = exp(-u);
  QSeries half = QSeries::constant(Var::u, n, q(1, 2));
  QSeries sh = (eu - emu) * half, ch = (eu + emu) * half;
  RatFun w = RatFun::var("w");
  RatFun sinh_w = (w - w.inv()) / RatFun(2), cosh_w = (w + w.inv()) / RatFun(2);
  CHECK(sh / (ch * ch * ch) == qs(oracle::taylor_in_exp_variable(sinh_w / cosh_w.pow(3), n), Var::u));
}

TEST_CASE("expand_ratfun") {
  RatFun f = parse_ratfun("(F+1)/(1-x)");
  RSeries s = expand_ratfun(f, 4);
  for (int k = 0; k <= 4; ++k) CHECK(s[k] == parse_ratfun("F+1"));
  CHECK_THROWS_AS(expand_ratfun(parse_ratfun("1/x"), 3), DomainError);
}
