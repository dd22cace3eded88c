#include <random>

#include "doctest.h"
#include "isochron/errors.hpp"
#include "isochron/parse.hpp"
#include "isochron/polyalg.hpp"
#include "isochron/ratfun.hpp"
#include "isochron/roots.hpp"
#include "oracle/algebra_oracle.hpp"

using namespace isochron;

namespace {
const char* kC1 = "4*F^2 + 10*D*F + 10*D^2 - D - 5*F + 1";
const char* kC2 = "4*F^3 + 24*D*F + 24*D^2 + 2*D*F^2 - F^2 - 4*F - 2*D + 1";
const char* kR1 = "864*D^2 + 22176*D^4 + 7536*D^3 + 25920*D^5 + 9600*D^6";
const char* kR2 = "-17280*F^3 + 192 + 9000*F^2 - 2160*F - 6480*F^5 + 15768*F^4 + 960*F^6";

std::vector<Rational> exact_roots(const std::vector<IsolatingInterval>& v) {
  std::vector<Rational> r;
  for (const auto& iv : v)
    if (iv.exact) r.push_back(*iv.exact);
  return r;
}

UPoly random_upoly(std::mt19937_64& rng, int deg) {
  std::vector<Rational> c;
  for (int i = 0; i <= deg; ++i) c.push_back(oracle::small_rational(rng));
  if (c.back().is_zero()) c.back() = Rational(1);
  return UPoly(c);
}
}  // namespace

TEST_CASE("rational canonical form and parsing") {
  CHECK(Rational::parse("6/-4").str() == "-3/2");
  CHECK(Rational::parse("0.25") == Rational(1) / Rational(4));
  CHECK(Rational::parse("-1.5e-3") == Rational(-3) / Rational(2000));
  CHECK(Rational::parse("7").str() == "7");
  CHECK(Rational(mpz_class(10), mpz_class(-4)).den() == 2);
  CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
  CHECK((Rational(9) / Rational(4)).sqrt_exact() == Rational(3) / Rational(2));
  CHECK_FALSE(Rational(2).sqrt_exact().has_value());
  CHECK(simplest_between(Rational::parse("0.3"), Rational::parse("0.34")) == Rational(1) / Rational(3));
  CHECK(simplest_between(Rational(-1), Rational(1)) == Rational(0));
  CHECK(simplest_between(Rational(2), Rational(3)) == Rational(5) / Rational(2));
}

TEST_CASE("poly_normalize") {
  CHECK(poly_normalize(parse_poly("8*F^2 + 20*D*F + 20*D^2 - 2*D - 10*F + 2")) == parse_poly(kC1));
  CHECK(poly_normalize(MultiPoly()).is_zero());
  CHECK(poly_normalize(parse_poly("-3*x + 6")) == parse_poly("x - 2"));
  // canonical grlex order, alphabetical variables
  CHECK(parse_poly(kC1).str() == "10*D^2 + 10*D*F + 4*F^2 - D - 5*F + 1");

  std::mt19937_64 rng(7);
  for (int it = 0; it < 50; ++it) {
    MultiPoly p;
    for (int k = 0; k < 4; ++k)
      p += MultiPoly(oracle::small_rational(rng)) * parse_poly("a").pow(rng() % 3) * parse_poly("b").pow(rng() % 3);
    if (p.is_zero()) continue;
    Rational c = oracle::small_rational(rng);
    if (c.is_zero()) continue;
    MultiPoly n = poly_normalize(p);
    CHECK(poly_normalize(n) == n);
    CHECK(poly_normalize(p.scaled(c)) == n);
  }
}

TEST_CASE("poly_eval") {
  MultiPoly c1 = parse_poly(kC1), c2 = parse_poly(kC2);
  CHECK(c1.eval_full({{"D", 0}, {"F", 1}}).is_zero());
  CHECK(c2.eval_full({{"D", Rational(-1) / 2}, {"F", Rational(1) / 2}}).is_zero());
  CHECK(c1.eval_full({{"D", 0}, {"F", 0}}) == 1);
  CHECK(c1.eval({{"D", 0}}) == parse_poly("4*F^2 - 5*F + 1"));
  CHECK_THROWS_AS(c1.eval({{"Q", 1}}), DomainError);
}

TEST_CASE("resultants") {
  CHECK(poly_resultant(parse_poly("x - a"), parse_poly("x - b"), "x") == parse_poly("a - b"));
  CHECK_THROWS_AS(poly_resultant(parse_poly("a"), parse_poly("x - b"), "x"), DomainError);

  MultiPoly c1 = parse_poly(kC1), c2 = parse_poly(kC2);
  MultiPoly rf = poly_resultant(c1, c2, "F"), rd = poly_resultant(c1, c2, "D");
  // proportional (in fact equal) to the printed eliminants
  CHECK(poly_normalize(rf) == poly_normalize(parse_poly(kR1)));
  CHECK(poly_normalize(rd) == poly_normalize(parse_poly(kR2)));
  CHECK(rf == parse_poly(kR1));
  CHECK(rd == parse_poly(kR2));
  CHECK(rf == oracle::sylvester_det(c1, c2, "F"));
  CHECK(rd == oracle::sylvester_det(c1, c2, "D"));
}

TEST_CASE("subresultant resultant agrees with the Sylvester determinant") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 40; ++it) {
    MultiPoly p, q;
    int dp = 1 + rng() % 4, dq = 1 + rng() % 4;
    for (int k = 0; k <= dp; ++k)
      p += parse_poly("x").pow(k) * (MultiPoly(oracle::small_rational(rng)) + parse_poly("y").scaled(oracle::small_rational(rng)));
    for (int k = 0; k <= dq; ++k)
      q += parse_poly("x").pow(k) * (MultiPoly(oracle::small_rational(rng)) + parse_poly("y").scaled(oracle::small_rational(rng)));
    if (p.degree("x") < 1 || q.degree("x") < 1) continue;
    CHECK(poly_resultant(p, q, "x") == oracle::sylvester_det(p, q, "x"));
  }
}

TEST_CASE("resultant vanishes iff gcd is nonconstant") {
  std::mt19937_64 rng(3);
  int common = 0;
  for (int it = 0; it < 100; ++it) {
    UPoly a = random_upoly(rng, 1 + rng() % 4), b = random_upoly(rng, 1 + rng() % 4);
    if (it % 3 == 0) {  // force a shared factor
      UPoly f = random_upoly(rng, 1);
      a = a * f;
      b = b * f;
    }
    if (a.degree() < 1 || b.degree() < 1 || a.degree() > 4 + 1 || b.degree() > 5) continue;
    bool zero = resultant(a, b).is_zero();
    bool shared = gcd(a, b).degree() > 0;
    CHECK(zero == shared);
    common += shared;
  }
  CHECK(common > 10);
}

TEST_CASE("multivariate gcd") {
  MultiPoly a = parse_poly("(x + y)^2 * (x - 2*y + 1)");
  MultiPoly b = parse_poly("(x + y) * (x^2 + y)");
  CHECK(poly_gcd(a, b) == parse_poly("x + y"));
  CHECK(poly_gcd(parse_poly("2*x + 2"), parse_poly("3*x + 3")) == parse_poly("x + 1"));
  CHECK(poly_gcd(parse_poly("x"), parse_poly("y")) == MultiPoly(1));
  CHECK(poly_squarefree(parse_poly("D^2*(2*D+1)^3*(F-1)")) == poly_normalize(parse_poly("D*(2*D+1)*(F-1)")));
}

TEST_CASE("isolate_real_roots examples") {
  auto r1 = isolate_real_roots(parse_poly(kR1));
  auto r2 = isolate_real_roots(parse_poly(kR2));
  CHECK(exact_roots(r1) == std::vector<Rational>{Rational(-1) / 2, Rational(0)});
  CHECK(exact_roots(r2) == std::vector<Rational>{Rational(1) / 4, Rational(1) / 2, Rational(1), Rational(2)});
  // the printed eliminants also carry the roots of 50D^2+85D+18 and 5F^2-15F+4
  CHECK(r1.size() == 4);
  CHECK(r2.size() == 6);
  CHECK(isolate_real_roots(parse_poly("x^2 + 1")).empty());
  CHECK_THROWS_AS(isolate_real_roots(MultiPoly()), DomainError);

  auto sq = isolate_real_roots(parse_poly("x^2 - 2"));
  REQUIRE(sq.size() == 2);
  CHECK_FALSE(sq[0].exact);
  CHECK(sq[1].lo * sq[1].lo < 2);
  CHECK(sq[1].hi * sq[1].hi > 2);
  auto m = isolate_real_roots(parse_poly("(x-1)^3*(x+2)^2*(x^2+1)"));
  REQUIRE(m.size() == 2);
  CHECK(m[0].multiplicity == 2);
  CHECK(m[1].multiplicity == 3);
  CHECK(complex_root_count(UPoly::from_multi(parse_poly("(x-1)^3*(x+2)^2*(x^2+1)"))) == 2);
}

TEST_CASE("Sturm counts vs brute-force sign scan") {
  std::mt19937_64 rng(2024);
  Rational lo(-16), hi(16), step(mpz_class(1), mpz_class(1024));
  for (int it = 0; it < 60; ++it) {
    UPoly p(Rational(1));
    std::vector<Rational> used;
    int k = 1 + rng() % 4;
    for (int j = 0; j < k; ++j) {
      Rational r = oracle::small_rational(rng, 30, 4) / Rational(2);
      if (std::find(used.begin(), used.end(), r) != used.end()) continue;
      used.push_back(r);
      p = p * UPoly({-r, Rational(1)});
    }
    if (rng() % 2) p = p * UPoly({Rational(2 + rng() % 5), Rational(0), Rational(-1)});  // +-sqrt(k)
    if (rng() % 2) p = p * UPoly({Rational(1 + rng() % 3), Rational(0), Rational(1)});   // no real roots
    p = p.scaled(oracle::small_rational(rng, 5, 3) + Rational(6));
    auto iso = isolate_real_roots(p);
    CHECK(static_cast<int>(iso.size()) == oracle::brute_root_count(p, lo, hi, step));
    for (std::size_t i = 1; i < iso.size(); ++i) CHECK(iso[i - 1].hi < iso[i].lo);
    for (const auto& iv : iso) {
      if (iv.exact) {
        CHECK(p.eval(*iv.exact).is_zero());
      } else {
        CHECK(p.eval(iv.lo).sign() * p.eval(iv.hi).sign() < 0);
      }
    }
  }
}

TEST_CASE("Sturm variations at infinity count products of distinct linear factors") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    UPoly p(Rational(1));
    int n = 1 + rng() % 6;
    for (int j = 0; j < n; ++j) p = p * UPoly({Rational(-(10 * j) - int(rng() % 7)), Rational(1)});
    SturmSequence st(p);
    CHECK(st.variations_at_infinity(-1) - st.variations_at_infinity(1) == n);
  }
}

TEST_CASE("ratfun arithmetic") {
  RatFun x = RatFun::var("x");
  CHECK((RatFun(1) / (RatFun(1) - x)) * (RatFun(1) - x) == RatFun(1));
  RatFun f = parse_ratfun("(F+1)/(1-x)");
  CHECK(f.eval({{"F", 1}}) == parse_ratfun("2/(1-x)"));
  RatFun ab = parse_ratfun("a/b");
  CHECK((ab + parse_ratfun("(-a)/b")).is_zero());
  CHECK_THROWS_AS(ab / RatFun(0), DomainError);
  CHECK(parse_ratfun("(x^2-1)/(2*x-2)") == parse_ratfun("(x+1)/2"));
  CHECK(parse_ratfun("1/(-2*x)").den() == parse_poly("x"));

  std::mt19937_64 rng(99);
  auto rnd = [&] {
    MultiPoly n, d;
    for (int k = 0; k < 3; ++k) {
      n += MultiPoly(oracle::small_rational(rng)) * parse_poly("a").pow(rng() % 2) * parse_poly("b").pow(rng() % 2);
      d += MultiPoly(oracle::small_rational(rng)) * parse_poly("a").pow(rng() % 2);
    }
    if (d.is_zero()) d = MultiPoly(1);
    return RatFun(n, d);
  };
  for (int it = 0; it < 30; ++it) {
    RatFun p = rnd(), q = rnd(), r = rnd();
    CHECK((p + q) + r == p + (q + r));
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    if (!q.is_zero()) CHECK((p / q) * q == p);
  }
}
