#include "isochron/roots.hpp"

#include <algorithm>

#include "isochron/errors.hpp"

namespace isochron {

namespace {

std::vector<mpz_class> to_int(const UPoly& p) {
  // positive rescaling only: signs matter for Sturm chains
  UPoly q = p.primitive();
  if ((q.lc().sign() > 0) != (p.lc().sign() > 0)) q = -q;
  std::vector<mpz_class> z;
  z.reserve(q.coeffs().size());
  for (const auto& c : q.coeffs()) z.push_back(c.num());
  return z;
}

}  // namespace

int sign_at(const std::vector<mpz_class>& p, const Rational& x) {
  // sign of d^n p(n/d) with d > 0, evaluated in integers
  if (p.empty()) return 0;
  mpz_class n = x.num(), d = x.den();
  mpz_class acc = p.back(), dp = 1;
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    dp *= d;
    acc = acc * n + p[i] * dp;
  }
  return sgn(acc);
}

SturmSequence::SturmSequence(const UPoly& f) {
  if (f.is_zero()) throw DomainError("Sturm sequence of zero");
  UPoly a = f.primitive();
  UPoly b = f.derivative().primitive();
  seq_.push_back(to_int(a));
  while (!b.is_zero()) {
    seq_.push_back(to_int(b));
    UPoly r = -(a % b);
    // scaling by a positive constant keeps the sign pattern
    a = std::move(b);
    if (r.is_zero()) break;
    UPoly rp = r.primitive();
    if ((rp.lc().sign() > 0) != (r.lc().sign() > 0)) rp = -rp;
    b = std::move(rp);
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0, last = 0;
  for (const auto& p : seq_) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::variations_at_infinity(int sign) const {
  int v = 0, last = 0;
  for (const auto& p : seq_) {
    int s = sgn(p.back());
    if (sign < 0 && (p.size() - 1) % 2 == 1) s = -s;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

Rational cauchy_bound(const UPoly& p) {
  Rational m;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, (p[i] / p.lc()).abs());
  return m + Rational(1);
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  // continued-fraction descent on the open interval (lo, hi)
  if (!(lo < hi)) throw DomainError("empty interval");
  if (lo.sign() < 0 && hi.sign() > 0) return Rational(0);
  if (hi.sign() <= 0) return -simplest_between(-hi, -lo);
  Rational fl = lo.floor();
  if (fl + Rational(1) < hi) return fl + Rational(1);
  // integer part shared: lo in [fl, fl+1), hi <= fl+1
  if (lo == fl) {
    // open interval excludes fl itself
    Rational k = fl + Rational(1);
    if (k < hi) return k;
  }
  Rational a = lo - fl, b = hi - fl;  // 0 <= a < b <= 1
  if (a.is_zero()) {
    // (0, b): 1/n with n = floor(1/b) + 1
    Rational n = (b.inv()).floor() + Rational(1);
    return fl + n.inv();
  }
  // 1/x maps (a, b) to (1/b, 1/a)
  return fl + simplest_between(b.inv(), a.inv()).inv();
}

namespace {

Rational value_at(const std::vector<mpz_class>& p, const Rational& x) {
  Rational acc;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + Rational(p[i], mpz_class(1));
  return acc;
}

}  // namespace

void refine(IsolatingInterval& iv, const UPoly& sqf, const Rational& width) {
  if (iv.exact) return;
  auto z = to_int(sqf);
  int slo = sign_at(z, iv.lo);
  auto settle = [&](const Rational& m) {
    iv.lo = iv.hi = m;
    iv.exact = m;
  };
  // Quadratic interval refinement: a secant guess picks one of N pieces; on
  // success N is squared, otherwise fall back to bisection with N = sqrt(N).
  mpz_class N = 4;
  while (iv.hi - iv.lo > width) {
    if (N > 4) {
      Rational flo = value_at(z, iv.lo), fhi = value_at(z, iv.hi);
      Rational w = (iv.hi - iv.lo) / Rational(N, mpz_class(1));
      Rational guess = iv.lo + (iv.hi - iv.lo) * flo / (flo - fhi);
      mpz_class k = ((guess - iv.lo) / w).floor().num();
      if (k < 0) k = 0;
      if (k >= N) k = N - 1;
      Rational a = iv.lo + w * Rational(k, mpz_class(1)), b = a + w;
      int sa = sign_at(z, a), sb = sign_at(z, b);
      if (sa == 0) return settle(a);
      if (sb == 0) return settle(b);
      if (sa != sb) {
        iv.lo = a;
        iv.hi = b;
        N *= N;
        continue;
      }
      N = sqrt(N);
    } else {
      N = 16;
    }
    Rational m = (iv.lo + iv.hi) / Rational(2);
    int sm = sign_at(z, m);
    if (sm == 0) return settle(m);
    if (sm == slo)
      iv.lo = m;
    else
      iv.hi = m;
  }
}

namespace {

// Roots of a squarefree polynomial, each tagged with multiplicity mult.
std::vector<IsolatingInterval> isolate_squarefree(const UPoly& f, int mult) {
  std::vector<IsolatingInterval> out;
  if (f.degree() <= 0) return out;
  UPoly fp = f.primitive();
  auto z = to_int(fp);
  SturmSequence st(fp);
  Rational B = cauchy_bound(fp);
  int total = st.variations_at_infinity(-1) - st.variations_at_infinity(1);
  if (total == 0) return out;

  struct Job {
    Rational a, b;
    int n;
    bool b_done;  // b is a root already recorded; n counts roots in (a, b)
  };  // otherwise n counts roots in (a, b]
  std::vector<Job> stack{{-B, B, total, false}};
  std::vector<IsolatingInterval> found;
  mpz_class lcz = abs(z.back());
  Rational sep(mpz_class(1), lcz * lcz);
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    if (j.n == 0) continue;
    if (!j.b_done && sign_at(z, j.b) == 0) {
      found.push_back({j.b, j.b, j.b, mult});
      j.n -= 1;
      j.b_done = true;
      if (j.n == 0) continue;
    }
    if (j.n == 1) {
      Rational a = j.a, b = j.b;
      bool hit = false;
      // an endpoint may be a root owned by a neighbour; move off it
      while (sign_at(z, a) == 0 || sign_at(z, b) == 0) {
        Rational m = (a + b) / Rational(2);
        if (sign_at(z, m) == 0) {
          found.push_back({m, m, m, mult});
          hit = true;
          break;
        }
        if (st.count(a, m) == 1)
          b = m;
        else
          a = m;
      }
      if (hit) continue;
      IsolatingInterval iv{a, b, std::nullopt, mult};
      // rational screening: denominators of rational roots divide lc
      Rational s = simplest_between(iv.lo, iv.hi);
      if (sign_at(z, s) == 0) {
        found.push_back({s, s, s, mult});
        continue;
      }
      refine(iv, fp, sep);
      if (!iv.exact) {
        Rational t = simplest_between(iv.lo, iv.hi);
        if (sign_at(z, t) == 0) iv = {t, t, t, mult};
      }
      found.push_back(iv);
      continue;
    }
    Rational m = (j.a + j.b) / Rational(2);
    int left = st.count(j.a, m);  // includes m if m is a root
    stack.push_back({m, j.b, j.n - left, j.b_done});
    stack.push_back({j.a, m, left, false});
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return found;
}

}  // namespace

std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p) {
  if (p.is_zero()) throw DomainError("identically zero");
  std::vector<IsolatingInterval> all;
  std::vector<UPoly> owner;
  auto parts = squarefree_decomposition(p);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (auto& iv : isolate_squarefree(parts[i], static_cast<int>(i + 1))) {
      all.push_back(iv);
      owner.push_back(parts[i]);
    }
  }
  // make intervals from different factors disjoint, then sort
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        auto& a = all[i];
        auto& b = all[j];
        if (a.hi < b.lo || b.hi < a.lo) continue;
        if (a.exact && b.exact) continue;  // distinct exact roots never overlap
        auto& w = (a.hi - a.lo) >= (b.hi - b.lo) ? a : b;
        auto& o = &w == &a ? owner[i] : owner[j];
        refine(w, o, (w.hi - w.lo) / Rational(4));
        changed = true;
      }
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return all;
}

std::vector<IsolatingInterval> isolate_real_roots(const MultiPoly& p) {
  if (p.is_zero()) throw DomainError("identically zero");
  return isolate_real_roots(UPoly::from_multi(p));
}

int complex_root_count(const UPoly& p) {
  int real = 0;
  for (const auto& iv : isolate_real_roots(p)) real += iv.multiplicity;
  return p.degree() - real;
}

}  // namespace isochron
