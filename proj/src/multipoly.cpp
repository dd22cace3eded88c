#include "isochron/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "isochron/errors.hpp"

namespace isochron {

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(e[i]) + o.e[i];
    if (s > 0xFFFF) throw DomainError("exponent overflow");
    r.e[i] = static_cast<std::uint16_t>(s);
  }
  r.deg = deg + o.deg;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
  r.deg = deg - o.deg;
  return r;
}

int grlex_cmp(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  if (out.size() > kMaxVars) throw DomainError("too many polynomial variables");
  return out;
}

MultiPoly PolyBuilder::build() {
  std::sort(raw_.begin(), raw_.end(),
            [](const MultiPoly::Term& a, const MultiPoly::Term& b) { return grlex_cmp(a.m, b.m) > 0; });
  MultiPoly p;
  p.vars_ = std::move(vars_);
  for (auto& t : raw_) {
    if (!p.terms_.empty() && p.terms_.back().m == t.m) {
      p.terms_.back().c += t.c;
    } else {
      if (!p.terms_.empty() && p.terms_.back().c.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().c.is_zero()) p.terms_.pop_back();
  raw_.clear();
  return p;
}

MultiPoly::MultiPoly(const Rational& c) {
  if (!c.is_zero()) terms_.push_back({Monomial{}, c});
}

MultiPoly MultiPoly::var(const std::string& name) {
  MultiPoly p;
  p.vars_ = {name};
  Monomial m;
  m.e[0] = 1;
  m.deg = 1;
  p.terms_.push_back({m, Rational(1)});
  return p;
}

MultiPoly MultiPoly::from_terms(std::vector<std::string> vars,
                                const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms) {
  if (vars.size() > kMaxVars) throw DomainError("too many polynomial variables");
  std::vector<std::size_t> perm(vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
  std::vector<std::string> sorted;
  for (auto i : perm) sorted.push_back(vars[i]);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw DomainError("duplicate variable " + sorted[i]);
  PolyBuilder b(sorted);
  for (const auto& [exps, c] : terms) {
    if (exps.size() != vars.size()) throw DomainError("exponent vector length mismatch");
    Monomial m;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      m.e[k] = static_cast<std::uint16_t>(exps[perm[k]]);
      m.deg += exps[perm[k]];
    }
    b.add(m, c);
  }
  return b.build();
}

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().m.deg == 0) return terms_.back().c;
  return Rational(0);
}

int MultiPoly::var_index(const std::string& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) return -1;
  return static_cast<int>(it - vars_.begin());
}

int MultiPoly::degree(const std::string& v) const {
  if (is_zero()) return -1;
  int i = var_index(v);
  if (i < 0) return 0;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.m.e[i]));
  return d;
}

std::vector<std::string> MultiPoly::used_vars() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (const auto& t : terms_)
      if (t.m.e[i]) {
        out.push_back(vars_[i]);
        break;
      }
  return out;
}

MultiPoly MultiPoly::with_vars(const std::vector<std::string>& superset) const {
  if (superset == vars_) return *this;
  std::vector<int> map(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::lower_bound(superset.begin(), superset.end(), vars_[i]);
    if (it == superset.end() || *it != vars_[i]) {
      bool used = std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.m.e[i] != 0; });
      if (used) throw DomainError("variable " + vars_[i] + " missing from target variable list");
      map[i] = -1;
    } else {
      map[i] = static_cast<int>(it - superset.begin());
    }
  }
  MultiPoly r;
  r.vars_ = superset;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    m.deg = t.m.deg;
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (map[i] >= 0) m.e[map[i]] = t.m.e[i];
    r.terms_.push_back({m, t.c});
  }
  // Dropping unused slots can reorder nothing, but inserting/removing columns of
  // zeros never changes grlex comparisons.
  return r;
}

MultiPoly MultiPoly::trimmed() const { return with_vars(used_vars()); }

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

namespace {

template <class Op>
MultiPoly merge_add(const MultiPoly& a, const MultiPoly& b, Op op) {
  auto vars = merge_vars(a.vars(), b.vars());
  MultiPoly x = a.with_vars(vars), y = b.with_vars(vars);
  PolyBuilder out(vars);
  const auto& ta = x.terms();
  const auto& tb = y.terms();
  std::size_t i = 0, j = 0;
  std::vector<std::pair<Monomial, Rational>> acc;
  acc.reserve(ta.size() + tb.size());
  while (i < ta.size() || j < tb.size()) {
    int c = i == ta.size() ? -1 : (j == tb.size() ? 1 : grlex_cmp(ta[i].m, tb[j].m));
    if (c > 0) {
      acc.emplace_back(ta[i].m, ta[i].c);
      ++i;
    } else if (c < 0) {
      acc.emplace_back(tb[j].m, op(Rational(0), tb[j].c));
      ++j;
    } else {
      Rational s = op(ta[i].c, tb[j].c);
      if (!s.is_zero()) acc.emplace_back(ta[i].m, std::move(s));
      ++i;
      ++j;
    }
  }
  for (auto& [m, c] : acc) out.add(m, c);
  return out.build();
}

}  // namespace

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o.with_vars(merge_vars(vars_, o.vars_));
  *this = merge_add(*this, o, [](const Rational& a, const Rational& b) { return a + b; });
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.is_zero()) return *this;
  *this = merge_add(*this, o, [](const Rational& a, const Rational& b) { return a - b; });
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  auto vars = merge_vars(a.vars(), b.vars());
  if (a.is_zero() || b.is_zero()) {
    MultiPoly z;
    z.vars_ = vars;
    return z;
  }
  MultiPoly x = a.with_vars(vars), y = b.with_vars(vars);
  if (y.terms_.size() == 1 && y.terms_[0].m.deg == 0) return x.scaled(y.terms_[0].c);
  if (x.terms_.size() == 1 && x.terms_[0].m.deg == 0) return y.scaled(x.terms_[0].c);

  struct Prod {
    Monomial m;
    std::uint32_t i, j;
  };
  std::vector<Prod> prods;
  prods.reserve(x.terms_.size() * y.terms_.size());
  for (std::uint32_t i = 0; i < x.terms_.size(); ++i)
    for (std::uint32_t j = 0; j < y.terms_.size(); ++j)
      prods.push_back({x.terms_[i].m * y.terms_[j].m, i, j});
  std::sort(prods.begin(), prods.end(), [](const Prod& p, const Prod& q) { return grlex_cmp(p.m, q.m) > 0; });

  MultiPoly r;
  r.vars_ = vars;
  mpq_class acc, tmp;
  std::size_t k = 0;
  while (k < prods.size()) {
    std::size_t l = k;
    acc = 0;
    while (l < prods.size() && prods[l].m == prods[k].m) {
      mpq_mul(tmp.get_mpq_t(), x.terms_[prods[l].i].c.raw().get_mpq_t(), y.terms_[prods[l].j].c.raw().get_mpq_t());
      acc += tmp;
      ++l;
    }
    if (sgn(acc) != 0) r.terms_.push_back({prods[k].m, Rational(acc)});
    k = l;
  }
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly MultiPoly::scaled(const Rational& c) const {
  if (c.is_zero()) {
    MultiPoly z;
    z.vars_ = vars_;
    return z;
  }
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.c *= c;
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r(1), b = *this;
  r = r.with_vars(vars_);
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.vars_ == b.vars_) {
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
    return true;
  }
  auto ua = a.used_vars(), ub = b.used_vars();
  if (ua != ub) return false;
  MultiPoly x = a.with_vars(ua), y = b.with_vars(ub);
  return x == y;
}

MultiPoly MultiPoly::derivative(const std::string& v) const {
  int i = var_index(v);
  MultiPoly r;
  r.vars_ = vars_;
  if (i < 0) return r;
  for (const auto& t : terms_) {
    if (t.m.e[i] == 0) continue;
    Monomial m = t.m;
    m.e[i] -= 1;
    m.deg -= 1;
    r.terms_.push_back({m, t.c * Rational(t.m.e[i])});
  }
  // differentiation in one variable is order preserving on the survivors
  std::stable_sort(r.terms_.begin(), r.terms_.end(),
                   [](const Term& a, const Term& b) { return grlex_cmp(a.m, b.m) > 0; });
  return r;
}

std::vector<MultiPoly> MultiPoly::coeffs_in(const std::string& v) const {
  int i = var_index(v);
  std::vector<std::string> rest = vars_;
  if (i >= 0) rest.erase(rest.begin() + i);
  if (i < 0) {
    if (is_zero()) return {};
    return {with_vars(rest)};
  }
  int d = degree(v);
  std::vector<PolyBuilder> bs(d + 1, PolyBuilder(rest));
  for (const auto& t : terms_) {
    Monomial m;
    std::size_t k = 0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      if (int(j) == i) continue;
      m.e[k++] = t.m.e[j];
    }
    m.deg = t.m.deg - t.m.e[i];
    bs[t.m.e[i]].add(m, t.c);
  }
  std::vector<MultiPoly> out;
  out.reserve(bs.size());
  for (auto& b : bs) out.push_back(b.build());
  return out;
}

MultiPoly MultiPoly::from_coeffs_in(const std::string& v, const std::vector<MultiPoly>& cs) {
  std::vector<std::string> vars = {v};
  for (const auto& c : cs) vars = merge_vars(vars, c.vars());
  MultiPoly xv = var(v).with_vars(vars);
  PolyBuilder b(vars);
  int vi = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].has_var(v) && cs[k].degree(v) > 0) throw DomainError("coefficient depends on main variable");
    MultiPoly c = cs[k].with_vars(vars);
    for (const auto& t : c.terms()) {
      Monomial m = t.m;
      m.e[vi] = static_cast<std::uint16_t>(k);
      m.deg += static_cast<std::uint32_t>(k);
      b.add(m, t.c);
    }
  }
  return b.build();
}

MultiPoly MultiPoly::eval(const std::map<std::string, Rational>& point, bool strict) const {
  std::vector<int> idx(vars_.size(), -1);
  std::vector<const Rational*> vals(vars_.size(), nullptr);
  for (const auto& [name, val] : point) {
    int i = var_index(name);
    if (i < 0) {
      if (strict) throw DomainError("unknown variable " + name);
      continue;
    }
    vals[i] = &val;
  }
  std::vector<std::string> rest;
  std::vector<int> slot(vars_.size(), -1);
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (!vals[i]) {
      slot[i] = static_cast<int>(rest.size());
      rest.push_back(vars_[i]);
    }
  // cache powers
  std::vector<std::vector<Rational>> pw(vars_.size());
  PolyBuilder b(rest);
  for (const auto& t : terms_) {
    Rational c = t.c;
    Monomial m;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      unsigned e = t.m.e[i];
      if (vals[i]) {
        if (e == 0) continue;
        auto& p = pw[i];
        while (p.size() <= e) p.push_back(p.empty() ? Rational(1) : p.back() * *vals[i]);
        c *= p[e];
      } else {
        m.e[slot[i]] = t.m.e[i];
        m.deg += e;
      }
    }
    b.add(m, c);
  }
  return b.build();
}

Rational MultiPoly::eval_full(const std::map<std::string, Rational>& point) const {
  MultiPoly r = eval(point, false);
  if (!r.is_constant()) throw DomainError("partial assignment where a full one is required");
  return r.constant_term();
}

double MultiPoly::eval_double(const std::map<std::string, double>& point) const {
  std::vector<double> v(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = point.find(vars_[i]);
    if (it == point.end()) throw DomainError("no value for variable " + vars_[i]);
    v[i] = it->second;
  }
  double s = 0;
  for (const auto& t : terms_) {
    double m = t.c.to_double();
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (t.m.e[i]) m *= std::pow(v[i], t.m.e[i]);
    s += m;
  }
  return s;
}

MultiPoly MultiPoly::substitute(const std::string& v, const MultiPoly& p) const {
  if (!has_var(v)) return *this;
  auto cs = coeffs_in(v);
  MultiPoly r;
  for (std::size_t k = cs.size(); k-- > 0;) r = r * p + cs[k];
  return r;
}

Rational MultiPoly::content() const {
  if (is_zero()) return Rational(1);
  mpz_class g = 0, l = 1;
  for (const auto& t : terms_) {
    g = gcd(g, t.c.num());
    l = lcm(l, t.c.den());
  }
  return Rational(abs(g), l);
}

std::string MultiPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.c;
    bool neg = c.sign() < 0;
    if (neg) c = -c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool mono = t.m.deg > 0;
    bool unit = c.is_one();
    if (!unit || !mono) os << c.str();
    bool need_star = !unit;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!t.m.e[i]) continue;
      if (need_star) os << '*';
      os << vars_[i];
      if (t.m.e[i] > 1) os << '^' << t.m.e[i];
      need_star = true;
    }
  }
  return os.str();
}

MultiPoly poly_normalize(const MultiPoly& p) {
  if (p.is_zero()) return p;
  Rational c = p.content();
  if (p.lc().sign() < 0) c = -c;
  return p.scaled(c.inv());
}

std::pair<MultiPoly, MultiPoly> divide(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  auto vars = merge_vars(a.vars(), b.vars());
  MultiPoly p = a.with_vars(vars), d = b.with_vars(vars);
  PolyBuilder q(vars), r(vars);
  const auto& lt = d.lead();
  while (!p.is_zero()) {
    const auto& t = p.lead();
    if (lt.m.divides(t.m)) {
      Monomial m = t.m / lt.m;
      Rational c = t.c / lt.c;
      q.add(m, c);
      PolyBuilder mb(vars);
      mb.add(m, c);
      p -= mb.build() * d;
    } else {
      r.add(t.m, t.c);
      PolyBuilder mb(vars);
      mb.add(t.m, t.c);
      p -= mb.build();
    }
  }
  return {q.build(), r.build()};
}

MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_constant()) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    return a.scaled(b.constant_term().inv());
  }
  auto [q, r] = divide(a, b);
  if (!r.is_zero()) throw DomainError("inexact polynomial division");
  return q;
}

MultiPoly reduce(const MultiPoly& a, const std::vector<MultiPoly>& divisors) {
  std::vector<std::string> vars = a.vars();
  for (const auto& d : divisors) vars = merge_vars(vars, d.vars());
  MultiPoly p = a.with_vars(vars);
  std::vector<MultiPoly> ds;
  for (const auto& d : divisors)
    if (!d.is_zero()) ds.push_back(d.with_vars(vars));
  PolyBuilder r(vars);
  while (!p.is_zero()) {
    const auto t = p.lead();
    bool done = false;
    for (const auto& d : ds) {
      if (!d.lead().m.divides(t.m)) continue;
      PolyBuilder mb(vars);
      mb.add(t.m / d.lead().m, t.c / d.lc());
      p -= mb.build() * d;
      done = true;
      break;
    }
    if (!done) {
      r.add(t.m, t.c);
      PolyBuilder mb(vars);
      mb.add(t.m, t.c);
      p -= mb.build();
    }
  }
  return r.build();
}

}  // namespace isochron
