#include "isochron/polyalg.hpp"

#include "isochron/errors.hpp"
#include "isochron/upoly.hpp"

namespace isochron {

namespace {

using Dense = std::vector<MultiPoly>;  // coefficients in the main variable, index = degree

int deg(const Dense& a) {
  int d = static_cast<int>(a.size()) - 1;
  while (d >= 0 && a[d].is_zero()) --d;
  return d;
}

void trim(Dense& a) { a.resize(deg(a) + 1); }

Dense prem_dense(Dense a, const Dense& b) {
  int db = deg(b);
  int da = deg(a);
  if (db < 0) throw DomainError("pseudo-division by zero");
  if (da < db) return a;
  const MultiPoly& lb = b[db];
  int e = da - db + 1;
  while ((da = deg(a)) >= db) {
    MultiPoly la = a[da];
    for (int i = 0; i <= da; ++i) a[i] = a[i] * lb;
    for (int j = 0; j <= db; ++j) a[da - db + j] -= la * b[j];
    a[da] = MultiPoly();
    trim(a);
    --e;
  }
  if (e > 0) {
    MultiPoly f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : a) c = c * f;
  }
  trim(a);
  return a;
}

Dense dense_div_scalar(const Dense& a, const MultiPoly& s) {
  Dense r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = exact_div(a[i], s);
  return r;
}

// True when A and B (primitive in v) are certainly coprime in v: an image at a
// point where neither leading coefficient vanishes has a gcd of degree at
// least that of the true gcd, so a constant image gcd proves degree 0.
bool coprime_by_image(const MultiPoly& A, const MultiPoly& B, const std::string& v) {
  std::vector<std::string> others;
  for (const auto& u : merge_vars(A.vars(), B.vars()))
    if (u != v && (A.has_var(u) || B.has_var(u))) others.push_back(u);
  if (others.empty()) return false;
  MultiPoly la = A.coeffs_in(v).back(), lb = B.coeffs_in(v).back();
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::map<std::string, Rational> pt;
    for (std::size_t i = 0; i < others.size(); ++i) pt[others[i]] = Rational(static_cast<long>(2 + 3 * i + 7 * attempt));
    if (la.eval(pt, false).is_zero() || lb.eval(pt, false).is_zero()) continue;
    UPoly a = UPoly::from_multi(A.eval(pt, false).trimmed()), b = UPoly::from_multi(B.eval(pt, false).trimmed());
    return gcd(a, b).degree() == 0;
  }
  return false;
}

}  // namespace

MultiPoly prem(const MultiPoly& a, const MultiPoly& b, const std::string& var) {
  Dense r = prem_dense(a.coeffs_in(var), b.coeffs_in(var));
  return MultiPoly::from_coeffs_in(var, r);
}

MultiPoly content_in(const MultiPoly& p, const std::string& var) {
  MultiPoly g;
  for (const auto& c : p.coeffs_in(var)) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant()) return poly_normalize(g);
  }
  return g;
}

MultiPoly primitive_part_in(const MultiPoly& p, const std::string& var) {
  if (p.is_zero()) return p;
  return poly_normalize(exact_div(p, content_in(p, var)));
}

MultiPoly poly_gcd(const MultiPoly& a0, const MultiPoly& b0) {
  MultiPoly a = a0.trimmed(), b = b0.trimmed();
  if (a.is_zero()) return poly_normalize(b);
  if (b.is_zero()) return poly_normalize(a);
  if (a.is_constant() || b.is_constant()) return MultiPoly(1);
  auto vars = merge_vars(a.vars(), b.vars());
  const std::string& v = vars.front();
  if (!a.has_var(v)) return poly_gcd(a, content_in(b, v));
  if (!b.has_var(v)) return poly_gcd(content_in(a, v), b);

  MultiPoly ca = content_in(a, v), cb = content_in(b, v);
  MultiPoly c = poly_gcd(ca, cb);
  MultiPoly A = poly_normalize(exact_div(a, ca)), B = poly_normalize(exact_div(b, cb));
  if (A.degree(v) < B.degree(v)) std::swap(A, B);
  if (coprime_by_image(A, B, v)) return poly_normalize(c).trimmed();
  MultiPoly G;
  while (true) {
    MultiPoly r = prem(A, B, v);
    if (r.is_zero()) {
      G = B;
      break;
    }
    if (r.degree(v) <= 0) {
      G = MultiPoly(1);
      break;
    }
    A = std::move(B);
    B = primitive_part_in(r, v);
  }
  if (!G.is_constant()) G = primitive_part_in(G, v);
  return poly_normalize(c * G).trimmed();
}

MultiPoly poly_resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
  if (p.degree(var) <= 0 || q.degree(var) <= 0) throw DomainError("nothing to eliminate in " + var);
  Dense A = p.coeffs_in(var), B = q.coeffs_in(var);
  trim(A);
  trim(B);
  // Subresultant PRS; the sign bookkeeping makes the result the Sylvester
  // determinant with the rows of p first.
  MultiPoly s(1);
  if (deg(A) < deg(B)) {
    std::swap(A, B);
    if ((deg(A) & 1) && (deg(B) & 1)) s = -s;
  }
  MultiPoly g(1), h(1);
  while (true) {
    int da = deg(A), db = deg(B);
    int delta = da - db;
    if ((da & 1) && (db & 1)) s = -s;
    Dense R = prem_dense(A, B);
    A = B;
    if (deg(R) < 0) return MultiPoly();
    MultiPoly div = g * h.pow(static_cast<unsigned>(delta));
    B = dense_div_scalar(R, div);
    g = A[deg(A)];
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact_div(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
    if (deg(B) == 0) {
      int d = deg(A);
      MultiPoly lb = B[0];
      MultiPoly res;
      if (d == 0)
        res = MultiPoly(1);
      else if (d == 1)
        res = lb;
      else
        res = exact_div(lb.pow(static_cast<unsigned>(d)), h.pow(static_cast<unsigned>(d - 1)));
      return s * res;
    }
  }
}

MultiPoly poly_squarefree(const MultiPoly& p0) {
  MultiPoly p = poly_normalize(p0.trimmed());
  if (p.is_constant()) return p.is_zero() ? p : MultiPoly(1);
  // Remove repeated factors variable by variable.
  for (const auto& v : p.used_vars()) {
    MultiPoly c = content_in(p, v);
    MultiPoly pp = exact_div(p, c);
    MultiPoly g = poly_gcd(pp, pp.derivative(v));
    pp = exact_div(pp, g);
    p = poly_normalize(pp * poly_squarefree(c));
  }
  return p.trimmed();
}

}  // namespace isochron
