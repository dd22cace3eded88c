#include "isochron/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

#include "isochron/errors.hpp"

namespace isochron {

namespace {

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

GaussRule make_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = z;
    r.w[i] = 2 / ((1 - z * z) * pp * pp);
  }
  return r;
}

const GaussRule& gauss(int n) {
  static const GaussRule g10 = make_gauss(10), g48 = make_gauss(48), g64 = make_gauss(64);
  switch (n) {
    case 10:
      return g10;
    case 48:
      return g48;
    default:
      return g64;
  }
}

template <class Fn>
double gl_integrate(const Fn& fn, double a, double b, int n = 10) {
  const GaussRule& g = gauss(n);
  double m = 0.5 * (a + b), r = 0.5 * (b - a), s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * fn(m + r * g.x[i]);
  return s * r;
}

constexpr double kPanel = 0.02;

int panels_for(double x) { return std::max(1, static_cast<int>(std::ceil(std::abs(x) / kPanel))); }

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0 && abs_tol > 0 && max_step > 0 && section_refinement_tol > 0 && max_time > 0))
    throw DomainError("integrator tolerances must be positive");
  if (section_refinement_tol > abs_tol) throw DomainError("section_refinement_tol must not exceed abs_tol");
}

double series_reliability_radius(const std::vector<double>& c) {
  int last = -1;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[k] != 0) {
      last = k;
      break;
    }
  if (last < 0) return INFINITY;
  if (last + 1 < static_cast<int>(c.size()) / 2) return INFINITY;  // a polynomial
  double r = INFINITY;
  int used = 0;
  for (int k = last; k >= 1 && used < 4; --k) {
    if (c[k] == 0) continue;
    r = std::min(r, std::pow(std::abs(c[k]), -1.0 / k));
    ++used;
  }
  return r;
}

double eval_series(const std::vector<double>& c, double x) {
  double s = 0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = s * x + c[k];
  return s;
}

NumericSystem NumericSystem::from_exprs(const Expr& f, const Expr& g, double lower, double upper,
                                        std::optional<double> K) {
  for (const Expr* e : {&f, &g}) {
    auto s = e->symbols();
    s.erase("x");
    if (!s.empty()) throw DomainError("numeric evaluation needs rational parameter values (free: " + *s.begin() + ")");
  }
  NumericSystem n;
  n.f_eval = [f](double x) { return f.eval(x); };
  n.g_eval = [g](double x) { return g.eval(x); };
  n.lower = lower;
  n.upper = upper;
  if (K) {
    n.frequency_scale = *K;
    return n;
  }
  double eps = 1e-5;
  n.frequency_scale = (8 * (g.eval(eps) - g.eval(-eps)) - (g.eval(2 * eps) - g.eval(-2 * eps))) / (12 * eps);
  if (!(n.frequency_scale > 0)) throw DomainError("g'(0) must be positive");
  return n;
}

NumericSystem NumericSystem::from_lienard(const LienardSystem& sys, double radius_fallback) {
  if (sys.is_parametric()) throw DomainError("numeric evaluation needs rational parameter values");
  double radius = sys.validity_radius.value_or(radius_fallback);
  if (sys.f_expr && sys.g_expr) {
    auto [lo, hi] = sys.validity_interval.value_or(std::make_pair(-radius, radius));
    return from_exprs(*sys.f_expr, *sys.g_expr, lo, hi, 1.0);
  }
  std::vector<double> fc, gc;
  for (const auto& c : sys.f.coeffs()) fc.push_back(c.constant_value().to_double());
  for (const auto& c : sys.g.coeffs()) gc.push_back(c.constant_value().to_double());
  double r = std::min(series_reliability_radius(fc), series_reliability_radius(gc)) / 2;
  NumericSystem n;
  n.f_eval = [fc](double x) { return eval_series(fc, x); };
  n.g_eval = [gc](double x) { return eval_series(gc, x); };
  n.upper = std::min(radius, r);
  n.lower = -n.upper;
  n.frequency_scale = 1.0;
  return n;
}

double NumericSystem::F(double x) const {
  int np = panels_for(x);
  double h = x / np, s = 0;
  for (int i = 0; i < np; ++i) s += gl_integrate(f_eval, i * h, (i + 1) * h);
  return s;
}

double NumericSystem::G(double x) const {
  int np = panels_for(x);
  double h = x / np, s = 0, Fa = 0;
  for (int i = 0; i < np; ++i) {
    double a = i * h, b = (i + 1) * h;
    auto integrand = [&](double t) {
      double Ft = Fa + gl_integrate(f_eval, a, t);
      return g_eval(t) * std::exp(2 * Ft);
    };
    s += gl_integrate(integrand, a, b);
    Fa += gl_integrate(f_eval, a, b);
  }
  return s / frequency_scale;
}

double NumericSystem::energy(double x, double y) const {
  double e2F = std::exp(2 * F(x));
  return 0.5 * e2F * y * y / frequency_scale + G(x);
}

double NumericSystem::X_of_x(double x) const {
  double X = std::sqrt(2 * std::max(0.0, G(x)));
  return x < 0 ? -X : X;
}

double NumericSystem::x_of_X(double X) const {
  if (X == 0) return 0;
  double target = 0.5 * X * X, x = X;
  for (int it = 0; it < 60; ++it) {
    if (x >= upper) x = upper - 1e-3 * (upper - lower > 1e300 ? 1.0 : upper - lower);
    if (x <= lower) x = lower + 1e-3 * (upper - lower > 1e300 ? 1.0 : upper - lower);
    double r = G(x) - target;
    double d = g_eval(x) * std::exp(2 * F(x)) / frequency_scale;
    double dx = r / d;
    x -= dx;
    if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double NumericSystem::h_numeric(double X) const {
  if (X == 0) return 0;
  double x = x_of_X(X);
  return X / (g_eval(x) * std::exp(F(x)) / frequency_scale) - 1;
}

double NumericSystem::h(double X) const {
  if (h_eval) {
    if (h_radius > 0 && std::abs(X) > h_radius) throw NumericError("h evaluated outside its validity range");
    return h_eval(X);
  }
  return h_numeric(X);
}

namespace {

struct State {
  double x, y;
};

State rhs(const NumericSystem& s, const State& u) { return {u.y, -s.g_eval(u.x) - s.f_eval(u.x) * u.y * u.y}; }

// One Dormand-Prince 5(4) step; returns the 5th-order state and the error estimate.
std::pair<State, State> dp_step(const NumericSystem& s, const State& u, double h) {
  static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                          a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84, e1 = 71.0 / 57600,
                          e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                          e7 = -1.0 / 40;
  auto add = [](const State& a, std::initializer_list<std::pair<double, State>> terms, double h) {
    State r = a;
    for (const auto& [c, k] : terms) {
      r.x += h * c * k.x;
      r.y += h * c * k.y;
    }
    return r;
  };
  State k1 = rhs(s, u);
  State k2 = rhs(s, add(u, {{a21, k1}}, h));
  State k3 = rhs(s, add(u, {{a31, k1}, {a32, k2}}, h));
  State k4 = rhs(s, add(u, {{a41, k1}, {a42, k2}, {a43, k3}}, h));
  State k5 = rhs(s, add(u, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}, h));
  State k6 = rhs(s, add(u, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}, h));
  State y5 = add(u, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}}, h);
  State k7 = rhs(s, y5);
  State err = add(State{0, 0}, {{e1, k1}, {e3, k3}, {e4, k4}, {e5, k5}, {e6, k6}, {e7, k7}}, h);
  return {y5, err};
}

}  // namespace

OrbitResult integrate_orbit(const NumericSystem& sys, double x0, const IntegratorConfig& cfg, bool keep_samples) {
  cfg.validate();
  if (!(x0 > 0) || x0 >= sys.upper) throw NumericError("amplitude outside period annulus sampling range");
  OrbitResult res;
  res.energy_c = sys.G(x0);
  State u{x0, 0};
  double t = 0, h = std::min(cfg.max_step, 1e-3);
  if (keep_samples) res.samples.push_back({t, u.x, u.y});
  while (true) {
    if (t > cfg.max_time) throw NumericError("not a closed orbit at this tolerance");
    h = std::min(h, cfg.max_step);
    auto [un, err] = dp_step(sys, u, h);
    double sx = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(u.x), std::abs(un.x));
    double sy = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(u.y), std::abs(un.y));
    double en = std::sqrt(0.5 * ((err.x / sx) * (err.x / sx) + (err.y / sy) * (err.y / sy)));
    if (!std::isfinite(en)) {
      h *= 0.25;
      ++res.rejected;
      continue;
    }
    if (en > 1) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      ++res.rejected;
      continue;
    }
    if (un.x >= sys.upper || un.x <= sys.lower) throw NumericError("amplitude outside period annulus sampling range");
    ++res.steps;
    bool crossed = u.y > 0 && un.y <= 0 && un.x > 0;
    if (crossed) {
      // Bisection on the step length: y(t + tau) changes sign in (lo, hi].
      double lo = 0, hi = h;
      while (hi - lo > cfg.section_refinement_tol) {
        double mid = 0.5 * (lo + hi);
        State um = dp_step(sys, u, mid).first;
        (um.y > 0 ? lo : hi) = mid;
      }
      res.period = t + 0.5 * (lo + hi);
      if (keep_samples) res.samples.push_back({res.period, dp_step(sys, u, 0.5 * (lo + hi)).first.x, 0});
      break;
    }
    u = un;
    t += h;
    if (keep_samples) res.samples.push_back({t, u.x, u.y});
    if (cfg.check_energy) {
      double drift = std::abs(sys.energy(u.x, u.y) - res.energy_c);
      res.max_energy_drift = std::max(res.max_energy_drift, drift);
      if (drift > cfg.energy_tol) throw NumericError("energy drift " + std::to_string(drift) + " exceeds tolerance");
    }
    h *= std::min(5.0, 0.9 * std::pow(std::max(en, 1e-10), -0.2));
  }
  return res;
}

double period_quadrature(const std::function<double(double)>& h_eval, double c, double h_radius) {
  if (c < 0) throw DomainError("energy must be nonnegative");
  double A = std::sqrt(2 * c);
  if (h_radius > 0 && A > h_radius) throw NumericError("quadrature needs h outside its validity range");
  auto integrand = [&](double th) { return 1 + h_eval(A * std::sin(th)); };
  double half = std::numbers::pi / 2;
  return 2 * gl_integrate(integrand, -half, half, 64);
}

std::string PeriodScan::to_csv() const {
  std::string out = "amplitude,period_ode,period_quad,energy_c\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.amplitude, r.period_ode, r.period_quad, r.energy_c);
    out += buf;
  }
  return out;
}

namespace {

PeriodRow scan_row(const NumericSystem& sys, double a, const IntegratorConfig& cfg) {
  PeriodRow row;
  row.amplitude = a;
  OrbitResult orb = integrate_orbit(sys, a, cfg);
  row.period_ode = orb.period;
  row.energy_c = orb.energy_c;
  double K = sys.frequency_scale;
  row.period_quad = period_quadrature([&](double X) { return sys.h(X); }, orb.energy_c, sys.h_radius) / std::sqrt(K);
  return row;
}

void check_amplitudes(const std::vector<double>& a) {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] > a[i - 1])) throw DomainError("amplitudes must be strictly increasing");
}

}  // namespace

PeriodScan scan_period_serial(const NumericSystem& sys, const std::vector<double>& amplitudes,
                              const IntegratorConfig& cfg) {
  check_amplitudes(amplitudes);
  PeriodScan scan;
  scan.h_method = sys.h_eval ? sys.h_method : "numeric-inversion";
  for (double a : amplitudes) scan.rows.push_back(scan_row(sys, a, cfg));
  return scan;
}

PeriodScan scan_period(const NumericSystem& sys, const std::vector<double>& amplitudes, const IntegratorConfig& cfg) {
  check_amplitudes(amplitudes);
  cfg.validate();
  PeriodScan scan;
  scan.h_method = sys.h_eval ? sys.h_method : "numeric-inversion";
  scan.rows.resize(amplitudes.size());
  std::vector<std::exception_ptr> err(amplitudes.size());
  int n = static_cast<int>(amplitudes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      scan.rows[i] = scan_row(sys, amplitudes[i], cfg);
    } catch (...) {
      err[i] = std::current_exception();
    }
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return scan;
}

const char* to_string(PeriodTrend t) {
  switch (t) {
    case PeriodTrend::increasing:
      return "increasing";
    case PeriodTrend::decreasing:
      return "decreasing";
    case PeriodTrend::constant:
      return "constant";
    default:
      return "mixed";
  }
}

PeriodTrend monotonicity_verdict(const PeriodScan& scan, double tol) {
  if (scan.rows.size() < 3) throw DomainError("monotonicity verdict needs at least 3 rows");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : scan.rows) {
    lo = std::min(lo, r.period_ode);
    hi = std::max(hi, r.period_ode);
  }
  if (hi - lo <= tol) return PeriodTrend::constant;
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    double d = scan.rows[i].period_ode - scan.rows[i - 1].period_ode;
    if (!(d > tol)) inc = false;
    if (!(d < -tol)) dec = false;
  }
  return inc ? PeriodTrend::increasing : (dec ? PeriodTrend::decreasing : PeriodTrend::mixed);
}

}  // namespace isochron
