#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isochron/pipeline.hpp"

namespace isochron {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;
  double section_refinement_tol = 1e-13;
  double max_time = 200.0;
  double energy_tol = 1e-8;
  bool check_energy = true;
  void validate() const;
};

// Real-valued version of x'' + f x'^2 + g = 0. g'(0) may differ from 1; the
// Urabe-side quantities (energy c, h, quadrature period) refer to the
// normalized system g/K and periods are converted back by 1/sqrt(K).
struct NumericSystem {
  std::function<double(double)> f_eval, g_eval;
  // Open interval where f and g may be evaluated.
  double lower = -1.0, upper = 1.0;
  double frequency_scale = 1.0;  // K = g'(0)
  // Urabe function of the normalized system; when absent it is computed from
  // f and g by inverting the action variable numerically.
  std::function<double(double)> h_eval;
  double h_radius = 0;  // |X| bound for h_eval (0 = unrestricted)
  std::string h_method = "numeric-inversion";

  // K = g'(0); estimated by finite differences when not given.
  static NumericSystem from_exprs(const Expr& f, const Expr& g, double lower, double upper,
                                  std::optional<double> K = std::nullopt);
  // Closed forms when present, otherwise the (parameter-free) series. The
  // system is the normalized one: periods of the original equation are these
  // divided by sqrt(sys.frequency_scale).
  static NumericSystem from_lienard(const LienardSystem& sys, double radius_fallback = 1.0);

  double F(double x) const;  // int_0^x f
  double G(double x) const;  // int_0^x g e^{2F}, normalized by K
  double energy(double x, double y) const;
  // Action coordinate X(x) with X^2/2 = G(x), sign of x.
  double X_of_x(double x) const;
  double x_of_X(double X) const;
  // h(X) = X / (g(x) e^{F(x)} / K) - 1 at x = x(X).
  double h_numeric(double X) const;
  double h(double X) const;
};

struct OrbitResult {
  double period = 0;
  double energy_c = 0;
  double max_energy_drift = 0;
  int steps = 0;
  int rejected = 0;
  std::vector<std::array<double, 3>> samples;  // (t, x, y) at accepted steps
};

OrbitResult integrate_orbit(const NumericSystem& sys, double x0, const IntegratorConfig& cfg, bool keep_samples = false);

// 2 * int_{-pi/2}^{pi/2} (1 + h(sqrt(2c) sin theta)) d theta.
double period_quadrature(const std::function<double(double)>& h_eval, double c, double h_radius = 0);

struct PeriodRow {
  double amplitude = 0, period_ode = 0, period_quad = 0, energy_c = 0;
};
struct PeriodScan {
  std::vector<PeriodRow> rows;
  std::string h_method;
  std::string to_csv() const;
};

PeriodScan scan_period(const NumericSystem& sys, const std::vector<double>& amplitudes, const IntegratorConfig& cfg);
PeriodScan scan_period_serial(const NumericSystem& sys, const std::vector<double>& amplitudes,
                              const IntegratorConfig& cfg);

enum class PeriodTrend { increasing, decreasing, constant, mixed };
const char* to_string(PeriodTrend t);
PeriodTrend monotonicity_verdict(const PeriodScan& scan, double tol);

// Radius of reliable evaluation of a truncated series, from the decay of its
// last nonzero coefficients (root test); infinite for polynomials.
double series_reliability_radius(const std::vector<double>& coeffs);
double eval_series(const std::vector<double>& coeffs, double x);

}  // namespace isochron
