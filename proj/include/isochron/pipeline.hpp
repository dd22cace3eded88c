#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochron/expr.hpp"
#include "isochron/multipoly.hpp"
#include "isochron/ratfun.hpp"
#include "isochron/series.hpp"

namespace isochron {

constexpr int kDefaultOrder = 12;

// x'' + f(x) x'^2 + g(x) = 0 with g(0) = 0, g'(0) = 1.
struct LienardSystem {
  RSeries f, g;  // in x
  std::optional<Expr> f_expr, g_expr;
  std::vector<std::string> parameters;
  std::optional<double> validity_radius;
  // Where the closed forms may be evaluated, when wider than the radius.
  std::optional<std::pair<double, double>> validity_interval;
  std::string provenance;
  // g was divided by this constant to normalize g'(0); periods of the
  // original system are the normalized ones divided by sqrt(frequency_scale).
  Rational frequency_scale = 1;

  static LienardSystem from_exprs(const Expr& f, const Expr& g, int order, std::string provenance = {},
                                  std::optional<double> radius = std::nullopt);
  static LienardSystem from_series(const RSeries& f, const RSeries& g, std::string provenance = {},
                                   std::optional<double> radius = std::nullopt);

  int order() const { return std::min(f.order(), g.order()); }
  // Re-expands closed forms or truncates; throws if the series are too short.
  LienardSystem at_order(int order) const;
  // Substitutes rational values for parameters (series and closed forms).
  LienardSystem specialized(const std::map<std::string, Rational>& values) const;
  // Substitutes rational functions for parameters (series only; closed forms dropped
  // unless every substituted value is rational).
  LienardSystem substituted(const std::map<std::string, RatFun>& values) const;
  bool is_parametric() const { return !parameters.empty(); }
  // Throws DomainError when g(0) != 0 or g'(0) != 1.
  void check_normalized() const;
};

struct PipelineResult {
  int order = 0;  // h is known through X^order
  RSeries F, expF, phi, Gtilde_x, X_of_x, x_of_X, u_of_X, H, h, gtilde;
  bool identity_checked = false;
};

// Internal series order used for a result of order N (the square root loses one).
inline int working_order(int N) { return N + 1; }

PipelineResult reduce_to_conservative(const LienardSystem& sys, int N);
RSeries action_variable(const LienardSystem& sys, int N);
PipelineResult urabe_function(const LienardSystem& sys, int N);

struct Condition {
  int k = 0;                // degree in X
  RatFun raw;               // [X^k] h or the relation value
  MultiPoly normalized;     // numerator reduced by earlier conditions, then poly_normalize-d
};

struct ConditionSet {
  int order = 0;
  std::vector<Condition> conditions;
  // True when every raw value is identically zero.
  bool all_zero() const;
  // Nonzero normalized polynomials in increasing k.
  std::vector<MultiPoly> polynomials() const;
};

// Even coefficients of h, k = 2, 4, ..., N.
ConditionSet isochronicity_conditions(const PipelineResult& r);
ConditionSet isochronicity_conditions(const LienardSystem& sys, int N);

// Residuals of the odd coefficients of h against the one-parameter catalog form
// h = aX/sqrt(1 + a^2 X^2), a = [X]h: for odd k >= 3, [X^k]h - binom(-1/2, (k-1)/2) a^k.
// Normalization reduces by the even conditions found so far.
ConditionSet closed_form_relations(const PipelineResult& r);

enum class Monotonicity { increasing, decreasing, inconclusive };
const char* to_string(Monotonicity m);

struct SchaafIndex {
  RatFun value;
  Monotonicity verdict = Monotonicity::inconclusive;
};
SchaafIndex schaaf_index(const LienardSystem& sys);

struct IdentityReport {
  int order = 0;
  std::vector<RatFun> residuals;  // coefficient of x^k of g' + f g - rhs
  bool holds = false;
};
IdentityReport isochrone_identity_check(const LienardSystem& sys, const RSeries& h, int N);

// T(c) = pi * sum_m coeff_m c^m; coeff_0 = 2.
struct PeriodTerm {
  int m = 0;
  RatFun coeff_over_pi;
};
std::vector<PeriodTerm> period_series(const PipelineResult& r);
std::vector<PeriodTerm> period_series(const LienardSystem& sys, int N);

// k-th derivative of gtilde at 0.
RatFun gtilde_derivative(const PipelineResult& r, int k);

// f = F', g = exp(-F) * int exp(F).
LienardSystem trivial_isochrone_g(const RSeries& Fseries, int N);
// True iff exp(F) has even part 1, i.e. exp(F(x)) + exp(F(-x)) = 2.
bool is_reflection_isochrone(const RSeries& Fseries, int N);

// Rescales time so that g'(0) = 1: requires g'(0) a positive rational K.
LienardSystem normalize_frequency(const LienardSystem& sys);

}  // namespace isochron
