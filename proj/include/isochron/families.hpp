#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochron/expr.hpp"
#include "isochron/numeric.hpp"
#include "isochron/pipeline.hpp"
#include "isochron/ratfun.hpp"

namespace isochron {

// A built-in parameterized family, or a custom (f, g) pair.
//
// Family names and what they read:
//   loud                D, F; optional function psi (time rescaling, psi(0) = 1)
//   kukles_k0           a1, a3, a4, a6
//   cubic_c             a1, a3, a4, a6, b; variant I..IV fills the printed solution
//   eq_general          functions alpha, beta, xi
//   oscillator          lambda, alpha (alpha rational, nonzero)
//   custom              functions f, g
//   potential_isochrone function F with F(0) = 0: f = F', g = e^{-F} int e^F
//   reflection          f = 1/(1+x), g = x/(1+x)^2
//   schaaf_isochrone    f = 0, g = 1 - (1+2x)^{-1/2}
//
// A parameter value is a rational function of the symbolic parameters, or
// absent (nullopt) for a symbolic parameter.
struct FamilySpec {
  std::string name;
  std::map<std::string, std::optional<RatFun>> parameters;
  std::map<std::string, std::string> functions;
  std::string variant;
  int order = kDefaultOrder;
  std::vector<double> amplitudes = {0.05, 0.1, 0.15, 0.2, 0.225, 0.25};

  // Parses "D=0", "F=1/4", "a4=-a6/3", "D" or "D=?" (symbolic).
  void set_parameter(const std::string& assignment);
  std::string label() const;
};

struct FamilyInfo {
  std::string name;
  std::vector<std::string> parameters;
  std::vector<std::string> functions;
  std::string description;
};
const std::vector<FamilyInfo>& family_catalog();

// Named worked examples, each a plain FamilySpec.
struct CatalogExample {
  std::string id;
  std::string description;
  FamilySpec spec;
};
const std::vector<CatalogExample>& catalog_examples();
const CatalogExample& catalog_example(const std::string& id);

// Validates the spec and builds the normalized system at spec.order.
LienardSystem instantiate_family(const FamilySpec& spec);

// x' = -alpha(x) y, y' = beta(x) + xi(x) y^2  ->  f = (xi - alpha')/alpha, g = alpha beta,
// rescaled in time when (alpha beta)'(0) != 1.
LienardSystem reduce_Eq(const Expr& alpha, const Expr& beta, const Expr& xi, int order);

// Known closed-form Urabe function for a family instance, if any.
struct ClosedFormUrabe {
  std::string text;
  RSeries series;  // in X, to the requested order
  std::function<double(double)> eval;
};
std::optional<ClosedFormUrabe> closed_form_urabe(const FamilySpec& spec, int order);

}  // namespace isochron
