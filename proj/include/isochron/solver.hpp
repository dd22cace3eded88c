#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isochron/multipoly.hpp"
#include "isochron/pipeline.hpp"
#include "isochron/ratfun.hpp"
#include "isochron/roots.hpp"
#include "isochron/upoly.hpp"

namespace isochron {

struct EliminationPlan {
  // Eliminated first to last; the last variable is solved univariately.
  std::vector<std::string> variable_order;
  // Parameters treated as free field elements (family mode only).
  std::vector<std::string> keep;
  // Optional weights for weighted-homogeneous systems; enables chart solving.
  std::map<std::string, int> weights;
  // When positive, only the first this-many conditions drive the elimination;
  // candidates are still verified against all of them.
  int elimination_limit = 0;
};

struct Coordinate {
  std::string var;
  std::optional<Rational> exact;
  UPoly defining;  // squarefree, has this coordinate as a root
  IsolatingInterval interval;
  double approx = 0;
  std::string str() const;
};

struct SolutionPoint {
  std::vector<Coordinate> coords;  // alphabetical by variable
  std::string chart;               // fixed coordinates of the chart, empty if none
  bool verified = false;
  int conditions_checked = 0;

  bool is_rational() const;
  std::map<std::string, Rational> rational_values() const;  // requires is_rational()
  const Coordinate& at(const std::string& var) const;
};

struct EliminantInfo {
  std::string var;
  std::string chart;
  UPoly poly;
  int degree = 0;
  // -1 when the eliminant is above kRootReportDegree and was not isolated
  int distinct_real_roots = 0;
  int real_roots_with_multiplicity = 0;
  int complex_pairs = 0;
  std::vector<IsolatingInterval> roots;
};

// Root counts are reported per eliminant only up to this degree; the solve
// itself isolates the gcd of the final eliminants.
inline constexpr int kRootReportDegree = 48;

struct SolveResult {
  std::vector<SolutionPoint> points;  // canonical order
  std::vector<EliminantInfo> eliminants;
  std::vector<std::string> log;  // discarded candidates and chart notes
};

// Triangular elimination by resultants, real-root isolation of the final
// eliminant, lifting by gcds over Q(alpha), exact verification against every
// condition. With plan.weights set, solves on weighted-homogeneous charts.
SolveResult solve_points(const std::vector<MultiPoly>& conds, const EliminationPlan& plan);
SolveResult solve_points(const ConditionSet& conds, const EliminationPlan& plan);

struct SolutionFamily {
  std::map<std::string, RatFun> assignments;
  std::string label;
  std::vector<MultiPoly> nonvanishing;  // branch validity conditions
};

struct FamilyVerification {
  std::string label;
  int order = 0;
  bool conditions_vanish = false;   // input condition polynomials vanish identically
  bool even_part_vanishes = false;  // rerun pipeline: even h coefficients identically zero
  bool verified = false;
  std::vector<std::pair<int, RatFun>> nonzero_even;
  std::vector<std::pair<int, RatFun>> odd;  // nonzero odd coefficients of h
  std::optional<int> first_nonzero;         // lowest k with [X^k]h != 0
  PipelineResult pipeline;
};

FamilyVerification verify_family(const LienardSystem& sys, const std::vector<MultiPoly>& conds,
                                 const SolutionFamily& family, int N);

// Solves two conditions for `solved` (a4, a6 by default) as rational functions of
// the remaining parameters: the generic branch plus the branch where every free
// parameter vanishes.
std::vector<SolutionFamily> kukles_branch_solve(const std::vector<MultiPoly>& conds,
                                                const std::vector<std::string>& solved = {"a4", "a6"});

}  // namespace isochron
