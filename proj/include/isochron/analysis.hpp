#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "isochron/families.hpp"
#include "isochron/numeric.hpp"
#include "isochron/solver.hpp"

namespace isochron {

enum class Stage { conditions, solve, verify_numeric };
Stage parse_stage(const std::string& s);
const char* to_string(Stage s);

struct AnalysisOptions {
  std::set<Stage> stages = {Stage::conditions};
  IntegratorConfig integrator;
  // Point solving; empty means the family default (or alphabetical).
  std::vector<std::string> variable_order;
  std::map<std::string, int> weights;
  int elimination_limit = -1;  // -1: number of variables + 1
  // Numeric isochrony: max |T - 2 pi / sqrt(K)| and ODE/quadrature agreement.
  double period_tol = 1e-8;
  double agreement_tol = 1e-7;
};

// A quantity the engine recomputes next to the value printed in the source
// literature. Both values are kept verbatim.
struct Discrepancy {
  std::string quantity;
  std::string reference;  // where the printed value appears
  std::string printed;
  std::string engine;
  bool match = false;
  std::string note;
  bool operator==(const Discrepancy&) const = default;
};

struct ConditionRecord {
  int k = 0;
  std::string raw, normalized;
  bool operator==(const ConditionRecord&) const = default;
};

struct CoordinateRecord {
  std::string var;
  std::string exact;  // empty when irrational
  std::string defining;
  std::string lo, hi;
  double approx = 0;
  bool operator==(const CoordinateRecord&) const = default;
};

struct PointRecord {
  std::vector<CoordinateRecord> coords;
  std::string chart;
  bool verified = false;
  int conditions_checked = 0;
  bool operator==(const PointRecord&) const = default;
};

struct EliminantRecord {
  std::string var, chart, poly;
  int degree = 0, distinct_real_roots = 0, complex_pairs = 0;
  bool operator==(const EliminantRecord&) const = default;
};

struct FamilyRecord {
  std::string label;
  std::map<std::string, std::string> assignments;
  std::vector<std::string> nonvanishing;
  bool conditions_vanish = false, even_part_vanishes = false, verified = false;
  int first_nonzero = -1;  // -1: h vanishes to the working order
  std::vector<std::pair<int, std::string>> odd;
  bool operator==(const FamilyRecord&) const = default;
};

struct SolverRecord {
  std::vector<std::string> variable_order;
  std::map<std::string, int> weights;
  int conditions_used = 0;
  std::vector<PointRecord> points;
  std::vector<EliminantRecord> eliminants;
  std::vector<FamilyRecord> families;
  std::vector<std::string> log;
  bool operator==(const SolverRecord&) const = default;
};

struct ScanRow {
  double amplitude = 0, period_ode = 0, period_quad = 0, energy_c = 0;
  bool operator==(const ScanRow&) const = default;
};

struct NumericRecord {
  std::vector<ScanRow> rows;
  std::string h_method;
  double frequency_scale = 1;
  double isochronous_period = 0;  // 2 pi / sqrt(K)
  double max_period_deviation = 0;
  double max_ode_quad_difference = 0;
  std::string trend;
  std::optional<double> closed_form_h_max_error;
  std::string reference_law;
  std::optional<double> reference_law_max_error;
  bool operator==(const NumericRecord&) const = default;
};

struct Verdict {
  std::string name;
  bool confirmed = false;
  std::string detail;
  bool operator==(const Verdict&) const = default;
};

struct AnalysisReport {
  // System echo.
  std::string family, variant, label;
  std::map<std::string, std::string> parameters;  // "?" for symbolic
  std::map<std::string, std::string> functions;
  int order = 0;
  std::string f, g;
  std::optional<double> validity_lower, validity_upper;  // absent = unbounded
  std::string frequency_scale;
  std::vector<std::string> stages;

  // Pipeline.
  std::vector<std::string> h;  // [X^k] h, k = 0..order
  bool identity_checked = false;
  std::string schaaf_index, schaaf_verdict;
  std::optional<std::string> closed_form_h;
  std::optional<bool> closed_form_h_matches;

  std::vector<ConditionRecord> conditions, closed_form_relations;
  std::optional<SolverRecord> solver;
  std::optional<NumericRecord> numeric;
  std::vector<Discrepancy> discrepancies;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;

  bool operator==(const AnalysisReport&) const = default;

  // 0: every verdict confirmed, 2: some mathematical negative.
  int exit_code() const;
  const Discrepancy* find_discrepancy(const std::string& quantity) const;
};

AnalysisReport run_analysis(const FamilySpec& spec, const AnalysisOptions& opts = {});

// The numeric model of a system: closed forms in the original time scale when
// present, otherwise the truncated series.
NumericSystem numeric_model(const LienardSystem& sys);

enum class ReportFormat { json, csv, text };
ReportFormat parse_format(const std::string& s);
std::string export_report(const AnalysisReport& report, ReportFormat format);
AnalysisReport report_from_json(const std::string& text);

// Configuration file: a JSON object with keys family, example, variant,
// parameters (name -> value string or null for symbolic), functions, order,
// amplitudes, stages, integrator {rel_tol, abs_tol, max_step,
// section_refinement_tol, max_time, energy_tol, check_energy},
// variable_order, weights, elimination_limit, period_tol, agreement_tol.
struct RunConfig {
  FamilySpec spec;
  AnalysisOptions options;
  bool stages_given = false;
};
RunConfig parse_config(const std::string& json_text);

// Least-squares estimate of [X^k] h from numeric samples of h at the given X.
double fit_h_coefficient(const NumericSystem& ns, int k, const std::vector<double>& Xs);

// Taylor coefficients of gtilde(u) for a generic Urabe function with symbolic
// coefficients h1..hn ([X^k] h = hk); coefficient m is gtilde^(m)(0)/m!.
RSeries generic_gtilde(int n);

}  // namespace isochron
