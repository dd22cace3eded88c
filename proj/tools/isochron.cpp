// isochron: batch front end for the isochronicity engine.
//
// Exit codes: 0 every requested verdict confirmed, 2 a mathematical negative
// (e.g. not isochronous), 1 operational error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isochron/analysis.hpp"
#include "isochron/errors.hpp"

using namespace isochron;

namespace {

struct Flags {
  std::string config, example, family, variant, format, output;
  std::vector<std::string> params, functions, stages, var_order, weights;
  std::optional<int> order, elimination_limit;
  std::vector<double> amplitudes;
  std::optional<double> rel_tol, abs_tol, max_step, energy_tol, max_time, section_tol, period_tol;
  bool no_energy_check = false;
};

void add_common(CLI::App* sub, Flags& fl, bool with_stages) {
  sub->add_option("--config", fl.config, "JSON configuration file");
  sub->add_option("--example", fl.example, "start from a catalog example (see 'catalog')");
  sub->add_option("--family", fl.family, "family name");
  sub->add_option("--variant", fl.variant, "cubic_c variant I, II, III or IV");
  sub->add_option("-p,--param", fl.params, "parameter NAME=VALUE, or NAME for symbolic")->take_all();
  sub->add_option("--fn", fl.functions, "function NAME=EXPR (f, g, psi, alpha, beta, xi, F)")->take_all();
  sub->add_option("-N,--order", fl.order, "truncation order (>= 8)");
  sub->add_option("--amplitudes", fl.amplitudes, "scan amplitudes a,b,c")->delimiter(',');
  sub->add_option("--format", fl.format, "json, csv or text");
  sub->add_option("-o,--output", fl.output, "write the report to a file");
  sub->add_option("--rel-tol", fl.rel_tol, "integrator relative tolerance");
  sub->add_option("--abs-tol", fl.abs_tol, "integrator absolute tolerance");
  sub->add_option("--max-step", fl.max_step, "integrator maximum step");
  sub->add_option("--section-tol", fl.section_tol, "section crossing tolerance");
  sub->add_option("--max-time", fl.max_time, "integration time limit per orbit");
  sub->add_option("--energy-tol", fl.energy_tol, "allowed relative energy drift");
  sub->add_flag("--no-energy-check", fl.no_energy_check, "skip the energy drift check");
  sub->add_option("--period-tol", fl.period_tol, "isochrony tolerance on |T - 2pi/sqrt(K)|");
  sub->add_option("--var-order", fl.var_order, "elimination order a,b,c")->delimiter(',');
  sub->add_option("--weights", fl.weights, "weights NAME=W for weighted-homogeneous solving")->delimiter(',');
  sub->add_option("--elimination-limit", fl.elimination_limit, "conditions driving elimination");
  if (with_stages)
    sub->add_option("--stages", fl.stages, "conditions, solve, verify_numeric")->delimiter(',');
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig build_config(const Flags& fl) {
  RunConfig c;
  if (!fl.config.empty()) c = parse_config(read_file(fl.config));
  if (!fl.example.empty()) {
    FamilySpec ex = catalog_example(fl.example).spec;
    ex.order = c.spec.order;
    ex.amplitudes = c.spec.amplitudes;
    c.spec = ex;
  }
  if (!fl.family.empty()) c.spec.name = fl.family;
  if (!fl.variant.empty()) c.spec.variant = fl.variant;
  for (const auto& p : fl.params) c.spec.set_parameter(p);
  for (const auto& f : fl.functions) {
    auto eq = f.find('=');
    if (eq == std::string::npos) throw DomainError("--fn expects NAME=EXPR, got " + f);
    c.spec.functions[f.substr(0, eq)] = f.substr(eq + 1);
  }
  if (fl.order) c.spec.order = *fl.order;
  if (!fl.amplitudes.empty()) c.spec.amplitudes = fl.amplitudes;
  auto& ic = c.options.integrator;
  if (fl.rel_tol) ic.rel_tol = *fl.rel_tol;
  if (fl.abs_tol) ic.abs_tol = *fl.abs_tol;
  if (fl.max_step) ic.max_step = *fl.max_step;
  if (fl.section_tol) ic.section_refinement_tol = *fl.section_tol;
  if (fl.max_time) ic.max_time = *fl.max_time;
  if (fl.energy_tol) ic.energy_tol = *fl.energy_tol;
  if (fl.no_energy_check) ic.check_energy = false;
  if (fl.period_tol) c.options.period_tol = *fl.period_tol;
  if (!fl.var_order.empty()) c.options.variable_order = fl.var_order;
  for (const auto& w : fl.weights) {
    auto eq = w.find('=');
    if (eq == std::string::npos) throw DomainError("--weights expects NAME=W, got " + w);
    c.options.weights[w.substr(0, eq)] = std::stoi(w.substr(eq + 1));
  }
  if (fl.elimination_limit) c.options.elimination_limit = *fl.elimination_limit;
  if (!fl.stages.empty()) {
    c.options.stages.clear();
    for (const auto& s : fl.stages) c.options.stages.insert(parse_stage(s));
    c.stages_given = true;
  }
  if (c.spec.name.empty()) throw DomainError("no family given (use --family, --example or --config)");
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

std::string catalog_text(const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["families"] = nlohmann::ordered_json::array();
    for (const auto& f : family_catalog())
      j["families"].push_back(
          {{"name", f.name}, {"parameters", f.parameters}, {"functions", f.functions}, {"description", f.description}});
    j["examples"] = nlohmann::ordered_json::array();
    for (const auto& e : catalog_examples()) j["examples"].push_back({{"id", e.id}, {"spec", e.spec.label()}, {"description", e.description}});
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "families:\n";
  for (const auto& f : family_catalog()) {
    o << "  " << f.name;
    for (const auto& p : f.parameters) o << " " << p;
    for (const auto& fn : f.functions) o << " [" << fn << "]";
    o << "\n      " << f.description << "\n";
  }
  o << "examples (--example ID):\n";
  for (const auto& e : catalog_examples()) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-18s %s\n", e.id.c_str(), e.description.c_str());
    o << buf;
  }
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isochron: isochronicity and period analysis of x'' + f(x) x'^2 + g(x) = 0"};
  app.require_subcommand(1);
  Flags fl;
  auto* analyze = app.add_subcommand("analyze", "full analysis (stages chosen from the parameters, or --stages)");
  auto* conditions = app.add_subcommand("conditions", "isochronicity conditions and Schaaf index");
  auto* solve = app.add_subcommand("solve", "conditions, then solve for the isochronous parameters");
  auto* scan = app.add_subcommand("scan", "numeric period scan (CSV by default)");
  auto* catalog = app.add_subcommand("catalog", "list families and worked examples");
  add_common(analyze, fl, true);
  add_common(conditions, fl, false);
  add_common(solve, fl, false);
  add_common(scan, fl, false);
  catalog->add_option("--format", fl.format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (catalog->parsed()) {
      std::cout << catalog_text(fl.format.empty() ? "text" : fl.format);
      return 0;
    }
    RunConfig c = build_config(fl);
    std::string format = fl.format.empty() ? "text" : fl.format;
    if (conditions->parsed()) {
      c.options.stages = {Stage::conditions};
    } else if (solve->parsed()) {
      c.options.stages = {Stage::conditions, Stage::solve};
    } else if (scan->parsed()) {
      c.options.stages = {Stage::verify_numeric};
      if (fl.format.empty()) format = "csv";
    } else if (!c.stages_given) {
      LienardSystem sys = instantiate_family(c.spec);
      c.options.stages = {Stage::conditions};
      c.options.stages.insert(sys.is_parametric() ? Stage::solve : Stage::verify_numeric);
    }
    AnalysisReport rep = run_analysis(c.spec, c.options);
    emit(export_report(rep, parse_format(format)), fl.output);
    return rep.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "isochron: error: " << e.what() << "\n";
    return 1;
  }
}
