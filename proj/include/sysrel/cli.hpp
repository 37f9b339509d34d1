#pragma once

// Command dispatch behind the CLI front end. Kept in the library so the
// whole pipeline (config -> artifacts -> exit status) is unit-testable.
//
// Exit statuses: 0 success; 2 validation failure; 3 numerical degeneracy on
// more than 10% of the grid; 4 unsupported-family request.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sysrel/common.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/io.hpp"
#include "sysrel/model.hpp"
#include "sysrel/orders.hpp"
#include "sysrel/simulate.hpp"
#include "sysrel/system.hpp"

namespace sysrel {

struct GridSpec {
  double start = 0.01;
  double stop = 10.0;
  std::size_t count = 200;
  bool log_spacing = true;

  EvalGrid build() const {
    if (!(start > 0.0)) throw InvalidParameter("grid", "start must be > 0");
    if (!(stop > start)) throw InvalidParameter("grid", "stop must exceed start");
    if (count < 2) throw InvalidParameter("grid", "count must be >= 2");
    return log_spacing ? EvalGrid::log_spaced(start, stop, count)
                       : EvalGrid::linear(start, stop, count);
  }
};

struct RunConfig {
  std::string command;  // eval | error | order | depend | simulate | families
  std::string model_path;
  GridSpec grid;
  Structure structure = Structure::Series;
  Assumption assumption = Assumption::Dependent;
  Baseline baseline = Baseline::PaperLiteral;
  std::string format = "csv";  // csv | json
  std::string out_path;        // empty: write to the provided stream
  std::uint64_t seed = 1;
  std::size_t n_samples = 100000;
  double level = 0.99;
  unsigned threads = 1;
  bool verify = false;
  // order command
  Assumption order_a = Assumption::Dependent;
  Assumption order_b = Assumption::Independent;
  std::string relations = "st,fr,rfr,mrl,lr,af,ai";
  // depend command
  std::size_t depend_points = 200;
  // families command
  std::string example_family;
  // simulate command
  std::string dump_samples_path;
};

namespace detail {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_degenerate = 3;
inline constexpr int exit_unsupported = 4;

inline void emit(const std::string& text, const std::string& out_path, std::ostream& fallback) {
  if (out_path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InvalidParameter("out", "cannot open '" + out_path + "' for writing");
  f << text;
}

inline void emit_sidecar(const json& doc, const std::string& base_path, const char* suffix,
                         std::ostream& diag) {
  if (base_path.empty()) {
    diag << doc.dump() << '\n';
    return;
  }
  std::ofstream f(base_path + suffix, std::ios::binary);
  if (f) f << doc.dump(2) << '\n';
}

inline json error_to_json(const char* type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

inline int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const ValidatedModel model = model_from_file(cfg.model_path);
  const SystemSpec spec = cfg.assumption == Assumption::Dependent
                              ? SystemSpec::dependent(model, cfg.structure)
                              : SystemSpec::independent(model, cfg.structure, cfg.baseline);
  const EvalGrid grid = cfg.grid.build();
  const CurveSet curves = evaluate_curves(spec, grid, cfg.verify, cfg.threads);
  if (cfg.format == "json") {
    emit(curve_to_json(curves).dump(2) + "\n", cfg.out_path, out);
  } else {
    emit(curve_to_csv(curves), cfg.out_path, out);
    if (curves.verification)
      diag << json({{"verification",
                     {{"max_rel_deviation", curves.verification->max_rel_deviation},
                      {"points_compared", curves.verification->points_compared}}}})
                  .dump()
           << '\n';
  }
  const double frac =
      static_cast<double>(curves.undefined_points()) / static_cast<double>(grid.size());
  if (frac > 0.10) {
    diag << error_to_json("DegenerateError",
                          "numerical degeneracy on " + format_double(100.0 * frac) +
                              "% of the grid")
                .dump()
         << '\n';
    return exit_degenerate;
  }
  return exit_ok;
}

inline int run_error(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const ValidatedModel model = model_from_file(cfg.model_path);
  const EvalGrid grid = cfg.grid.build();
  const ErrorCurve curve =
      relative_error_curve(model, cfg.structure, cfg.baseline, grid, cfg.threads);
  const AssessmentReport report = assess_signs(curve);
  if (cfg.format == "json") {
    json doc;
    doc["curve"] = error_curve_to_json(curve);
    doc["assessment"] = assessment_to_json(report);
    emit(doc.dump(2) + "\n", cfg.out_path, out);
  } else {
    emit(error_curve_to_csv(curve), cfg.out_path, out);
    emit_sidecar(assessment_to_json(report), cfg.out_path, ".assessment.json", diag);
  }
  const double frac =
      static_cast<double>(curve.undefined_points()) / static_cast<double>(grid.size());
  if (frac > 0.10) {
    diag << error_to_json("DegenerateError",
                          "numerical degeneracy on " + format_double(100.0 * frac) +
                              "% of the grid")
                .dump()
         << '\n';
    return exit_degenerate;
  }
  return exit_ok;
}

inline int run_order(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const ValidatedModel model = model_from_file(cfg.model_path);
  const EvalGrid grid = cfg.grid.build();
  auto make_spec = [&](Assumption a) {
    return a == Assumption::Dependent
               ? SystemSpec::dependent(model, cfg.structure)
               : SystemSpec::independent(model, cfg.structure, cfg.baseline);
  };
  const SystemSpec spec_a = make_spec(cfg.order_a);
  const SystemSpec spec_b = make_spec(cfg.order_b);

  std::vector<OrderVerdict> verdicts;
  std::stringstream ss(cfg.relations);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto rel = relation_from_name(token);
    if (!rel) throw InvalidParameter("relations", "unknown relation '" + token + "'");
    verdicts.push_back(compare_order(spec_a, spec_b, *rel, grid));
  }
  json doc;
  doc["verdicts"] = json::array();
  for (const auto& v : verdicts) doc["verdicts"].push_back(verdict_to_json(v));
  doc["audit"] = audit_to_json(audit_implications(verdicts));
  emit(doc.dump(2) + "\n", cfg.out_path, out);
  return exit_ok;
}

inline int run_depend(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const ValidatedModel model = model_from_file(cfg.model_path);
  std::vector<double> box;
  const auto points = orthant_sample_box(model, cfg.depend_points, cfg.seed, &box);
  DependenceLabel label = classify_orthant_dependence(model, points);
  label.box = box;
  emit(dependence_to_json(label).dump(2) + "\n", cfg.out_path, out);
  return exit_ok;
}

inline int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const ValidatedModel model = model_from_file(cfg.model_path);
  const EvalGrid grid = cfg.grid.build();
  const SampleMatrix samples = sample_model(model, cfg.n_samples, cfg.seed, cfg.threads);
  const EmpiricalCurve emp = empirical_system_sf(samples, cfg.structure, grid, cfg.level);
  const SystemSpec spec = SystemSpec::dependent(model, cfg.structure);
  std::vector<double> analytic(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    analytic[k] = system_sf(spec, grid.points[k]);
  const CoverageReport rep = coverage_against(emp, analytic);

  if (!cfg.dump_samples_path.empty()) {
    std::ofstream f(cfg.dump_samples_path, std::ios::binary);
    if (!f)
      throw InvalidParameter("dump-samples",
                             "cannot open '" + cfg.dump_samples_path + "' for writing");
    f << samples_to_csv(samples);
  }
  if (cfg.format == "json") {
    json doc;
    json arr = json::array();
    for (std::size_t k = 0; k < grid.size(); ++k)
      arr.push_back({{"t", grid.points[k]},
                     {"estimate", emp.estimate[k]},
                     {"ci_low", emp.ci_low[k]},
                     {"ci_high", emp.ci_high[k]}});
    doc["curve"] = std::move(arr);
    doc["coverage"] = coverage_to_json(rep);
    emit(doc.dump(2) + "\n", cfg.out_path, out);
  } else {
    emit(empirical_to_csv(emp), cfg.out_path, out);
    emit_sidecar(coverage_to_json(rep), cfg.out_path, ".coverage.json", diag);
  }
  return exit_ok;
}

inline int run_families(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (!cfg.example_family.empty()) {
    const Family f = family_from_name(cfg.example_family);
    emit(example_model(f).dump(2) + "\n", cfg.out_path, out);
    return exit_ok;
  }
  emit(family_schemas().dump(2) + "\n", cfg.out_path, out);
  return exit_ok;
}

}  // namespace detail

/// Executes one command; artifacts go to `out` (or the configured --out
/// path) and structured diagnostics to `diag`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  try {
    if (cfg.command == "eval") return detail::run_eval(cfg, out, diag);
    if (cfg.command == "error") return detail::run_error(cfg, out, diag);
    if (cfg.command == "order") return detail::run_order(cfg, out, diag);
    if (cfg.command == "depend") return detail::run_depend(cfg, out, diag);
    if (cfg.command == "simulate") return detail::run_simulate(cfg, out, diag);
    if (cfg.command == "families") return detail::run_families(cfg, out, diag);
    diag << detail::error_to_json("InvalidParameter", "unknown command '" + cfg.command + "'")
                .dump()
         << '\n';
    return detail::exit_validation;
  } catch (const UnsupportedError& e) {
    diag << detail::error_to_json("UnsupportedError", e.what()).dump() << '\n';
    return detail::exit_unsupported;
  } catch (const SizeLimitError& e) {
    diag << detail::error_to_json("SizeLimitError", e.what()).dump() << '\n';
    return detail::exit_validation;
  } catch (const InvalidParameter& e) {
    diag << detail::error_to_json("InvalidParameter", e.what()).dump() << '\n';
    return detail::exit_validation;
  } catch (const DomainError& e) {
    diag << detail::error_to_json("DomainError", e.what()).dump() << '\n';
    return detail::exit_validation;
  } catch (const Error& e) {
    diag << detail::error_to_json("Error", e.what()).dump() << '\n';
    return detail::exit_validation;
  }
}

}  // namespace sysrel
