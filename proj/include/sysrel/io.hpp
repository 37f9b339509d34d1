#pragma once

// Model-document parsing and machine-readable output: CSV and JSON curve
// serialization with fixed formatting, so identical inputs produce
// byte-identical artifacts. NaN renders as an empty CSV cell and JSON null.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sysrel/common.hpp"
#include "sysrel/error_analysis.hpp"
#include "sysrel/model.hpp"
#include "sysrel/orders.hpp"
#include "sysrel/simulate.hpp"
#include "sysrel/system.hpp"

namespace sysrel {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json json_number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

inline Family family_from_name(const std::string& name) {
  for (Family f : {Family::IndExp, Family::MOME, Family::MG1, Family::IndWeibull, Family::MOMW,
                   Family::Crowder, Family::Lee, Family::LB1, Family::FGMW, Family::LB2})
    if (name == family_name(f)) return f;
  throw InvalidParameter("family", "unknown family '" + name + "'");
}

namespace detail {

inline SubsetKey parse_subset_key(const std::string& text) {
  SubsetKey key;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int idx = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      key.indices.push_back(idx);
    } catch (const std::exception&) {
      throw InvalidParameter("rates", "subset key '" + text + "' is not a comma-joined index list");
    }
  }
  return key;
}

inline SubsetRateMap parse_rates(const json& doc, int n) {
  if (!doc.contains("rates") || !doc["rates"].is_object())
    throw InvalidParameter("rates", "expected an object of subset-key rates");
  std::vector<std::pair<SubsetKey, double>> entries;
  for (const auto& [key_text, value] : doc["rates"].items()) {
    if (!value.is_number())
      throw InvalidParameter("rates", "rate for '" + key_text + "' must be a number");
    entries.emplace_back(parse_subset_key(key_text), value.get<double>());
  }
  return SubsetRateMap(n, std::move(entries));
}

inline std::vector<double> parse_array(const json& doc, const std::string& field, int n) {
  if (!doc.contains(field) || !doc[field].is_array())
    throw InvalidParameter(field, "expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& v : doc[field]) {
    if (!v.is_number()) throw InvalidParameter(field, "entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline double parse_scalar(const json& doc, const std::string& field) {
  if (!doc.contains(field) || !doc[field].is_number())
    throw InvalidParameter(field, "expected a number");
  return doc[field].get<double>();
}

}  // namespace detail

/// Parses and validates a model document, e.g.
///   {"family": "MOME", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 0.5}}
inline ValidatedModel parse_model(const json& doc) {
  if (!doc.is_object()) throw InvalidParameter("model", "document must be a JSON object");
  if (!doc.contains("family") || !doc["family"].is_string())
    throw InvalidParameter("family", "missing family name");
  const Family fam = family_from_name(doc["family"].get<std::string>());
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw InvalidParameter("n", "missing integer component count");
  const int n = doc["n"].get<int>();
  if (n < 1) throw InvalidParameter("n", "component count must be >= 1");

  LifetimeModel model;
  model.family = fam;
  switch (fam) {
    case Family::IndExp:
      model.params = IndExpParams{detail::parse_array(doc, "lambdas", n)};
      break;
    case Family::MOME:
      model.params = MomeParams{detail::parse_rates(doc, n)};
      break;
    case Family::MG1:
      model.params = Mg1Params{detail::parse_rates(doc, n)};
      break;
    case Family::IndWeibull:
      model.params = IndWeibullParams{detail::parse_array(doc, "lambdas", n),
                                      detail::parse_array(doc, "alphas", n)};
      break;
    case Family::MOMW:
      model.params = MomwParams{detail::parse_rates(doc, n), detail::parse_array(doc, "alphas", n)};
      break;
    case Family::Crowder:
      model.params = CrowderParams{detail::parse_array(doc, "lambdas", n),
                                   detail::parse_array(doc, "alphas", n),
                                   detail::parse_scalar(doc, "l"),
                                   detail::parse_scalar(doc, "gamma")};
      break;
    case Family::Lee:
      model.params = LeeParams{detail::parse_scalar(doc, "alpha"),
                               detail::parse_array(doc, "scales", n),
                               detail::parse_rates(doc, n)};
      break;
    case Family::LB1:
      model.params = Lb1Params{detail::parse_array(doc, "lambdas", n),
                               detail::parse_array(doc, "alphas", n),
                               detail::parse_scalar(doc, "delta"), detail::parse_scalar(doc, "m")};
      break;
    case Family::FGMW:
      model.params = FgmParams{detail::parse_array(doc, "lambdas", n),
                               detail::parse_array(doc, "alphas", n),
                               detail::parse_scalar(doc, "gamma")};
      break;
    case Family::LB2:
      model.params = Lb2Params{detail::parse_array(doc, "lambdas", n),
                               detail::parse_array(doc, "alphas", n),
                               detail::parse_scalar(doc, "gamma")};
      break;
  }
  return validate(std::move(model));
}

inline ValidatedModel model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("model", "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidParameter("model", std::string("JSON parse failure: ") + e.what());
  }
  return parse_model(doc);
}

inline json model_to_json(const ValidatedModel& vm) {
  json doc;
  doc["family"] = family_name(vm.family());
  doc["n"] = vm.n();
  auto rates_json = [](const SubsetRateMap& rates) {
    json obj = json::object();
    for (const auto& [mask, rate] : rates.entries())
      obj[SubsetKey::from_mask(mask).to_string()] = rate;
    return obj;
  };
  switch (vm.family()) {
    case Family::IndExp:
      doc["lambdas"] = vm.params<IndExpParams>().lambdas;
      break;
    case Family::MOME:
      doc["rates"] = rates_json(vm.params<MomeParams>().rates);
      break;
    case Family::MG1:
      doc["rates"] = rates_json(vm.params<Mg1Params>().rates);
      break;
    case Family::IndWeibull: {
      const auto& p = vm.params<IndWeibullParams>();
      doc["lambdas"] = p.lambdas;
      doc["alphas"] = p.alphas;
      break;
    }
    case Family::MOMW: {
      const auto& p = vm.params<MomwParams>();
      doc["rates"] = rates_json(p.rates);
      doc["alphas"] = p.alphas;
      break;
    }
    case Family::Crowder: {
      const auto& p = vm.params<CrowderParams>();
      doc["lambdas"] = p.lambdas;
      doc["alphas"] = p.alphas;
      doc["l"] = p.l;
      doc["gamma"] = p.gamma;
      break;
    }
    case Family::Lee: {
      const auto& p = vm.params<LeeParams>();
      doc["alpha"] = p.alpha;
      doc["scales"] = p.scales;
      doc["rates"] = rates_json(p.rates);
      break;
    }
    case Family::LB1: {
      const auto& p = vm.params<Lb1Params>();
      doc["lambdas"] = p.lambdas;
      doc["alphas"] = p.alphas;
      doc["delta"] = p.delta;
      doc["m"] = p.m;
      break;
    }
    case Family::FGMW: {
      const auto& p = vm.params<FgmParams>();
      doc["lambdas"] = p.lambdas;
      doc["alphas"] = p.alphas;
      doc["gamma"] = p.gamma;
      break;
    }
    case Family::LB2: {
      const auto& p = vm.params<Lb2Params>();
      doc["lambdas"] = p.lambdas;
      doc["alphas"] = p.alphas;
      doc["gamma"] = p.gamma;
      break;
    }
  }
  return doc;
}

/// A small valid example document per family; these round-trip through
/// parse_model and seed the `families` subcommand.
inline json example_model(Family f) {
  switch (f) {
    case Family::IndExp:
      return {{"family", "IndExp"}, {"n", 2}, {"lambdas", {1.0, 2.0}}};
    case Family::MOME:
      return {{"family", "MOME"}, {"n", 2}, {"rates", {{"1", 1.0}, {"2", 1.0}, {"1,2", 0.5}}}};
    case Family::MG1:
      return {{"family", "MG1"}, {"n", 2}, {"rates", {{"1", 1.0}, {"2", 1.0}, {"1,2", 0.5}}}};
    case Family::IndWeibull:
      return {{"family", "IndWeibull"}, {"n", 2}, {"lambdas", {1.0, 0.5}}, {"alphas", {1.5, 0.8}}};
    case Family::MOMW:
      return {{"family", "MOMW"},
              {"n", 2},
              {"rates", {{"1", 1.0}, {"2", 1.0}, {"1,2", 0.5}}},
              {"alphas", {1.5, 0.8}}};
    case Family::Crowder:
      return {{"family", "Crowder"},
              {"n", 2},
              {"lambdas", {1.0, 0.5}},
              {"alphas", {1.2, 0.9}},
              {"l", 0.7},
              {"gamma", 0.4}};
    case Family::Lee:
      return {{"family", "Lee"},
              {"n", 2},
              {"alpha", 1.5},
              {"scales", {1.0, 2.0}},
              {"rates", {{"1", 1.0}, {"2", 0.5}, {"1,2", 0.4}}}};
    case Family::LB1:
      return {{"family", "LB1"},
              {"n", 2},
              {"lambdas", {1.0, 0.5}},
              {"alphas", {1.2, 0.9}},
              {"delta", 0.6},
              {"m", 2.0}};
    case Family::FGMW:
      return {{"family", "FGMW"},
              {"n", 2},
              {"lambdas", {1.0, 1.0}},
              {"alphas", {1.0, 1.0}},
              {"gamma", 0.5}};
    case Family::LB2:
      return {{"family", "LB2"},
              {"n", 2},
              {"lambdas", {1.0, 0.5}},
              {"alphas", {1.2, 0.9}},
              {"gamma", 0.5}};
  }
  throw Error("unreachable family");
}

/// Parameter schema stubs for every supported family.
inline json family_schemas() {
  json out = json::array();
  auto entry = [&](Family f, json fields) {
    out.push_back({{"family", family_name(f)},
                   {"fields", std::move(fields)},
                   {"example", example_model(f)}});
  };
  const char* rates_desc = "object mapping comma-joined ascending component indices to rates >= 0";
  entry(Family::IndExp, {{"lambdas", "array of n rates >= 0, at least one positive"}});
  entry(Family::MOME, {{"rates", rates_desc}});
  entry(Family::MG1, {{"rates", rates_desc}});
  entry(Family::IndWeibull, {{"lambdas", "array of n rates >= 0, at least one positive"},
                             {"alphas", "array of n shapes > 0"}});
  entry(Family::MOMW, {{"rates", rates_desc}, {"alphas", "array of n shapes > 0"}});
  entry(Family::Crowder, {{"lambdas", "array of n rates > 0"},
                          {"alphas", "array of n shapes > 0"},
                          {"l", "outer power > 0"},
                          {"gamma", "shift >= 0"}});
  entry(Family::Lee, {{"alpha", "common shape > 0"},
                      {"scales", "array of n scales > 0"},
                      {"rates", rates_desc}});
  entry(Family::LB1, {{"lambdas", "array of n rates > 0"},
                      {"alphas", "array of n shapes > 0"},
                      {"delta", "dependence weight >= 0"},
                      {"m", "inner-power denominator >= 1"}});
  entry(Family::FGMW, {{"lambdas", "array of n rates > 0"},
                       {"alphas", "array of n shapes > 0"},
                       {"gamma", "dependence parameter in (-1, 1)"}});
  entry(Family::LB2, {{"lambdas", "array of n rates > 0"},
                      {"alphas", "array of n shapes > 0"},
                      {"gamma", "dependence parameter in (0, 1)"}});
  return out;
}

// ---------------------------------------------------------------------------
// Curve serialization
// ---------------------------------------------------------------------------

inline const char* provenance_name(Provenance p) {
  return p == Provenance::ClosedForm ? "closed" : "numeric";
}

namespace detail {

inline std::string csv_cell(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace detail

inline std::string curve_to_csv(const CurveSet& c) {
  std::string out = "t,sf,fr,rfr,mrl,ai,provenance\n";
  const std::string prov = std::string("sf=") + provenance_name(c.sf_prov) +
                           ";fr=" + provenance_name(c.fr_prov) +
                           ";rfr=" + provenance_name(c.rfr_prov) +
                           ";mrl=" + provenance_name(c.mrl_prov) +
                           ";ai=" + provenance_name(c.ai_prov);
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    out += format_double(c.grid.points[k]);
    out += ',' + detail::csv_cell(c.sf[k]) + ',' + detail::csv_cell(c.fr[k]) + ',' +
           detail::csv_cell(c.rfr[k]) + ',' + detail::csv_cell(c.mrl[k]) + ',' +
           detail::csv_cell(c.ai[k]) + ',' + prov + '\n';
  }
  return out;
}

inline json curve_to_json(const CurveSet& c) {
  json arr = json::array();
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    arr.push_back({{"t", c.grid.points[k]},
                   {"sf", json_number_or_null(c.sf[k])},
                   {"fr", json_number_or_null(c.fr[k])},
                   {"rfr", json_number_or_null(c.rfr[k])},
                   {"mrl", json_number_or_null(c.mrl[k])},
                   {"ai", json_number_or_null(c.ai[k])}});
  }
  json out;
  out["points"] = std::move(arr);
  out["provenance"] = {{"sf", provenance_name(c.sf_prov)},
                       {"fr", provenance_name(c.fr_prov)},
                       {"rfr", provenance_name(c.rfr_prov)},
                       {"mrl", provenance_name(c.mrl_prov)},
                       {"ai", provenance_name(c.ai_prov)}};
  if (c.verification) {
    out["verification"] = {{"max_rel_deviation", c.verification->max_rel_deviation},
                           {"points_compared", c.verification->points_compared}};
  }
  return out;
}

inline std::string error_curve_to_csv(const ErrorCurve& c) {
  std::string out = "t,e_sf,e_fr,e_rfr,e_mrl,e_ai\n";
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    out += format_double(c.grid.points[k]);
    out += ',' + detail::csv_cell(c.e_sf[k]) + ',' + detail::csv_cell(c.e_fr[k]) + ',' +
           detail::csv_cell(c.e_rfr[k]) + ',' + detail::csv_cell(c.e_mrl[k]) + ',' +
           detail::csv_cell(c.e_ai[k]) + '\n';
  }
  return out;
}

inline json error_curve_to_json(const ErrorCurve& c) {
  json arr = json::array();
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    arr.push_back({{"t", c.grid.points[k]},
                   {"e_sf", json_number_or_null(c.e_sf[k])},
                   {"e_fr", json_number_or_null(c.e_fr[k])},
                   {"e_rfr", json_number_or_null(c.e_rfr[k])},
                   {"e_mrl", json_number_or_null(c.e_mrl[k])},
                   {"e_ai", json_number_or_null(c.e_ai[k])}});
  }
  json out;
  out["points"] = std::move(arr);
  out["provenance"] = {{"e_sf", provenance_name(c.sf_prov)},
                       {"e_fr", provenance_name(c.fr_prov)},
                       {"e_rfr", provenance_name(c.rfr_prov)},
                       {"e_mrl", provenance_name(c.mrl_prov)},
                       {"e_ai", provenance_name(c.ai_prov)}};
  out["undefined_points"] = c.undefined_points();
  // Largest time up to which every function is defined: the usable range.
  double usable = c.grid.points.front();
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    if (std::isnan(c.e_sf[k]) || std::isnan(c.e_fr[k]) || std::isnan(c.e_rfr[k]) ||
        std::isnan(c.e_mrl[k]) || std::isnan(c.e_ai[k]))
      break;
    usable = c.grid.points[k];
  }
  out["usable_max_t"] = usable;
  return out;
}

inline json assessment_to_json(const AssessmentReport& report) {
  json funcs = json::object();
  auto name_of = [](SysFunction f) {
    switch (f) {
      case SysFunction::SF: return "sf";
      case SysFunction::FR: return "fr";
      case SysFunction::RFR: return "rfr";
      case SysFunction::MRL: return "mrl";
      case SysFunction::AI: return "ai";
    }
    return "?";
  };
  for (const auto& f : report.functions) {
    funcs[name_of(f.function)] = {{"label", sign_label_name(f.label)},
                                  {"sign_changes", f.sign_changes}};
  }
  json bounds = json::array();
  for (const auto& b : report.bounds)
    bounds.push_back({{"name", b.name}, {"satisfied", b.satisfied}});
  return {{"functions", std::move(funcs)}, {"bounds", std::move(bounds)}};
}

inline json verdict_to_json(const OrderVerdict& v) {
  return {{"relation", relation_name(v.relation)},
          {"direction", direction_name(v.direction)},
          {"witnesses", v.witnesses},
          {"grid_size", v.grid_size}};
}

inline json audit_to_json(const ImplicationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"antecedent", relation_name(v.antecedent)},
                          {"consequent", relation_name(v.consequent)},
                          {"antecedent_direction", direction_name(v.antecedent_direction)},
                          {"consequent_direction", direction_name(v.consequent_direction)},
                          {"witnesses", v.witnesses}});
  }
  return {{"consistent", report.consistent()},
          {"edges_checked", report.edges_checked},
          {"violations", std::move(violations)}};
}

inline json dependence_to_json(const DependenceLabel& label) {
  json out;
  out["label"] = dependence_name(label.label);
  out["flags"] = {{"puod", label.puod}, {"nuod", label.nuod}, {"plod", label.plod},
                  {"nlod", label.nlod}};
  out["counterexample"] =
      label.counterexample ? json(*label.counterexample) : json(nullptr);
  out["sample_points"] = label.sample_count;
  out["box"] = label.box;
  return out;
}

inline std::string empirical_to_csv(const EmpiricalCurve& c) {
  std::string out = "t,estimate,ci_low,ci_high\n";
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    out += format_double(c.grid.points[k]);
    out += ',' + format_double(c.estimate[k]) + ',' + format_double(c.ci_low[k]) + ',' +
           format_double(c.ci_high[k]) + '\n';
  }
  return out;
}

inline json coverage_to_json(const CoverageReport& rep) {
  return {{"points", rep.points},
          {"inside", rep.inside},
          {"fraction", rep.fraction},
          {"level", rep.level},
          {"pass", rep.pass}};
}

/// One row per replicate, one column per component.
inline std::string samples_to_csv(const SampleMatrix& samples) {
  std::string header;
  for (int i = 1; i <= samples.n; ++i) {
    if (i > 1) header += ',';
    header += "t" + std::to_string(i);
  }
  header += '\n';
  std::string out = header;
  for (std::size_t r = 0; r < samples.rows; ++r) {
    for (int i = 1; i <= samples.n; ++i) {
      if (i > 1) out += ',';
      out += format_double(samples.at(r, i));
    }
    out += '\n';
  }
  return out;
}

}  // namespace sysrel
