#pragma once

// Fixed representative models per family plus the closed-form-vs-numeric
// comparison machinery shared by the unit and acceptance suites.

#include <cmath>
#include <string>
#include <vector>

#include "sysrel/error_analysis.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/model.hpp"
#include "sysrel/system.hpp"
#include "support/test_models.hpp"

namespace fixtures {

using namespace sysrel;

/// One representative model per family, n = 3, with rates sized so the
/// survival stays well inside double range across [0.01, 10].
inline std::vector<ValidatedModel> representative_models() {
  using testmodels::key;
  const SubsetRateMap shock_rates(3, {{key({1}), 0.4},
                                      {key({2}), 0.6},
                                      {key({3}), 0.8},
                                      {key({1, 2}), 0.10},
                                      {key({1, 3}), 0.08},
                                      {key({2, 3}), 0.12},
                                      {key({1, 2, 3}), 0.05}});
  const SubsetRateMap mg1_rates(3, {{key({1}), 0.3},
                                    {key({2}), 0.35},
                                    {key({3}), 0.25},
                                    {key({1, 2}), 0.02},
                                    {key({1, 3}), 0.015},
                                    {key({2, 3}), 0.025},
                                    {key({1, 2, 3}), 0.01}});
  return {
      validate({Family::IndExp, IndExpParams{{0.4, 0.7, 1.1}}}),
      validate({Family::MOME, MomeParams{shock_rates}}),
      validate({Family::MG1, Mg1Params{mg1_rates}}),
      validate({Family::IndWeibull, IndWeibullParams{{0.5, 0.8, 0.3}, {1.5, 0.7, 2.2}}}),
      validate({Family::MOMW, MomwParams{shock_rates, {1.3, 0.8, 1.7}}}),
      validate({Family::Crowder, CrowderParams{{0.6, 0.9, 0.4}, {1.2, 0.8, 1.6}, 0.7, 0.4}}),
      validate({Family::Lee, LeeParams{1.4, {1.0, 0.6, 1.5}, shock_rates}}),
      validate({Family::LB1, Lb1Params{{0.6, 0.9, 0.4}, {1.2, 0.8, 1.6}, 0.6, 2.0}}),
      validate({Family::FGMW, FgmParams{{0.5, 0.8, 0.3}, {1.5, 0.7, 2.2}, 0.6}}),
      validate({Family::LB2, Lb2Params{{0.4, 0.3, 0.5}, {1.1, 0.8, 1.4}, 0.5}}),
  };
}

/// Bivariate variants with moderate shapes; used where the parallel-system
/// hazard at the left grid edge must stay clear of the double-precision
/// noise floor.
inline std::vector<ValidatedModel> representative_models_n2() {
  using testmodels::key;
  const SubsetRateMap shock_rates(
      2, {{key({1}), 0.6}, {key({2}), 0.9}, {key({1, 2}), 0.3}});
  return {
      validate({Family::IndExp, IndExpParams{{0.6, 1.1}}}),
      validate({Family::MOME, MomeParams{shock_rates}}),
      validate({Family::MG1, Mg1Params{shock_rates}}),
      validate({Family::IndWeibull, IndWeibullParams{{0.7, 0.9}, {0.8, 1.4}}}),
      validate({Family::MOMW, MomwParams{shock_rates, {0.8, 1.4}}}),
      validate({Family::Crowder, CrowderParams{{0.7, 0.9}, {0.9, 1.3}, 0.7, 0.4}}),
      validate({Family::Lee, LeeParams{1.2, {1.0, 0.7}, shock_rates}}),
      validate({Family::LB1, Lb1Params{{0.7, 0.9}, {0.9, 1.3}, 0.6, 2.0}}),
      validate({Family::FGMW, FgmParams{{0.7, 0.9}, {0.8, 1.4}, 0.6}}),
      validate({Family::LB2, Lb2Params{{0.6, 0.8}, {0.9, 1.3}, 0.5}}),
  };
}

/// Relative deviation with an absolute guard for the both-tiny case.
inline double rel_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-300) return 0.0;
  return std::abs(a - b) / scale;
}

/// Deviation metric for error curves: relative above unit scale, absolute
/// below (closed-form zeros must compare cleanly against numeric noise).
inline double error_deviation(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

struct ConsistencyResult {
  double max_deviation = 0.0;
  std::size_t compared = 0;
  std::size_t unavailable = 0;            // total abstentions among registered forms
  std::size_t max_unavailable_per_fn = 0; // worst single function
  std::string worst_where;
};

/// Compare every registered closed form for this spec against the numeric
/// engine over the grid. Points where the closed form withholds a value
/// (the MOMW hazard kink) are counted, not compared.
inline ConsistencyResult closed_vs_numeric(const SystemSpec& spec, const EvalGrid& grid) {
  ConsistencyResult res;
  const SysFunction functions[] = {SysFunction::SF, SysFunction::FR, SysFunction::RFR,
                                   SysFunction::AI};
  for (SysFunction which : functions) {
    if (spec.structure == Structure::Parallel && which != SysFunction::SF) continue;
    if (!closed_form_value(spec, which, grid.points[1]).has_value()) continue;
    std::size_t fn_unavailable = 0;
    for (double t : grid.points) {
      const auto closed = closed_form_value(spec, which, t);
      if (!closed) {
        ++fn_unavailable;
        continue;
      }
      const double numeric = numeric_system_function(spec, which, t);
      const double dev = rel_deviation(*closed, numeric);
      ++res.compared;
      if (dev > res.max_deviation) {
        res.max_deviation = dev;
        res.worst_where = std::string(family_name(spec.model.family())) + "/" +
                          structure_name(spec.structure) + " fn=" +
                          std::to_string(static_cast<int>(which)) + " t=" + std::to_string(t);
      }
    }
    res.unavailable += fn_unavailable;
    res.max_unavailable_per_fn = std::max(res.max_unavailable_per_fn, fn_unavailable);
  }
  return res;
}

/// Compare every registered closed-form error against the numeric error
/// path over the grid.
inline ConsistencyResult closed_vs_numeric_error(const ValidatedModel& vm, Structure structure,
                                                 const EvalGrid& grid) {
  ConsistencyResult res;
  const SysFunction functions[] = {SysFunction::SF, SysFunction::FR, SysFunction::RFR,
                                   SysFunction::AI};
  const SystemSpec dep = SystemSpec::dependent(vm, structure);
  const SystemSpec ind = SystemSpec::independent(vm, structure, Baseline::PaperLiteral);
  for (SysFunction which : functions) {
    if (!closed_form_error(vm, structure, Baseline::PaperLiteral, which, grid.points[1])
             .has_value())
      continue;
    for (double t : grid.points) {
      const auto closed = closed_form_error(vm, structure, Baseline::PaperLiteral, which, t);
      if (!closed) {
        ++res.unavailable;
        continue;
      }
      double numeric;
      try {
        if (which == SysFunction::SF) {
          numeric = std::expm1(system_log_sf(dep, t) - system_log_sf(ind, t));
        } else {
          numeric = numeric_system_function(dep, which, t) /
                        numeric_system_function(ind, which, t) -
                    1.0;
        }
      } catch (const DegenerateError&) {
        ++res.unavailable;
        continue;
      }
      const double dev = error_deviation(*closed, numeric);
      ++res.compared;
      if (dev > res.max_deviation) {
        res.max_deviation = dev;
        res.worst_where = std::string(family_name(vm.family())) + "/" +
                          structure_name(structure) + " fn=" +
                          std::to_string(static_cast<int>(which)) + " t=" + std::to_string(t);
      }
    }
  }
  return res;
}

/// -ln SF(t) against the integrated numeric failure rate, accumulated across
/// the grid. The leg below the first grid point starts from the exact
/// cumulative hazard at start/100 so the comparison exercises [start, stop].
inline double hazard_consistency_max_rel(const SystemSpec& spec, const EvalGrid& grid) {
  auto fr = [&](double u) { return numeric_fr(spec, u); };
  const double eps = grid.points.front() / 100.0;
  double acc = -system_log_sf(spec, eps);
  double prev = eps;
  double worst = 0.0;
  for (double t : grid.points) {
    const double target = -system_log_sf(spec, t);
    acc += integrate_log_axis(fr, prev, t, std::max(1e-13, 1e-8 * target));
    prev = t;
    if (target > 0.0) worst = std::max(worst, std::abs(acc - target) / target);
  }
  return worst;
}

}  // namespace fixtures
