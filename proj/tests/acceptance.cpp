// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sysrel/sysrel.hpp"
#include "support/registry_fixtures.hpp"
#include "support/test_models.hpp"

using namespace sysrel;
using namespace testmodels;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("[%2d] %s  %s\n", idx, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- 1: closed forms vs numeric engine over every registry pair ------------

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const EvalGrid grid = EvalGrid::log_spaced(0.01, 10.0, 100);
  double worst = 0.0;
  std::string where;
  std::size_t pairs = 0;
  bool ok = true;
  for (const auto& vm : fixtures::representative_models()) {
    for (Structure st : {Structure::Series, Structure::Parallel}) {
      const auto spec = SystemSpec::dependent(vm, st);
      for (SysFunction which :
           {SysFunction::SF, SysFunction::FR, SysFunction::RFR, SysFunction::AI}) {
        if (!closed_form_value(spec, which, grid.points[1]).has_value()) continue;
        ++pairs;
        std::size_t abstained = 0;
        for (double t : grid.points) {
          const auto closed = closed_form_value(spec, which, t);
          if (!closed) {
            ++abstained;  // MOMW hazard kink at t = 1; nothing to compare there
            continue;
          }
          const double numeric = numeric_system_function(spec, which, t);
          const double dev = fixtures::rel_deviation(*closed, numeric);
          if (dev > worst) {
            worst = dev;
            where = std::string(family_name(vm.family())) + "/" + structure_name(st);
          }
        }
        ok = ok && abstained <= 1;
      }
    }
  }
  const double elapsed = seconds_since(start);
  // Series: SF+FR+RFR+AI for nine families, SF only for LB2. Parallel: SF
  // for IndExp, MOME, MG1, IndWeibull, FGMW.
  ok = ok && pairs == 42 && worst < 1e-7 && elapsed < 30.0;
  report(1, ok,
         "closed form vs numeric engine: " + std::to_string(pairs) +
             " registry pairs, max rel dev " + fmt(worst) + " at " + where + " (" +
             fmt(elapsed) + " s, budget 30 s)");
}

// --- 2: MOME series error structure ----------------------------------------

void criterion_2() {
  SplitMix64 rng(20240801);
  const EvalGrid grid = default_grid();
  bool ok = true;
  std::string why = "all structure checks held";
  for (int rep = 0; rep < 25 && ok; ++rep) {
    const int n = 2 + rep % 3;
    const auto vm = random_mome(rng, n);
    const auto curve = relative_error_curve(vm, Structure::Series, Baseline::PaperLiteral, grid);
    auto variance = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      return var / static_cast<double>(v.size());
    };
    if (variance(curve.e_fr) >= 1e-18) { ok = false; why = "E_fr not constant"; }
    if (variance(curve.e_ai) >= 1e-18) { ok = false; why = "E_ai not constant"; }
    for (double v : curve.e_ai)
      if (v != 0.0) { ok = false; why = "E_ai not identically zero"; }
    for (std::size_t k = 1; k < grid.size() && ok; ++k) {
      if (!(curve.e_sf[k] < curve.e_sf[k - 1])) { ok = false; why = "E_sf not strictly decreasing"; }
      if (!(curve.e_rfr[k] < curve.e_rfr[k - 1])) { ok = false; why = "E_rfr not strictly decreasing"; }
    }
    for (std::size_t k = 0; k < grid.size() && ok; ++k) {
      if (!(std::abs(curve.e_sf[k]) < 1.0)) { ok = false; why = "|E_sf| reached 1"; }
      if (!(std::abs(curve.e_rfr[k]) < 1.0)) { ok = false; why = "|E_rfr| reached 1"; }
    }
  }
  report(2, ok, "MOME series error structure on 25 random models (n in {2,3,4}): " + why);
}

// --- 3: MG1 aging-intensity bounds ------------------------------------------

void criterion_3() {
  SplitMix64 rng(30303);
  const EvalGrid grid = default_grid();
  bool ok = true;
  std::string why = "1 <= AI <= n, E_ai <= n-1, IFRA";
  for (int rep = 0; rep < 25 && ok; ++rep) {
    const int n = 2 + rep % 3;
    const auto vm = random_mg1(rng, n);
    const auto spec = SystemSpec::dependent(vm, Structure::Series);
    for (double t : grid.points) {
      const double ai = system_function(spec, SysFunction::AI, t);
      if (!(ai >= 1.0 - 1e-9 && ai <= static_cast<double>(n) + 1e-9)) {
        ok = false;
        why = "AI escaped [1, n] at t=" + fmt(t);
        break;
      }
      const double e_ai =
          closed_form_error(vm, Structure::Series, Baseline::PaperLiteral, SysFunction::AI, t)
              .value();
      if (!(e_ai <= static_cast<double>(n) - 1.0 + 1e-9)) {
        ok = false;
        why = "E_ai exceeded n-1 at t=" + fmt(t);
        break;
      }
    }
    if (ok && classify_aging(spec, grid).cls != AgingClass::IFRA) {
      ok = false;
      why = "classification is not IFRA";
    }
  }
  report(3, ok, "MG1 bounds on 25 random models: " + why);
}

// --- 4: Lee degeneracy -------------------------------------------------------

void criterion_4() {
  SplitMix64 rng(444);
  bool ok = true;
  std::string why = "AI = alpha on both assumptions, E_ai = 0 (tol 1e-9)";
  for (int rep = 0; rep < 10 && ok; ++rep) {
    const auto vm = random_lee(rng, 2 + rep % 3);
    const double alpha = vm.params<LeeParams>().alpha;
    const auto dep = SystemSpec::dependent(vm, Structure::Series);
    const auto ind = SystemSpec::independent(vm, Structure::Series, Baseline::PaperLiteral);
    for (double t : {0.05, 0.4, 1.0, 3.3, 9.0}) {
      if (std::abs(system_function(dep, SysFunction::AI, t) - alpha) > 1e-9 ||
          std::abs(system_function(ind, SysFunction::AI, t) - alpha) > 1e-9 ||
          std::abs(numeric_ai(dep, t) - alpha) > 1e-9 ||
          std::abs(relative_error_at(vm, Structure::Series, Baseline::PaperLiteral,
                                     SysFunction::AI, t)) > 1e-9) {
        ok = false;
        why = "deviation above 1e-9 at t=" + fmt(t);
        break;
      }
    }
  }
  report(4, ok, "Lee aging-intensity degeneracy on 10 random models: " + why);
}

// --- 5: reductions to the independent base ----------------------------------

void criterion_5() {
  const EvalGrid grid = EvalGrid::log_spaced(0.01, 10.0, 50);
  const std::vector<double> lam{1.0, 0.5};
  const std::vector<double> alp{1.4, 0.8};
  const SubsetRateMap zero_rates(2, {{key({1}), 1.0}, {key({2}), 0.5}, {key({1, 2}), 0.0}});

  struct Pair {
    const char* name;
    ValidatedModel reduced;
    ValidatedModel base;
  };
  const std::vector<Pair> pairs = {
      {"MOME->IndExp", validate({Family::MOME, MomeParams{zero_rates}}), ind_exp(lam)},
      {"MOMW->IndWeibull", validate({Family::MOMW, MomwParams{zero_rates, alp}}),
       ind_weibull(lam, alp)},
      {"Crowder(l=1,g=0)->IndWeibull",
       validate({Family::Crowder, CrowderParams{lam, alp, 1.0, 0.0}}), ind_weibull(lam, alp)},
      {"FGMW(g=0)->IndWeibull", fgmw(lam, alp, 0.0), ind_weibull(lam, alp)},
      {"LB1(d=0)->IndWeibull", validate({Family::LB1, Lb1Params{lam, alp, 0.0, 2.0}}),
       ind_weibull(lam, alp)},
  };
  bool ok = true;
  std::string why = "series SF agreement < 1e-12 on the 50-point grid";
  for (const auto& p : pairs) {
    const auto sa = SystemSpec::dependent(p.reduced, Structure::Series);
    const auto sb = SystemSpec::dependent(p.base, Structure::Series);
    for (double t : grid.points) {
      if (std::abs(system_sf(sa, t) - system_sf(sb, t)) >= 1e-12) {
        ok = false;
        why = std::string(p.name) + " deviates at t=" + fmt(t);
      }
    }
  }
  report(5, ok, "family reductions: " + why);
}

// --- 6: Monte Carlo oracle ----------------------------------------------------

void criterion_6() {
  SplitMix64 rng(606060);
  const EvalGrid grid = EvalGrid::log_spaced(0.05, 5.0, 50);
  bool ok = true;
  std::string why = "coverage >= 95% everywhere, each model within 60 s";
  double worst_cov = 1.0, worst_time = 0.0;
  for (int n : {2, 3}) {
    for (int fam = 0; fam < 3 && ok; ++fam) {
      const auto vm = fam == 0 ? random_mome(rng, n)
                     : fam == 1 ? random_momw(rng, n)
                                : random_lee(rng, n);
      for (Structure st : {Structure::Series, Structure::Parallel}) {
        const auto start = std::chrono::steady_clock::now();
        const auto rep = mc_validate(vm, st, grid, 100000, 0.99, 1000 + n);
        const double elapsed = seconds_since(start);
        worst_cov = std::min(worst_cov, rep.fraction);
        worst_time = std::max(worst_time, elapsed);
        if (!rep.pass || elapsed >= 60.0) {
          ok = false;
          why = std::string(family_name(vm.family())) + "/" + structure_name(st) +
                " coverage " + fmt(rep.fraction) + " in " + fmt(elapsed) + " s";
        }
      }
    }
  }
  // Fault-injection self-test: a +0.05 corruption must be caught.
  const auto vm = mome_unit();
  const auto samples = sample_model(vm, 100000, 77);
  const auto emp = empirical_system_sf(samples, Structure::Series, grid, 0.99);
  const auto spec = SystemSpec::dependent(vm, Structure::Series);
  std::vector<double> corrupted(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    corrupted[k] = system_sf(spec, grid.points[k]) + 0.05;
  if (coverage_against(emp, corrupted).pass) {
    ok = false;
    why = "injected fault was not detected";
  }
  report(6, ok,
         "Monte Carlo oracle (MOME/MOMW/Lee, n in {2,3}, both structures, 1e5 samples): "
         "min coverage " + fmt(worst_cov) + ", max " + fmt(worst_time) + " s/model; " + why);
}

// --- 7: MOME order chain --------------------------------------------------------

void criterion_7() {
  const EvalGrid grid = EvalGrid::log_spaced(0.02, 8.0, 80);
  SplitMix64 rng(70707);
  bool ok = true;
  std::string why = "LR/FR/ST/RFR/MRL all A_leq_B, AI Equal, audit consistent";
  for (int rep = 0; rep < 3 && ok; ++rep) {
    const auto vm = rep == 0 ? mome_unit() : random_mome(rng, 2 + rep);
    const auto dep = SystemSpec::dependent(vm, Structure::Series);
    const auto ind = SystemSpec::independent(vm, Structure::Series, Baseline::PaperLiteral);
    std::vector<OrderVerdict> verdicts;
    for (OrderRelation r : {OrderRelation::LR, OrderRelation::FR, OrderRelation::ST,
                            OrderRelation::RFR, OrderRelation::MRL}) {
      verdicts.push_back(compare_order(dep, ind, r, grid));
      if (verdicts.back().direction != OrderDirection::A_leq_B) {
        ok = false;
        why = std::string(relation_name(r)) + " verdict is " +
              direction_name(verdicts.back().direction);
      }
    }
    verdicts.push_back(compare_order(dep, ind, OrderRelation::AI, grid));
    if (verdicts.back().direction != OrderDirection::Equal) {
      ok = false;
      why = "AI verdict is not Equal";
    }
    if (ok && !audit_implications(verdicts).consistent()) {
      ok = false;
      why = "implication audit reported a violation";
    }
  }
  report(7, ok, "MOME series order chain: " + why);
}

// --- 8: series/parallel sign link ----------------------------------------------

void criterion_8() {
  SplitMix64 rng(80808);
  const EvalGrid grid = EvalGrid::log_spaced(0.05, 5.0, 50);
  bool ok = true;
  std::string why = "opposite SF-error signs at every checked point";
  for (int rep = 0; rep < 20 && ok; ++rep) {
    const auto vm = rep % 2 == 0
                        ? random_mome(rng, 2)
                        : random_fgmw(rng, 2, (rep % 4 == 1 ? 1.0 : -1.0) * (0.2 + 0.7 * rng.u01()));
    const auto res = check_series_parallel_sign(vm, grid);
    if (!res.pass || res.points_checked == 0) {
      ok = false;
      why = std::string(family_name(vm.family())) + " rep " + std::to_string(rep) +
            (res.points_checked == 0 ? ": nothing to check" : ": same signs found");
    }
  }
  report(8, ok, "sign link on 20 random bivariate models (true-marginal baseline): " + why);
}

// --- 9: FGMW parity table --------------------------------------------------------

void criterion_9() {
  SplitMix64 rng(90909);
  const EvalGrid grid = EvalGrid::log_spaced(0.05, 5.0, 60);
  bool ok = true;
  std::string why = "series sign/bound and parallel parity held";
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 8 && ok; ++rep) {
      const double gamma = (rep % 2 == 0 ? 1.0 : -1.0) * (0.15 + 0.75 * rng.u01());
      const auto vm = random_fgmw(rng, n, gamma);
      const auto curve =
          relative_error_curve(vm, Structure::Series, Baseline::PaperLiteral, grid);
      for (std::size_t k = 0; k < grid.size() && ok; ++k) {
        if (curve.e_sf[k] * gamma < 0.0 || std::abs(curve.e_sf[k]) > std::abs(gamma) + 1e-12) {
          ok = false;
          why = "series E_sf sign/bound failed (n=" + std::to_string(n) + ")";
        }
      }
      const double parity = (n % 2 == 1 ? 1.0 : -1.0) * (gamma > 0 ? 1.0 : -1.0);
      for (double t : grid.points) {
        const double e = closed_form_error(vm, Structure::Parallel, Baseline::PaperLiteral,
                                           SysFunction::SF, t)
                             .value();
        if (e * parity < 0.0) {
          ok = false;
          why = "parallel E_sf parity failed (n=" + std::to_string(n) + ")";
        }
      }
    }
  }
  report(9, ok, "FGMW parity at n in {2,3}: " + why);
}

// --- 10: hazard consistency -------------------------------------------------------

void criterion_10() {
  const EvalGrid grid = default_grid();
  bool ok = true;
  double worst = 0.0;
  std::string where = "-";
  for (const auto& vm : fixtures::representative_models()) {
    const double dev = fixtures::hazard_consistency_max_rel(
        SystemSpec::dependent(vm, Structure::Series), grid);
    if (dev > worst) {
      worst = dev;
      where = std::string(family_name(vm.family())) + "/series";
    }
  }
  for (const auto& vm : fixtures::representative_models_n2()) {
    const double dev = fixtures::hazard_consistency_max_rel(
        SystemSpec::dependent(vm, Structure::Parallel), grid);
    if (dev > worst) {
      worst = dev;
      where = std::string(family_name(vm.family())) + "/parallel";
    }
  }
  ok = worst < 1e-6;
  report(10, ok,
         "cumulative hazard vs integrated failure rate, all families, both structures: "
         "max rel dev " + fmt(worst) + " at " + where);
}

// --- 11: ratio-monotonicity lemma suite ---------------------------------------------

void criterion_11() {
  SplitMix64 rng(111111);
  bool ok = true;
  std::string why = "direction matches the beta/gamma ordering; negative for gamma > beta";
  int draws = 0;
  while (draws < 1000 && ok) {
    double beta = 0.05 + 2.95 * rng.u01();
    double gamma = 0.05 + 2.95 * rng.u01();
    const double alpha = 0.3 + 2.2 * rng.u01();
    const double t = 0.01 + 9.94 * rng.u01();
    if (std::abs(beta - gamma) < 0.02) continue;
    // keep h away from its +inf / -1 saturation so neighbouring values
    // remain distinguishable in double precision
    if (std::abs(beta - gamma) * std::pow(1.05 * t, alpha) > 25.0) continue;
    ++draws;
    const double h1 = monotone_ratio(beta, gamma, alpha, t);
    const double h2 = monotone_ratio(beta, gamma, alpha, t * 1.05);
    if (beta > gamma) {
      if (!(h2 > h1) || !(h1 > 0.0)) {
        ok = false;
        why = "increase/positivity failed for beta > gamma";
      }
    } else {
      if (!(h2 < h1) || !(h1 < 0.0)) {
        ok = false;
        why = "decrease/negativity failed for gamma > beta";
      }
    }
  }
  report(11, ok, "ratio-monotonicity lemma on 1000 random draws: " + why);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("ACCEPTANCE: 11/11 criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
