#pragma once

// Series- and parallel-system lifetime functions (SF, FR, RFR, MRL, AI)
// under the dependent model or an independence baseline. Closed forms are
// used where a family supplies them; a generic numeric engine built on the
// log-survival covers everything else and doubles as a cross-check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sysrel/common.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/model.hpp"
#include "sysrel/numeric.hpp"

namespace sysrel {

enum class Structure { Series, Parallel };
enum class Assumption { Dependent, Independent };
enum class SysFunction { SF, FR, RFR, MRL, AI };

inline const char* structure_name(Structure s) {
  return s == Structure::Series ? "series" : "parallel";
}

/// A system to evaluate: model + structure + dependence assumption.
/// For the independent assumption the parametric counterpart is cached when
/// one exists; otherwise evaluation falls back to marginal products.
struct SystemSpec {
  ValidatedModel model;
  Structure structure = Structure::Series;
  Assumption assumption = Assumption::Dependent;
  Baseline baseline = Baseline::PaperLiteral;
  std::optional<ValidatedModel> counterpart;

  static SystemSpec dependent(ValidatedModel m, Structure s) {
    return SystemSpec{std::move(m), s, Assumption::Dependent, Baseline::PaperLiteral, {}};
  }

  static SystemSpec independent(ValidatedModel m, Structure s, Baseline b) {
    SystemSpec spec{std::move(m), s, Assumption::Independent, b, {}};
    try {
      spec.counterpart = independent_counterpart(spec.model, b);
    } catch (const UnsupportedError&) {
      // Crowder true marginals: no parametric form; marginal products are used.
    }
    return spec;
  }

  /// The model whose joint SF drives evaluation, when parametric.
  const ValidatedModel* effective_model() const {
    if (assumption == Assumption::Dependent) return &model;
    return counterpart ? &*counterpart : nullptr;
  }
};

namespace detail {

/// Parallel system log-survival via inclusion-exclusion over the joint SF
/// (the Poincare expansion with t in the selected slots and 0 elsewhere).
/// The same alternating pass also accumulates the complement expansion in
/// terms of 1 - F_K, which stays accurate when the survival is close to 1.
inline double parallel_ie_log_sf(const ValidatedModel& vm, double t) {
  const int n = vm.n();
  if (n > max_expansion_components)
    throw SizeLimitError("parallel inclusion-exclusion supports at most 20 components");
  const auto un = static_cast<std::uint32_t>(n);
  std::vector<double> pt(static_cast<std::size_t>(n), 0.0);
  KahanSum sf_acc, cdf_acc;
  for (std::uint32_t mask = 1; mask < (1u << un); ++mask) {
    for (std::uint32_t i = 0; i < un; ++i) pt[i] = (mask & (1u << i)) ? t : 0.0;
    const double log_term = log_joint_sf(vm, pt);
    const double term = std::exp(log_term);
    const double complement = -std::expm1(log_term);
    const double sign = std::popcount(mask) % 2 == 1 ? 1.0 : -1.0;
    sf_acc.add(sign * term);
    cdf_acc.add(sign * complement);
  }
  const double sf = std::clamp(sf_acc.value(), 0.0, 1.0);
  if (sf >= 0.5) return std::log1p(-std::clamp(cdf_acc.value(), 0.0, 1.0));
  return std::log(sf);
}

/// Log marginal survival of component i under the spec's baseline.
inline double baseline_marginal_log_sf(const SystemSpec& spec, int i, double t) {
  if (spec.counterpart) return marginal_log_sf(*spec.counterpart, i, t);
  return marginal_log_sf(spec.model, i, t);  // non-parametric true marginals
}

}  // namespace detail

/// Log survival of the system lifetime at time t > 0.
inline double system_log_sf(const SystemSpec& spec, double t) {
  if (!is_finite_pos(t)) throw DomainError("system functions are defined for t > 0");
  const int n = spec.model.n();
  if (spec.assumption == Assumption::Dependent) {
    if (spec.structure == Structure::Series) {
      std::vector<double> pt(static_cast<std::size_t>(n), t);
      return log_joint_sf(spec.model, pt);
    }
    return detail::parallel_ie_log_sf(spec.model, t);
  }
  if (spec.structure == Structure::Series) {
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += detail::baseline_marginal_log_sf(spec, i, t);
    return s;
  }
  // Parallel, independent: 1 - prod of marginal CDFs, assembled in logs.
  double log_prod_cdf = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double lm = detail::baseline_marginal_log_sf(spec, i, t);
    if (lm == 0.0) return 0.0;  // some component never fails by time t
    log_prod_cdf += log1mexp(lm);
  }
  return log1mexp(log_prod_cdf);
}

inline double system_sf(const SystemSpec& spec, double t) {
  return std::exp(system_log_sf(spec, t));
}

// ---------------------------------------------------------------------------
// Closed-form registry
// ---------------------------------------------------------------------------

/// Series cumulative hazard H(t) = -ln SF and, when the family supplies a
/// derivative form, H'(t).
struct SeriesHazard {
  double value = 0.0;
  double deriv = nan_value;
  bool has_deriv = false;
};

namespace detail {

// The MOMW equal-coordinate exponent max_i t^{alpha_i} switches between the
// subset's min and max shape at t = 1, so the hazard derivative jumps there.
// Derivative-based closed forms are withheld inside this guard band, which
// covers the numeric differentiation stencil.
inline constexpr double momw_kink_guard = 3e-4;

struct MomwSeriesTerms {
  double value = 0.0;   // sum over subsets of rate * t^{m_S(t)}
  double deriv = 0.0;
  bool kinked = false;  // some subset mixes shapes ...
};

inline MomwSeriesTerms momw_series_hazard_terms(const MomwParams& p, double t) {
  MomwSeriesTerms out;
  for (const auto& [mask, rate] : p.rates.entries()) {
    if (rate == 0.0) continue;
    double amin = inf_value, amax = -inf_value;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      const double a = p.alphas[std::countr_zero(m)];
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
    const double expo = t >= 1.0 ? amax : amin;
    out.value += rate * std::pow(t, expo);
    out.deriv += rate * expo * std::pow(t, expo - 1.0);
    out.kinked = out.kinked || (amax > amin);
  }
  return out;
}

inline bool momw_in_kink_guard(const MomwParams& p, double t) {
  if (std::abs(t - 1.0) > momw_kink_guard) return false;
  return momw_series_hazard_terms(p, t).kinked;
}

}  // namespace detail

/// Closed-form series cumulative hazard for the effective model, when the
/// family's collapsed-coefficient expression exists. All ten families carry
/// a closed SF; LB2 carries no derivative form.
inline SeriesHazard closed_series_hazard(const ValidatedModel& vm, double t) {
  SeriesHazard out;
  switch (vm.family()) {
    case Family::IndExp: {
      const auto& p = vm.params<IndExpParams>();
      double lam = 0.0;
      for (double l : p.lambdas) lam += l;
      out = {lam * t, lam, true};
      break;
    }
    case Family::MOME: {
      const double lam = vm.params<MomeParams>().rates.total();
      out = {lam * t, lam, true};
      break;
    }
    case Family::MG1: {
      // H(t) = sum_k a_k t^k with a_k the total rate over k-subsets.
      const auto& p = vm.params<Mg1Params>();
      std::vector<double> a(static_cast<std::size_t>(vm.n()) + 1, 0.0);
      for (const auto& [mask, rate] : p.rates.entries())
        a[static_cast<std::size_t>(std::popcount(mask))] += rate;
      double tk = t, dtk = 1.0, h = 0.0, dh = 0.0;
      for (std::size_t k = 1; k < a.size(); ++k) {
        h += a[k] * tk;
        dh += static_cast<double>(k) * a[k] * dtk;
        dtk = tk;
        tk *= t;
      }
      out = {h, dh, true};
      break;
    }
    case Family::IndWeibull: {
      const auto& p = vm.params<IndWeibullParams>();
      double h = 0.0, dh = 0.0;
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        h += p.lambdas[i] * std::pow(t, p.alphas[i]);
        dh += p.lambdas[i] * p.alphas[i] * std::pow(t, p.alphas[i] - 1.0);
      }
      out = {h, dh, true};
      break;
    }
    case Family::MOMW: {
      const auto& p = vm.params<MomwParams>();
      const auto terms = detail::momw_series_hazard_terms(p, t);
      out.value = terms.value;
      if (!(terms.kinked && std::abs(t - 1.0) <= detail::momw_kink_guard)) {
        out.deriv = terms.deriv;
        out.has_deriv = true;
      }
      break;
    }
    case Family::Crowder: {
      const auto& p = vm.params<CrowderParams>();
      double s = 0.0, ds = 0.0;
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        s += p.lambdas[i] * std::pow(t, p.alphas[i]);
        ds += p.lambdas[i] * p.alphas[i] * std::pow(t, p.alphas[i] - 1.0);
      }
      const double h = std::pow(p.gamma + s, p.l) - std::pow(p.gamma, p.l);
      const double dh = p.l * std::pow(p.gamma + s, p.l - 1.0) * ds;
      out = {h, dh, true};
      break;
    }
    case Family::Lee: {
      const auto& p = vm.params<LeeParams>();
      const double lam = p.lambda_aggregate();
      out = {lam * std::pow(t, p.alpha), lam * p.alpha * std::pow(t, p.alpha - 1.0), true};
      break;
    }
    case Family::LB1: {
      const auto& p = vm.params<Lb1Params>();
      double s = 0.0, ds = 0.0;
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        s += p.lambdas[i] * std::pow(t, p.alphas[i]);
        ds += p.lambdas[i] * p.alphas[i] * std::pow(t, p.alphas[i] - 1.0);
      }
      out = {s + p.delta * p.b_of(t), ds + p.delta * p.b_deriv(t), true};
      break;
    }
    case Family::FGMW: {
      const auto& p = vm.params<FgmParams>();
      double s = 0.0, ds = 0.0;
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        s += p.lambdas[i] * std::pow(t, p.alphas[i]);
        ds += p.lambdas[i] * p.alphas[i] * std::pow(t, p.alphas[i] - 1.0);
      }
      const double phi = p.phi_of(t);
      const double dphi = p.gamma * p.prod_cdf_deriv(t);
      out = {s - std::log(phi), ds - dphi / phi, true};
      break;
    }
    case Family::LB2: {
      std::vector<double> pt(static_cast<std::size_t>(vm.n()), t);
      out.value = -log_joint_sf(vm, pt);
      break;
    }
  }
  return out;
}

/// Closed-form parallel survival, for the families whose expansions the
/// registry carries: IndExp, IndWeibull (product complements), MOME and MG1
/// (per-subset rate collapses), FGMW (theta form).
inline std::optional<double> closed_parallel_sf(const ValidatedModel& vm, double t) {
  const int n = vm.n();
  switch (vm.family()) {
    case Family::IndExp: {
      const auto& p = vm.params<IndExpParams>();
      double log_prod_cdf = 0.0;
      for (double lam : p.lambdas) {
        if (lam * t == 0.0) return 1.0;
        log_prod_cdf += log1mexp(-lam * t);
      }
      return -std::expm1(log_prod_cdf);
    }
    case Family::IndWeibull: {
      const auto& p = vm.params<IndWeibullParams>();
      double log_prod_cdf = 0.0;
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        const double x = p.lambdas[i] * std::pow(t, p.alphas[i]);
        if (x == 0.0) return 1.0;
        log_prod_cdf += log1mexp(-x);
      }
      return -std::expm1(log_prod_cdf);
    }
    case Family::MOME: {
      // A_K = total rate over subsets meeting K; SF = sum_K (-1)^{|K|-1} e^{-A_K t}.
      if (n > max_expansion_components)
        throw SizeLimitError("parallel expansion supports at most 20 components");
      const auto& entries = vm.params<MomeParams>().rates.entries();
      KahanSum acc;
      const auto un = static_cast<std::uint32_t>(n);
      for (std::uint32_t k = 1; k < (1u << un); ++k) {
        double a_k = 0.0;
        for (const auto& [mask, rate] : entries)
          if (mask & k) a_k += rate;
        const double term = std::exp(-a_k * t);
        acc.add(std::popcount(k) % 2 == 1 ? term : -term);
      }
      return std::clamp(acc.value(), 0.0, 1.0);
    }
    case Family::MG1: {
      // Subsets S of K contribute rate * t^{|S|}.
      if (n > max_expansion_components)
        throw SizeLimitError("parallel expansion supports at most 20 components");
      const auto& entries = vm.params<Mg1Params>().rates.entries();
      KahanSum acc;
      const auto un = static_cast<std::uint32_t>(n);
      for (std::uint32_t k = 1; k < (1u << un); ++k) {
        double h = 0.0;
        for (const auto& [mask, rate] : entries)
          if ((mask & ~k) == 0) h += rate * std::pow(t, std::popcount(mask));
        const double term = std::exp(-h);
        acc.add(std::popcount(k) % 2 == 1 ? term : -term);
      }
      return std::clamp(acc.value(), 0.0, 1.0);
    }
    case Family::FGMW: {
      const auto& p = vm.params<FgmParams>();
      const double one_minus_theta = std::exp(p.log_one_minus_theta(t));
      const double theta = 1.0 - one_minus_theta;
      const double sign = n % 2 == 1 ? 1.0 : -1.0;
      const double sf = theta + sign * std::exp(p.a_of(t)) * p.gamma * one_minus_theta;
      return std::clamp(sf, 0.0, 1.0);
    }
    default:
      return std::nullopt;
  }
}

/// The paper's closed form for (family, structure, function) evaluated at t,
/// or nullopt when the registry has no entry (callers fall back to the
/// numeric engine). MRL has no closed forms. Parallel systems carry closed
/// SF only.
inline std::optional<double> closed_form_value(const SystemSpec& spec, SysFunction which,
                                               double t) {
  if (!is_finite_pos(t)) throw DomainError("closed forms are defined for t > 0");
  if (which == SysFunction::MRL) return std::nullopt;
  const ValidatedModel* em = spec.effective_model();
  if (em == nullptr) return std::nullopt;  // non-parametric baseline
  if (spec.structure == Structure::Parallel) {
    if (which != SysFunction::SF) return std::nullopt;
    return closed_parallel_sf(*em, t);
  }
  const SeriesHazard hz = closed_series_hazard(*em, t);
  switch (which) {
    case SysFunction::SF:
      return std::exp(-hz.value);
    case SysFunction::FR:
      if (!hz.has_deriv) return std::nullopt;
      return hz.deriv;
    case SysFunction::RFR: {
      if (!hz.has_deriv) return std::nullopt;
      if (hz.value <= 0.0) throw DegenerateError("reversed failure rate undefined at SF = 1");
      // mu = H' e^{-H} / (1 - e^{-H}) = H' / (e^H - 1)
      return hz.deriv <= 0.0 ? 0.0 : std::exp(std::log(hz.deriv) - log_expm1(hz.value));
    }
    case SysFunction::AI:
      if (!hz.has_deriv) return std::nullopt;
      if (hz.value <= 0.0) throw DegenerateError("aging intensity undefined at SF = 1");
      return t * hz.deriv / hz.value;
    case SysFunction::MRL:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numeric engine
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double min_numeric_time = 1e-10;
inline constexpr double sf_floor = 1e-300;

}  // namespace detail

/// Failure rate from the log-survival: Richardson-extrapolated central
/// difference of H(t) = -ln SF with step max(1e-5, 1e-4 t).
inline double numeric_fr(const SystemSpec& spec, double t) {
  if (t < detail::min_numeric_time)
    throw DegenerateError("numeric engine refuses t below 1e-10");
  auto H = [&](double u) { return -system_log_sf(spec, u); };
  return derivative(H, t);
}

inline double numeric_rfr(const SystemSpec& spec, double t) {
  const double log_sf = system_log_sf(spec, t);
  if (log_sf >= 0.0) throw DegenerateError("reversed failure rate undefined at SF = 1");
  if (!std::isfinite(log_sf)) throw DegenerateError("survival underflowed to 0");
  const double fr = numeric_fr(spec, t);
  return fr * std::exp(log_sf) / (-std::expm1(log_sf));
}

inline double numeric_ai(const SystemSpec& spec, double t) {
  const double log_sf = system_log_sf(spec, t);
  if (log_sf >= 0.0) throw DegenerateError("aging intensity undefined at SF = 1");
  if (!std::isfinite(log_sf)) throw DegenerateError("survival underflowed to 0");
  return t * numeric_fr(spec, t) / (-log_sf);
}

/// Mean residual life: adaptive Simpson over [t, T*] on a log axis, where
/// T* is found by doubling until the survival drops below 1e-12 and then
/// extended until it drops below 1e-20 (slowly decaying tails would
/// otherwise leave the fitted bound carrying real mass), plus an
/// exponential tail fitted from the final stretch. Absolute error budget
/// 1e-8.
inline double numeric_mrl(const SystemSpec& spec, double t) {
  const double log_sf_t = system_log_sf(spec, t);
  if (!std::isfinite(log_sf_t)) throw DegenerateError("survival underflowed to 0");
  const double sf_t = std::exp(log_sf_t);
  if (sf_t < detail::sf_floor) throw DegenerateError("survival underflowed to 0");

  double t_star = std::max(2.0 * t, t + 1.0);
  int doublings = 0;
  while (std::exp(system_log_sf(spec, t_star)) >= 1e-12) {
    t_star *= 2.0;
    if (++doublings > 200) throw IntegrationFailure("mean residual life: no integrable tail found");
  }
  for (int extra = 0; extra < 40 && system_log_sf(spec, t_star) > -46.0; ++extra)
    t_star *= 2.0;
  auto sf = [&](double u) { return std::exp(system_log_sf(spec, u)); };
  const double tol = std::max(1e-250, 1e-9 * sf_t * std::max(1.0, t));
  const double body = integrate_log_axis(sf, t, t_star, tol);

  const double a = 0.5 * t_star;
  const double rate_hat =
      (system_log_sf(spec, a) - system_log_sf(spec, t_star)) / (t_star - a);
  if (!(rate_hat > 0.0)) throw IntegrationFailure("mean residual life: tail rate not positive");
  const double tail = std::exp(system_log_sf(spec, t_star)) / rate_hat;

  return (body + tail) / sf_t;
}

/// Generic engine value for any of the five functions.
inline double numeric_system_function(const SystemSpec& spec, SysFunction which, double t) {
  switch (which) {
    case SysFunction::SF: return system_sf(spec, t);
    case SysFunction::FR: return numeric_fr(spec, t);
    case SysFunction::RFR: return numeric_rfr(spec, t);
    case SysFunction::MRL: return numeric_mrl(spec, t);
    case SysFunction::AI: return numeric_ai(spec, t);
  }
  throw Error("unreachable function tag");
}

/// Preferred evaluation: the closed form when the registry has one, the
/// numeric engine otherwise.
inline double system_function(const SystemSpec& spec, SysFunction which, double t) {
  if (auto v = closed_form_value(spec, which, t)) return *v;
  return numeric_system_function(spec, which, t);
}

// ---------------------------------------------------------------------------
// Curve evaluation
// ---------------------------------------------------------------------------

enum class Provenance { ClosedForm, Numeric };

struct VerificationReport {
  double max_rel_deviation = 0.0;
  std::size_t points_compared = 0;
};

/// Grid-evaluated system functions. Undefined points hold NaN.
struct CurveSet {
  EvalGrid grid;
  std::vector<double> sf, fr, rfr, mrl, ai;
  Provenance sf_prov = Provenance::Numeric;
  Provenance fr_prov = Provenance::Numeric;
  Provenance rfr_prov = Provenance::Numeric;
  Provenance mrl_prov = Provenance::Numeric;
  Provenance ai_prov = Provenance::Numeric;
  std::optional<VerificationReport> verification;

  std::size_t undefined_points() const {
    std::size_t bad = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (std::isnan(sf[k]) || std::isnan(fr[k]) || std::isnan(rfr[k]) || std::isnan(mrl[k]) ||
          std::isnan(ai[k]))
        ++bad;
    }
    return bad;
  }
};

namespace detail {

inline double guarded_value(const SystemSpec& spec, SysFunction which, double t) {
  try {
    return system_function(spec, which, t);
  } catch (const DegenerateError&) {
    return nan_value;
  } catch (const IntegrationFailure&) {
    return nan_value;
  }
}

}  // namespace detail

/// Evaluate all five functions over a grid. With verify set, every closed
/// form is re-evaluated through the numeric engine and the worst relative
/// deviation is reported. Work may be partitioned across threads; results
/// are keyed by grid index, so the output is identical for any partition.
inline CurveSet evaluate_curves(const SystemSpec& spec, const EvalGrid& grid,
                                bool verify = false, unsigned threads = 1) {
  grid.check();
  CurveSet out;
  out.grid = grid;
  const std::size_t count = grid.size();
  out.sf.resize(count);
  out.fr.resize(count);
  out.rfr.resize(count);
  out.mrl.resize(count);
  out.ai.resize(count);

  auto prov = [&](SysFunction which) {
    return closed_form_value(spec, which, grid.points.front()).has_value()
               ? Provenance::ClosedForm
               : Provenance::Numeric;
  };
  out.sf_prov = prov(SysFunction::SF);
  out.fr_prov = prov(SysFunction::FR);
  out.rfr_prov = prov(SysFunction::RFR);
  out.mrl_prov = Provenance::Numeric;
  out.ai_prov = prov(SysFunction::AI);

  const unsigned workers =
      threads <= 1 || count < 8 ? 1u
                                : std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<VerificationReport> reports(workers);
  auto run_range = [&](unsigned w, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = grid.points[k];
      out.sf[k] = detail::guarded_value(spec, SysFunction::SF, t);
      out.fr[k] = detail::guarded_value(spec, SysFunction::FR, t);
      out.rfr[k] = detail::guarded_value(spec, SysFunction::RFR, t);
      out.mrl[k] = detail::guarded_value(spec, SysFunction::MRL, t);
      out.ai[k] = detail::guarded_value(spec, SysFunction::AI, t);
      if (verify) {
        for (SysFunction which : {SysFunction::SF, SysFunction::FR, SysFunction::RFR,
                                  SysFunction::AI}) {
          try {
            const auto closed = closed_form_value(spec, which, t);
            if (!closed) continue;
            const double numeric = numeric_system_function(spec, which, t);
            const double scale = std::max({std::abs(*closed), std::abs(numeric), 1e-30});
            reports[w].max_rel_deviation =
                std::max(reports[w].max_rel_deviation, std::abs(*closed - numeric) / scale);
            ++reports[w].points_compared;
          } catch (const DegenerateError&) {
          }
        }
      }
    }
  };
  if (workers == 1) {
    run_range(0, 0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, w, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (verify) {
    VerificationReport merged;
    for (const auto& r : reports) {
      merged.max_rel_deviation = std::max(merged.max_rel_deviation, r.max_rel_deviation);
      merged.points_compared += r.points_compared;
    }
    out.verification = merged;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aging classification
// ---------------------------------------------------------------------------

enum class AgingClass { IFRA, DFRA, Boundary, Indeterminate };

inline const char* aging_class_name(AgingClass c) {
  switch (c) {
    case AgingClass::IFRA: return "IFRA";
    case AgingClass::DFRA: return "DFRA";
    case AgingClass::Boundary: return "IFRA-and-DFRA";
    case AgingClass::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct AgingVerdict {
  AgingClass cls = AgingClass::Indeterminate;
  std::optional<double> first_violation;  // set when indeterminate
};

/// IFRA when AI >= 1 - tol on the whole grid, DFRA when AI <= 1 + tol;
/// an exponential-like system meets both and reports the boundary case.
inline AgingVerdict classify_aging(const SystemSpec& spec, const EvalGrid& grid,
                                   double tol = 1e-9) {
  grid.check();
  bool ifra = true, dfra = true;
  std::optional<double> first_up, first_down;
  for (double t : grid.points) {
    const double ai = system_function(spec, SysFunction::AI, t);
    if (ai < 1.0 - tol) {
      ifra = false;
      if (!first_down) first_down = t;
    }
    if (ai > 1.0 + tol) {
      dfra = false;
      if (!first_up) first_up = t;
    }
  }
  if (ifra && dfra) return {AgingClass::Boundary, {}};
  if (ifra) return {AgingClass::IFRA, {}};
  if (dfra) return {AgingClass::DFRA, {}};
  return {AgingClass::Indeterminate, first_down ? first_down : first_up};
}

}  // namespace sysrel
