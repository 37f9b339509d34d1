#pragma once

// Relative errors between a dependent system and its independence baseline,
// for each reliability function: E(t) = value_dep(t)/value_ind(t) - 1.
// Positive errors mean under-assessment (UA), negative over-assessment (OA).
// Closed-form expressions exist for most series families under the
// paper-literal baseline; everything else goes through the numeric engine.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sysrel/common.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/model.hpp"
#include "sysrel/numeric.hpp"
#include "sysrel/system.hpp"

namespace sysrel {

/// Absolute tolerance separating a genuine sign from a closed-form zero.
inline constexpr double sign_tolerance = 1e-12;

namespace detail {

struct WeibullSums {
  double s = 0.0;   // sum lambda_i t^{alpha_i}
  double ds = 0.0;  // its derivative
};

inline WeibullSums weibull_sums(const std::vector<double>& lambdas,
                                const std::vector<double>& alphas, double t) {
  WeibullSums out;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    out.s += lambdas[i] * std::pow(t, alphas[i]);
    out.ds += lambdas[i] * alphas[i] * std::pow(t, alphas[i] - 1.0);
  }
  return out;
}

/// (num/den) * (e^{x_den} - 1)/(e^{x_num} - 1) - 1 assembled in logs; the
/// shared shape of every closed-form RFR error.
inline double rfr_ratio_error(double num, double den, double x_num, double x_den) {
  if (!(num > 0.0) || !(den > 0.0) || !(x_num > 0.0) || !(x_den > 0.0))
    throw DegenerateError("reversed-failure-rate error undefined here");
  return std::expm1(std::log(num / den) + log_expm1(x_den) - log_expm1(x_num));
}

}  // namespace detail

/// The paper's closed-form relative error for (family, structure, function)
/// at time t, or nullopt when no formula applies. Formulas assume the
/// paper-literal baseline; they are also served under the true-marginal
/// baseline for the families where the two coincide.
inline std::optional<double> closed_form_error(const ValidatedModel& vm, Structure structure,
                                               Baseline baseline, SysFunction which, double t) {
  if (!is_finite_pos(t)) throw DomainError("errors are defined for t > 0");
  if (which == SysFunction::MRL) return std::nullopt;
  if (baseline == Baseline::TrueMarginal && !baselines_coincide(vm.family()))
    return std::nullopt;

  if (structure == Structure::Parallel) {
    if (which != SysFunction::SF) return std::nullopt;
    switch (vm.family()) {
      case Family::IndExp:
      case Family::IndWeibull:
        return 0.0;
      case Family::MOME: {
        const auto& p = vm.params<MomeParams>();
        const int n = vm.n();
        if (n > max_expansion_components)
          throw SizeLimitError("parallel expansion supports at most 20 components");
        const std::vector<double> singles = p.rates.singleton_rates();
        KahanSum num;
        double log_prod_cdf = 0.0;
        bool baseline_degenerate = false;
        for (double lam : singles) {
          if (lam * t == 0.0) baseline_degenerate = true;
          else log_prod_cdf += log1mexp(-lam * t);
        }
        if (baseline_degenerate) return std::nullopt;
        const auto un = static_cast<std::uint32_t>(n);
        for (std::uint32_t k = 1; k < (1u << un); ++k) {
          double a_k = 0.0, lit_k = 0.0;
          for (const auto& [mask, rate] : p.rates.entries())
            if (mask & k) a_k += rate;
          for (std::uint32_t m = k; m != 0; m &= m - 1) lit_k += singles[std::countr_zero(m)];
          const double diff = std::exp(-a_k * t) - std::exp(-lit_k * t);
          num.add(std::popcount(k) % 2 == 1 ? diff : -diff);
        }
        return num.value() / (-std::expm1(log_prod_cdf));
      }
      case Family::MG1: {
        const auto& p = vm.params<Mg1Params>();
        const int n = vm.n();
        if (n > max_expansion_components)
          throw SizeLimitError("parallel expansion supports at most 20 components");
        const std::vector<double> singles = p.rates.singleton_rates();
        double log_prod_cdf = 0.0;
        for (double lam : singles) {
          if (lam * t == 0.0) return std::nullopt;
          log_prod_cdf += log1mexp(-lam * t);
        }
        KahanSum num;
        const auto un = static_cast<std::uint32_t>(n);
        for (std::uint32_t k = 1; k < (1u << un); ++k) {
          double h_k = 0.0, lit_k = 0.0;
          for (const auto& [mask, rate] : p.rates.entries())
            if ((mask & ~k) == 0) h_k += rate * std::pow(t, std::popcount(mask));
          for (std::uint32_t m = k; m != 0; m &= m - 1) lit_k += singles[std::countr_zero(m)];
          const double diff = std::exp(-h_k) - std::exp(-lit_k * t);
          num.add(std::popcount(k) % 2 == 1 ? diff : -diff);
        }
        return num.value() / (-std::expm1(log_prod_cdf));
      }
      case Family::FGMW: {
        const auto& p = vm.params<FgmParams>();
        const double lomt = p.log_one_minus_theta(t);
        const double theta = -std::expm1(lomt);
        if (!(theta > 0.0)) throw DegenerateError("parallel baseline survival is zero");
        const double sign = vm.n() % 2 == 1 ? 1.0 : -1.0;
        return sign * p.gamma * std::exp(p.a_of(t) + lomt) / theta;
      }
      default:
        return std::nullopt;
    }
  }

  // Series closed forms.
  switch (vm.family()) {
    case Family::IndExp:
    case Family::IndWeibull:
      return 0.0;
    case Family::MOME: {
      const auto& p = vm.params<MomeParams>();
      double lit = 0.0;
      for (double lam : p.rates.singleton_rates()) lit += lam;
      if (lit <= 0.0) return std::nullopt;  // literal baseline is degenerate
      const double total = p.rates.total();
      switch (which) {
        case SysFunction::SF: return std::expm1(-(total - lit) * t);
        case SysFunction::FR: return (total - lit) / lit;
        case SysFunction::RFR:
          return detail::rfr_ratio_error(total, lit, total * t, lit * t);
        case SysFunction::AI: return 0.0;
        default: return std::nullopt;
      }
    }
    case Family::MG1: {
      const auto& p = vm.params<Mg1Params>();
      std::vector<double> a(static_cast<std::size_t>(vm.n()) + 1, 0.0);
      for (const auto& [mask, rate] : p.rates.entries())
        a[static_cast<std::size_t>(std::popcount(mask))] += rate;
      if (a[1] <= 0.0) return std::nullopt;
      double theta = 0.0, dtheta = 0.0, theta_hi = 0.0, excess = 0.0, tk = t, dtk = 1.0;
      for (std::size_t k = 1; k < a.size(); ++k) {
        theta += a[k] * tk;
        dtheta += static_cast<double>(k) * a[k] * dtk;
        if (k >= 2) {
          theta_hi += a[k] * tk;
          excess += static_cast<double>(k - 1) * a[k] * tk;
        }
        dtk = tk;
        tk *= t;
      }
      switch (which) {
        case SysFunction::SF: return std::expm1(-theta_hi);
        case SysFunction::FR: return (dtheta - a[1]) / a[1];
        case SysFunction::RFR:
          return detail::rfr_ratio_error(dtheta, a[1], theta, a[1] * t);
        case SysFunction::AI: return excess / theta;
        default: return std::nullopt;
      }
    }
    case Family::MOMW: {
      const auto& p = vm.params<MomwParams>();
      const auto sums = detail::weibull_sums(p.rates.singleton_rates(), p.alphas, t);
      if (sums.s <= 0.0 || sums.ds <= 0.0) return std::nullopt;
      const auto terms = detail::momw_series_hazard_terms(p, t);
      const double b = terms.value - sums.s;
      const double db = terms.deriv - sums.ds;
      const bool guarded = terms.kinked && std::abs(t - 1.0) <= detail::momw_kink_guard;
      switch (which) {
        case SysFunction::SF: return std::expm1(-b);
        case SysFunction::FR:
          if (guarded) return std::nullopt;
          return db / sums.ds;
        case SysFunction::RFR:
          if (guarded) return std::nullopt;
          return detail::rfr_ratio_error(sums.ds + db, sums.ds, sums.s + b, sums.s);
        case SysFunction::AI:
          if (guarded) return std::nullopt;
          return (1.0 + db / sums.ds) * (sums.s / (sums.s + b)) - 1.0;
        default: return std::nullopt;
      }
    }
    case Family::Crowder: {
      const auto& p = vm.params<CrowderParams>();
      const auto sums = detail::weibull_sums(p.lambdas, p.alphas, t);
      const double g = p.gamma + sums.s;
      const double hazard_pow = std::pow(g, p.l) - std::pow(p.gamma, p.l);
      const double fr_ratio = p.l * std::pow(g, p.l - 1.0);
      switch (which) {
        case SysFunction::SF:
          return std::expm1(std::pow(p.gamma, p.l) + sums.s - std::pow(g, p.l));
        case SysFunction::FR: return fr_ratio - 1.0;
        case SysFunction::RFR:
          return detail::rfr_ratio_error(fr_ratio, 1.0, hazard_pow, sums.s);
        case SysFunction::AI: return fr_ratio * sums.s / hazard_pow - 1.0;
        default: return std::nullopt;
      }
    }
    case Family::Lee: {
      const auto& p = vm.params<LeeParams>();
      double lit = 0.0;
      const std::vector<double> singles = p.rates.singleton_rates();
      for (std::size_t i = 0; i < singles.size(); ++i)
        lit += singles[i] * std::pow(p.scales[i], p.alpha);
      if (lit <= 0.0) return std::nullopt;
      const double agg = p.lambda_aggregate();
      const double ta = std::pow(t, p.alpha);
      switch (which) {
        case SysFunction::SF: return std::expm1(-ta * (agg - lit));
        case SysFunction::FR: return agg / lit - 1.0;
        case SysFunction::RFR:
          return detail::rfr_ratio_error(agg, lit, agg * ta, lit * ta);
        case SysFunction::AI: return 0.0;
        default: return std::nullopt;
      }
    }
    case Family::LB1: {
      const auto& p = vm.params<Lb1Params>();
      const auto sums = detail::weibull_sums(p.lambdas, p.alphas, t);
      const double b = p.b_of(t), db = p.b_deriv(t);
      switch (which) {
        case SysFunction::SF: return std::expm1(-p.delta * b);
        case SysFunction::FR: return p.delta * db / sums.ds;
        case SysFunction::AI:
          // Ratio of the aging intensities; see lb1_printed_ai_error for the
          // printed variant this replaces.
          return p.delta * (sums.s * db - sums.ds * b) /
                 (sums.ds * (sums.s + p.delta * b));
        default: return std::nullopt;
      }
    }
    case Family::FGMW: {
      const auto& p = vm.params<FgmParams>();
      switch (which) {
        case SysFunction::SF: return p.gamma * std::exp(p.log_one_minus_theta(t));
        case SysFunction::FR: {
          const auto sums = detail::weibull_sums(p.lambdas, p.alphas, t);
          return -p.gamma * p.prod_cdf_deriv(t) / (p.phi_of(t) * sums.ds);
        }
        default: return std::nullopt;
      }
    }
    case Family::LB2:
      return std::nullopt;
  }
  return std::nullopt;
}

/// The aging-intensity error expression printed for the Lu-Bhattacharyya I
/// family, kept verbatim for numeric scrutiny. It disagrees with the ratio
/// of aging intensities; closed_form_error carries the consistent form.
inline double lb1_printed_ai_error(const Lb1Params& p, double t) {
  const auto sums = detail::weibull_sums(p.lambdas, p.alphas, t);
  const double a = -sums.s, da = -sums.ds;
  const double b = p.b_of(t), db = p.b_deriv(t);
  return p.delta * (db / da + b / a - 2.0) / (1.0 - p.delta * b / a);
}

/// Relative error at a single point: closed form when registered, numeric
/// engine otherwise. Throws DegenerateError where the point is undefined.
inline double relative_error_at(const ValidatedModel& vm, Structure structure,
                                Baseline baseline, SysFunction which, double t) {
  if (which != SysFunction::MRL) {
    if (auto v = closed_form_error(vm, structure, baseline, which, t)) return *v;
  }
  const SystemSpec dep = SystemSpec::dependent(vm, structure);
  const SystemSpec ind = SystemSpec::independent(vm, structure, baseline);
  if (which == SysFunction::SF) {
    const double ld = system_log_sf(dep, t);
    const double li = system_log_sf(ind, t);
    if (!std::isfinite(li)) throw DegenerateError("baseline survival underflowed to 0");
    return std::expm1(ld - li);
  }
  const double vd = numeric_system_function(dep, which, t);
  const double vi = numeric_system_function(ind, which, t);
  if (!(vi != 0.0) || !std::isfinite(vi) || !std::isfinite(vd))
    throw DegenerateError("baseline value vanishes; relative error undefined");
  return vd / vi - 1.0;
}

/// Grid-evaluated relative errors for all five functions. Undefined points
/// hold NaN rather than fabricated values.
struct ErrorCurve {
  ValidatedModel model;
  Structure structure = Structure::Series;
  Baseline baseline = Baseline::PaperLiteral;
  EvalGrid grid;
  std::vector<double> e_sf, e_fr, e_rfr, e_mrl, e_ai;
  Provenance sf_prov = Provenance::Numeric;
  Provenance fr_prov = Provenance::Numeric;
  Provenance rfr_prov = Provenance::Numeric;
  Provenance mrl_prov = Provenance::Numeric;
  Provenance ai_prov = Provenance::Numeric;

  const std::vector<double>& values(SysFunction which) const {
    switch (which) {
      case SysFunction::SF: return e_sf;
      case SysFunction::FR: return e_fr;
      case SysFunction::RFR: return e_rfr;
      case SysFunction::MRL: return e_mrl;
      case SysFunction::AI: return e_ai;
    }
    throw Error("unreachable function tag");
  }

  std::size_t undefined_points() const {
    std::size_t bad = 0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (std::isnan(e_sf[k]) || std::isnan(e_fr[k]) || std::isnan(e_rfr[k]) ||
          std::isnan(e_mrl[k]) || std::isnan(e_ai[k]))
        ++bad;
    return bad;
  }
};

inline ErrorCurve relative_error_curve(const ValidatedModel& vm, Structure structure,
                                       Baseline baseline, const EvalGrid& grid,
                                       unsigned threads = 1) {
  grid.check();
  ErrorCurve out{vm, structure, baseline, grid, {}, {}, {}, {}, {}};
  const std::size_t count = grid.size();
  out.e_sf.resize(count);
  out.e_fr.resize(count);
  out.e_rfr.resize(count);
  out.e_mrl.resize(count);
  out.e_ai.resize(count);

  auto prov = [&](SysFunction which) {
    return closed_form_error(vm, structure, baseline, which, grid.points.front()).has_value()
               ? Provenance::ClosedForm
               : Provenance::Numeric;
  };
  out.sf_prov = prov(SysFunction::SF);
  out.fr_prov = prov(SysFunction::FR);
  out.rfr_prov = prov(SysFunction::RFR);
  out.mrl_prov = Provenance::Numeric;
  out.ai_prov = prov(SysFunction::AI);

  auto value_or_nan = [&](SysFunction which, double t) {
    try {
      return relative_error_at(vm, structure, baseline, which, t);
    } catch (const DegenerateError&) {
      return nan_value;
    } catch (const IntegrationFailure&) {
      return nan_value;
    }
  };
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = grid.points[k];
      out.e_sf[k] = value_or_nan(SysFunction::SF, t);
      out.e_fr[k] = value_or_nan(SysFunction::FR, t);
      out.e_rfr[k] = value_or_nan(SysFunction::RFR, t);
      out.e_mrl[k] = value_or_nan(SysFunction::MRL, t);
      out.e_ai[k] = value_or_nan(SysFunction::AI, t);
    }
  };
  const unsigned workers =
      threads <= 1 || count < 8 ? 1u
                                : std::min<unsigned>(threads, static_cast<unsigned>(count));
  if (workers == 1) {
    run_range(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sign assessment
// ---------------------------------------------------------------------------

/// UA: error positive everywhere; OA: negative everywhere; Zero: within the
/// sign tolerance everywhere; Mixed: definite sign changes exist.
enum class SignLabel { OA, UA, Mixed, Zero };

inline const char* sign_label_name(SignLabel s) {
  switch (s) {
    case SignLabel::OA: return "OA";
    case SignLabel::UA: return "UA";
    case SignLabel::Mixed: return "Mixed";
    case SignLabel::Zero: return "Zero";
  }
  return "?";
}

struct FunctionAssessment {
  SysFunction function = SysFunction::SF;
  SignLabel label = SignLabel::Zero;
  std::vector<double> sign_changes;
};

struct BoundCheck {
  std::string name;
  bool satisfied = false;
};

struct AssessmentReport {
  std::vector<FunctionAssessment> functions;  // SF, FR, RFR, MRL, AI order
  std::vector<BoundCheck> bounds;

  const FunctionAssessment& of(SysFunction which) const {
    for (const auto& f : functions)
      if (f.function == which) return f;
    throw Error("assessment missing function");
  }
};

namespace detail {

inline FunctionAssessment assess_one(const ErrorCurve& curve, SysFunction which) {
  const auto& vals = curve.values(which);
  const auto& ts = curve.grid.points;
  FunctionAssessment out;
  out.function = which;
  bool any_pos = false, any_neg = false;
  for (double v : vals) {
    if (std::isnan(v)) continue;
    any_pos = any_pos || v > sign_tolerance;
    any_neg = any_neg || v < -sign_tolerance;
  }
  if (!any_pos && !any_neg) {
    out.label = SignLabel::Zero;
    return out;
  }
  if (any_pos && !any_neg) {
    out.label = SignLabel::UA;
    return out;
  }
  if (any_neg && !any_pos) {
    out.label = SignLabel::OA;
    return out;
  }
  out.label = SignLabel::Mixed;
  auto err = [&](double t) {
    try {
      return relative_error_at(curve.model, curve.structure, curve.baseline, which, t);
    } catch (const Error&) {
      return nan_value;
    }
  };
  for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
    const double a = vals[k], b = vals[k + 1];
    if (std::isnan(a) || std::isnan(b)) continue;
    if ((a > sign_tolerance && b < -sign_tolerance) ||
        (a < -sign_tolerance && b > sign_tolerance)) {
      out.sign_changes.push_back(bisect_sign_change(err, ts[k], ts[k + 1], 1e-6));
    }
  }
  if (out.sign_changes.empty()) {
    // Signs flip only across an undefined gap: report the bracketing pair's
    // midpoint so the Mixed label always carries a location.
    int prev_sign = 0;
    double prev_t = ts.front();
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (std::isnan(vals[k]) || std::abs(vals[k]) <= sign_tolerance) continue;
      const int s = vals[k] > 0.0 ? 1 : -1;
      if (prev_sign != 0 && s != prev_sign) {
        out.sign_changes.push_back(0.5 * (prev_t + ts[k]));
        break;
      }
      prev_sign = s;
      prev_t = ts[k];
    }
  }
  return out;
}

/// Largest grid prefix on which pred holds for every defined value.
template <typename Pred>
inline std::size_t prefix_length(const std::vector<double>& vals, Pred pred) {
  std::size_t len = 0;
  for (double v : vals) {
    if (std::isnan(v) || !pred(v)) break;
    ++len;
  }
  return len;
}

}  // namespace detail

/// Labels each function curve, locates sign changes by bisection, and
/// verifies the failure-rate/survival sign link: where E_fr keeps one sign
/// from the left edge of the grid, E_sf must keep the opposite sign there.
inline AssessmentReport assess_signs(const ErrorCurve& curve) {
  AssessmentReport report;
  for (SysFunction which : {SysFunction::SF, SysFunction::FR, SysFunction::RFR,
                            SysFunction::MRL, SysFunction::AI})
    report.functions.push_back(detail::assess_one(curve, which));

  const auto neg_prefix =
      detail::prefix_length(curve.e_fr, [](double v) { return v <= sign_tolerance; });
  bool ok_neg = true;
  for (std::size_t k = 0; k < neg_prefix; ++k)
    if (!std::isnan(curve.e_sf[k]) && curve.e_sf[k] < -sign_tolerance) ok_neg = false;
  report.bounds.push_back({"fr_nonpositive_implies_sf_nonnegative", ok_neg});

  const auto pos_prefix =
      detail::prefix_length(curve.e_fr, [](double v) { return v >= -sign_tolerance; });
  bool ok_pos = true;
  for (std::size_t k = 0; k < pos_prefix; ++k)
    if (!std::isnan(curve.e_sf[k]) && curve.e_sf[k] > sign_tolerance) ok_pos = false;
  report.bounds.push_back({"fr_nonnegative_implies_sf_nonpositive", ok_pos});

  // Family-specific bound checks where the family is recognized.
  const Family fam = curve.model.family();
  auto all_defined = [&](const std::vector<double>& vals, auto pred) {
    for (double v : vals)
      if (!std::isnan(v) && !pred(v)) return false;
    return true;
  };
  if (curve.structure == Structure::Series && fam == Family::MOME) {
    report.bounds.push_back(
        {"abs_e_sf_lt_1", all_defined(curve.e_sf, [](double v) { return std::abs(v) < 1.0; })});
    report.bounds.push_back(
        {"abs_e_rfr_lt_1", all_defined(curve.e_rfr, [](double v) { return std::abs(v) < 1.0; })});
  }
  if (curve.structure == Structure::Series && fam == Family::MG1) {
    const double bound = static_cast<double>(curve.model.n()) - 1.0;
    report.bounds.push_back({"e_ai_le_n_minus_1", all_defined(curve.e_ai, [&](double v) {
                               return v <= bound + sign_tolerance;
                             })});
  }
  if (curve.structure == Structure::Series && fam == Family::FGMW) {
    const double gamma = curve.model.params<FgmParams>().gamma;
    report.bounds.push_back(
        {"abs_e_sf_le_abs_gamma", all_defined(curve.e_sf, [&](double v) {
           return std::abs(v) <= std::abs(gamma) + sign_tolerance;
         })});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Ratio monotonicity helper
// ---------------------------------------------------------------------------

/// h(t) = (gamma/beta) * (e^{beta t^alpha} - 1) / (e^{gamma t^alpha} - 1) - 1.
/// Increasing in t when beta > gamma, decreasing when beta < gamma, and
/// negative throughout when gamma > beta. The alpha = 1 case is the plain
/// exponential-ratio variant.
inline double monotone_ratio(double beta, double gamma, double alpha, double t,
                             bool limit_at_zero = false) {
  if (!is_finite_pos(beta) || !is_finite_pos(gamma) || !is_finite_pos(alpha))
    throw DomainError("monotone_ratio requires positive parameters");
  if (t == 0.0) {
    if (limit_at_zero) return 0.0;
    throw DegenerateError("monotone_ratio undefined at t = 0 (limit is 0)");
  }
  if (!is_finite_pos(t)) throw DomainError("monotone_ratio requires t > 0");
  const double x = std::pow(t, alpha);
  return std::expm1(std::log(gamma / beta) + log_expm1(beta * x) - log_expm1(gamma * x));
}

}  // namespace sysrel
