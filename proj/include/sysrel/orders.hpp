#pragma once

// Stochastic-order verification between two system lifetimes, the
// implication-chain audit, and orthant/quadrant dependence classification.
// Grid-based checks can support or falsify an order claim, never prove it;
// verdicts record the grid and witnesses are refined by bisection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sysrel/common.hpp"
#include "sysrel/error_analysis.hpp"
#include "sysrel/grid.hpp"
#include "sysrel/model.hpp"
#include "sysrel/numeric.hpp"
#include "sysrel/rng.hpp"
#include "sysrel/system.hpp"

namespace sysrel {

/// Pointwise orders (ST, FR, RFR, MRL, AI) and ratio-monotonicity orders
/// (LR on densities, AF on failure rates). FR and AI compare reversed:
/// A precedes B when A's failure rate dominates / A's aging intensity
/// dominates. AF: A precedes B when r_A/r_B is non-decreasing.
enum class OrderRelation { ST, FR, RFR, MRL, LR, AF, AI };

inline const char* relation_name(OrderRelation r) {
  switch (r) {
    case OrderRelation::ST: return "ST";
    case OrderRelation::FR: return "FR";
    case OrderRelation::RFR: return "RFR";
    case OrderRelation::MRL: return "MRL";
    case OrderRelation::LR: return "LR";
    case OrderRelation::AF: return "AF";
    case OrderRelation::AI: return "AI";
  }
  return "?";
}

inline std::optional<OrderRelation> relation_from_name(const std::string& s) {
  for (OrderRelation r : {OrderRelation::ST, OrderRelation::FR, OrderRelation::RFR,
                          OrderRelation::MRL, OrderRelation::LR, OrderRelation::AF,
                          OrderRelation::AI}) {
    std::string name = relation_name(r);
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    if (s == name || s == lower) return r;
  }
  return std::nullopt;
}

enum class OrderDirection { A_leq_B, A_geq_B, Equal, Crossing };

inline const char* direction_name(OrderDirection d) {
  switch (d) {
    case OrderDirection::A_leq_B: return "A_leq_B";
    case OrderDirection::A_geq_B: return "A_geq_B";
    case OrderDirection::Equal: return "Equal";
    case OrderDirection::Crossing: return "Crossing";
  }
  return "?";
}

struct OrderVerdict {
  OrderRelation relation = OrderRelation::ST;
  OrderDirection direction = OrderDirection::Equal;
  std::vector<double> witnesses;  // nonempty iff Crossing
  std::size_t grid_size = 0;
};

namespace detail {

inline constexpr double order_tol_abs = 1e-9;
inline constexpr double order_tol_rel = 1e-9;
inline constexpr double ratio_slack = 1e-9;

inline int significant_sign(double a, double b) {
  const double tol = order_tol_abs + order_tol_rel * std::max(std::abs(a), std::abs(b));
  if (a - b > tol) return 1;
  if (b - a > tol) return -1;
  return 0;
}

/// Direction from per-point signs of (v_a - v_b); `reversed` flips the
/// meaning for the FR and AI relations.
template <typename Eval>
OrderVerdict pointwise_verdict(OrderRelation rel, const EvalGrid& grid, Eval&& value_at,
                               bool reversed) {
  const auto& ts = grid.points;
  std::vector<int> signs(ts.size(), 0);
  std::vector<double> va(ts.size()), vb(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto [a, b] = value_at(ts[k]);
    va[k] = a;
    vb[k] = b;
    signs[k] = significant_sign(a, b);
    if (reversed) signs[k] = -signs[k];
  }
  const bool any_pos = std::any_of(signs.begin(), signs.end(), [](int s) { return s > 0; });
  const bool any_neg = std::any_of(signs.begin(), signs.end(), [](int s) { return s < 0; });
  OrderVerdict out{rel, OrderDirection::Equal, {}, ts.size()};
  if (!any_pos && !any_neg) return out;
  if (!any_pos) {
    out.direction = OrderDirection::A_leq_B;
    return out;
  }
  if (!any_neg) {
    out.direction = OrderDirection::A_geq_B;
    return out;
  }
  out.direction = OrderDirection::Crossing;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (signs[k] != 0 && signs[k + 1] != 0 && signs[k] != signs[k + 1]) {
      auto diff = [&](double t) {
        const auto [a, b] = value_at(t);
        return a - b;
      };
      out.witnesses.push_back(bisect_sign_change(diff, ts[k], ts[k + 1], 1e-6));
    }
  }
  if (out.witnesses.empty()) {
    // Signs flip across undefined or tie points; report the offending abscissae.
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (signs[k] == (reversed ? -1 : 1)) {
        out.witnesses.push_back(ts[k]);
        break;
      }
  }
  return out;
}

/// Direction from monotonicity of a positive ratio sampled on the grid.
/// Non-increasing ratio => A_leq_B; non-decreasing => A_geq_B (callers flip
/// for AF). Drift below the slack in both directions reads as Equal.
template <typename Ratio>
OrderVerdict ratio_verdict(OrderRelation rel, const EvalGrid& grid, Ratio&& log_ratio_at,
                           bool flip) {
  const auto& ts = grid.points;
  std::vector<double> lr(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) lr[k] = log_ratio_at(ts[k]);
  bool any_up = false, any_down = false;
  std::vector<double> up_spots, down_spots;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double d = lr[k + 1] - lr[k];
    if (d > ratio_slack) {
      any_up = true;
      up_spots.push_back(0.5 * (ts[k] + ts[k + 1]));
    } else if (d < -ratio_slack) {
      any_down = true;
      down_spots.push_back(0.5 * (ts[k] + ts[k + 1]));
    }
  }
  OrderVerdict out{rel, OrderDirection::Equal, {}, ts.size()};
  if (!any_up && !any_down) return out;
  if (!any_up) out.direction = flip ? OrderDirection::A_geq_B : OrderDirection::A_leq_B;
  else if (!any_down) out.direction = flip ? OrderDirection::A_leq_B : OrderDirection::A_geq_B;
  else {
    out.direction = OrderDirection::Crossing;
    out.witnesses = up_spots;
    out.witnesses.insert(out.witnesses.end(), down_spots.begin(), down_spots.end());
    std::sort(out.witnesses.begin(), out.witnesses.end());
  }
  return out;
}

}  // namespace detail

/// Compare two system lifetimes under one stochastic order over a grid.
inline OrderVerdict compare_order(const SystemSpec& spec_a, const SystemSpec& spec_b,
                                  OrderRelation relation, const EvalGrid& grid) {
  grid.check();
  switch (relation) {
    case OrderRelation::ST:
      return detail::pointwise_verdict(
          relation, grid,
          [&](double t) { return std::pair{system_sf(spec_a, t), system_sf(spec_b, t)}; },
          false);
    case OrderRelation::FR:
      // A_leq_B when r_A >= r_B everywhere.
      return detail::pointwise_verdict(
          relation, grid,
          [&](double t) {
            return std::pair{system_function(spec_a, SysFunction::FR, t),
                             system_function(spec_b, SysFunction::FR, t)};
          },
          true);
    case OrderRelation::RFR:
      return detail::pointwise_verdict(
          relation, grid,
          [&](double t) {
            return std::pair{system_function(spec_a, SysFunction::RFR, t),
                             system_function(spec_b, SysFunction::RFR, t)};
          },
          false);
    case OrderRelation::MRL:
      return detail::pointwise_verdict(
          relation, grid,
          [&](double t) {
            return std::pair{system_function(spec_a, SysFunction::MRL, t),
                             system_function(spec_b, SysFunction::MRL, t)};
          },
          false);
    case OrderRelation::AI:
      // A_leq_B when L_A >= L_B everywhere.
      return detail::pointwise_verdict(
          relation, grid,
          [&](double t) {
            return std::pair{system_function(spec_a, SysFunction::AI, t),
                             system_function(spec_b, SysFunction::AI, t)};
          },
          true);
    case OrderRelation::LR:
      // f_A/f_B non-increasing => A_leq_B; log f = log FR + log SF.
      return detail::ratio_verdict(
          relation, grid,
          [&](double t) {
            const double la = std::log(system_function(spec_a, SysFunction::FR, t)) +
                              system_log_sf(spec_a, t);
            const double lb = std::log(system_function(spec_b, SysFunction::FR, t)) +
                              system_log_sf(spec_b, t);
            return la - lb;
          },
          false);
    case OrderRelation::AF:
      // r_A/r_B non-decreasing => A_leq_B (A ages at least as fast as B).
      return detail::ratio_verdict(
          relation, grid,
          [&](double t) {
            return std::log(system_function(spec_a, SysFunction::FR, t)) -
                   std::log(system_function(spec_b, SysFunction::FR, t));
          },
          true);
  }
  throw Error("unreachable relation");
}

// ---------------------------------------------------------------------------
// Implication-chain audit
// ---------------------------------------------------------------------------

struct ImplicationViolation {
  OrderRelation antecedent = OrderRelation::LR;
  OrderRelation consequent = OrderRelation::ST;
  OrderDirection antecedent_direction = OrderDirection::Equal;
  OrderDirection consequent_direction = OrderDirection::Equal;
  std::vector<double> witnesses;
};

struct ImplicationReport {
  std::vector<ImplicationViolation> violations;
  std::size_t edges_checked = 0;
  bool consistent() const { return violations.empty(); }
};

/// Audits the chain LR => {ST, FR, RFR, MRL}; FR => {ST, MRL}; RFR => ST;
/// AF => AI. A directional antecedent contradicts a consequent that points
/// the other way or crosses. Equal verdicts are tolerance ties and never
/// contradict anything.
inline ImplicationReport audit_implications(const std::vector<OrderVerdict>& verdicts) {
  static const std::pair<OrderRelation, OrderRelation> edges[] = {
      {OrderRelation::LR, OrderRelation::ST},  {OrderRelation::LR, OrderRelation::FR},
      {OrderRelation::LR, OrderRelation::RFR}, {OrderRelation::LR, OrderRelation::MRL},
      {OrderRelation::FR, OrderRelation::ST},  {OrderRelation::FR, OrderRelation::MRL},
      {OrderRelation::RFR, OrderRelation::ST}, {OrderRelation::AF, OrderRelation::AI},
  };
  auto find = [&](OrderRelation r) -> const OrderVerdict* {
    for (const auto& v : verdicts)
      if (v.relation == r) return &v;
    return nullptr;
  };
  ImplicationReport report;
  for (const auto& [p, q] : edges) {
    const OrderVerdict* vp = find(p);
    const OrderVerdict* vq = find(q);
    if (vp == nullptr || vq == nullptr) continue;
    if (vp->direction != OrderDirection::A_leq_B && vp->direction != OrderDirection::A_geq_B)
      continue;
    ++report.edges_checked;
    const bool compatible = vq->direction == vp->direction ||
                            vq->direction == OrderDirection::Equal;
    if (!compatible)
      report.violations.push_back(
          {p, q, vp->direction, vq->direction, vq->witnesses});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Orthant dependence
// ---------------------------------------------------------------------------

enum class DependenceClass { PUOD, NUOD, PLOD, NLOD, Independent, None };

inline const char* dependence_name(DependenceClass c) {
  switch (c) {
    case DependenceClass::PUOD: return "PUOD";
    case DependenceClass::NUOD: return "NUOD";
    case DependenceClass::PLOD: return "PLOD";
    case DependenceClass::NLOD: return "NLOD";
    case DependenceClass::Independent: return "Independent";
    case DependenceClass::None: return "None";
  }
  return "?";
}

struct DependenceLabel {
  DependenceClass label = DependenceClass::None;
  bool puod = false, nuod = false, plod = false, nlod = false;
  std::optional<std::vector<double>> counterexample;  // present iff label == None
  std::size_t sample_count = 0;
  std::vector<double> box;  // upper edges of the sampling box, when generated
};

/// Latin-hypercube sample over [0, q_i] per dimension, where q_i is the
/// 99.5th percentile of component i's true marginal.
inline std::vector<std::vector<double>> orthant_sample_box(const ValidatedModel& vm,
                                                           std::size_t count,
                                                           std::uint64_t seed,
                                                           std::vector<double>* box_out = nullptr) {
  const int n = vm.n();
  std::vector<double> hi(static_cast<std::size_t>(n), 1.0);
  for (int i = 1; i <= n; ++i) {
    double lo = 0.0, up = 1.0;
    int guard = 0;
    while (marginal_sf(vm, i, up) > 0.005 && guard++ < 1200) up *= 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + up);
      (marginal_sf(vm, i, mid) > 0.005 ? lo : up) = mid;
    }
    hi[static_cast<std::size_t>(i - 1)] = up;
  }
  if (box_out != nullptr) *box_out = hi;

  std::vector<std::vector<double>> pts(count, std::vector<double>(static_cast<std::size_t>(n)));
  for (int dim = 0; dim < n; ++dim) {
    std::vector<std::size_t> perm(count);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 shuffle_rng = derived_stream(seed, 0x1000u + static_cast<std::uint64_t>(dim));
    for (std::size_t j = count; j > 1; --j)
      std::swap(perm[j - 1], perm[shuffle_rng.next() % j]);
    SplitMix64 offset_rng = derived_stream(seed, 0x2000u + static_cast<std::uint64_t>(dim));
    for (std::size_t j = 0; j < count; ++j) {
      const double u = (static_cast<double>(perm[j]) + offset_rng.u01()) /
                       static_cast<double>(count);
      pts[j][static_cast<std::size_t>(dim)] = u * hi[static_cast<std::size_t>(dim)];
    }
  }
  return pts;
}

/// Classifies orthant dependence against the true marginals at the given
/// sample points (at least 100, spanning the orthant).
inline DependenceLabel classify_orthant_dependence(
    const ValidatedModel& vm, const std::vector<std::vector<double>>& sample_points) {
  if (sample_points.size() < 100)
    throw DomainError("classification needs at least 100 orthant sample points");
  const int n = vm.n();
  constexpr double tol = 1e-9;

  DependenceLabel out;
  out.sample_count = sample_points.size();
  out.puod = out.nuod = out.plod = out.nlod = true;
  bool sf_equal = true, cdf_equal = true;
  double worst_violation = 0.0;
  std::vector<double> worst_point;

  for (const auto& pt : sample_points) {
    if (pt.size() != static_cast<std::size_t>(n))
      throw DomainError("sample point dimension mismatch");
    const double lj = log_joint_sf(vm, pt);
    double lm = 0.0;
    double log_prod_cdf = 0.0;
    bool cdf_zero = false;
    for (int i = 1; i <= n; ++i) {
      const double lmi = marginal_log_sf(vm, i, pt[static_cast<std::size_t>(i - 1)]);
      lm += lmi;
      if (lmi == 0.0) cdf_zero = true;
      else log_prod_cdf += log1mexp(lmi);
    }
    const double sf_diff = lj - lm;  // log scale
    if (std::abs(sf_diff) > tol) sf_equal = false;
    if (sf_diff < -tol) out.puod = false;
    if (sf_diff > tol) out.nuod = false;
    if (std::abs(sf_diff) > std::abs(worst_violation)) {
      worst_violation = sf_diff;
      worst_point = pt;
    }

    const double cj = joint_cdf(vm, pt);
    const double cm = cdf_zero ? 0.0 : std::exp(log_prod_cdf);
    const double cdf_diff = cj - cm;
    const double ctol = tol * std::max(1.0, std::max(cj, cm)) + 1e-12;
    if (std::abs(cdf_diff) > ctol) cdf_equal = false;
    if (cdf_diff < -ctol) out.plod = false;
    if (cdf_diff > ctol) out.nlod = false;
  }

  if (sf_equal && cdf_equal) {
    out.label = DependenceClass::Independent;
  } else if (out.puod) {
    out.label = DependenceClass::PUOD;
  } else if (out.nuod) {
    out.label = DependenceClass::NUOD;
  } else if (out.plod) {
    out.label = DependenceClass::PLOD;
  } else if (out.nlod) {
    out.label = DependenceClass::NLOD;
  } else {
    out.label = DependenceClass::None;
    out.counterexample = worst_point;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series/parallel sign link (two components)
// ---------------------------------------------------------------------------

struct SignLinkResult {
  bool pass = false;
  std::vector<double> witnesses;
  std::size_t points_checked = 0;
};

/// For a bivariate model, the survival-function errors of the series and
/// parallel systems against the true-marginal baseline must take opposite
/// signs wherever both are nonzero.
inline SignLinkResult check_series_parallel_sign(const ValidatedModel& vm,
                                                 const EvalGrid& grid) {
  if (vm.n() != 2)
    throw UnsupportedError("the series/parallel sign link applies to two components");
  grid.check();
  constexpr double tol = 1e-9;
  SignLinkResult out;
  for (double t : grid.points) {
    double es, ep;
    try {
      es = relative_error_at(vm, Structure::Series, Baseline::TrueMarginal, SysFunction::SF, t);
      ep = relative_error_at(vm, Structure::Parallel, Baseline::TrueMarginal, SysFunction::SF, t);
    } catch (const DegenerateError&) {
      continue;
    }
    if (std::abs(es) <= tol || std::abs(ep) <= tol) continue;
    ++out.points_checked;
    if (es * ep > 0.0) out.witnesses.push_back(t);
  }
  out.pass = out.witnesses.empty();
  return out;
}

}  // namespace sysrel
