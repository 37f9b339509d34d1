#pragma once

// Sparse rate maps indexed by nonempty component subsets, the common
// parameterization of the shock-model families. Subsets are held as bit
// masks over components 1..n (n <= 32 representable; expansions cap at 20).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sysrel/common.hpp"

namespace sysrel {

inline constexpr int max_expansion_components = 20;

/// Nonempty subset of {1..n} as a strictly increasing index list.
struct SubsetKey {
  std::vector<int> indices;

  static SubsetKey from_mask(std::uint32_t mask) {
    SubsetKey key;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1u) key.indices.push_back(i + 1);
    return key;
  }

  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (int i : indices) m |= (1u << (i - 1));
    return m;
  }

  void check(int n) const {
    if (indices.empty()) throw InvalidParameter("subset", "must be nonempty");
    int prev = 0;
    for (int i : indices) {
      if (i <= prev) throw InvalidParameter("subset", "indices must be strictly increasing");
      if (i < 1 || i > n)
        throw InvalidParameter("subset", "index " + std::to_string(i) + " outside [1," +
                                             std::to_string(n) + "]");
      prev = i;
    }
  }

  /// Comma-joined ascending indices, e.g. "1,3".
  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(indices[k]);
    }
    return s;
  }
};

/// Nonnegative rates attached to component subsets; absent subsets carry
/// rate zero. Entries are kept sorted by mask so that iteration order (and
/// everything derived from it, samplers included) is deterministic.
class SubsetRateMap {
 public:
  SubsetRateMap() = default;

  SubsetRateMap(int n, std::vector<std::pair<SubsetKey, double>> entries) : n_(n) {
    for (const auto& [key, rate] : entries) {
      key.check(n);
      entries_.emplace_back(key.mask(), rate);
    }
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t k = 1; k < entries_.size(); ++k)
      if (entries_[k].first == entries_[k - 1].first)
        throw InvalidParameter("rates", "duplicate subset key '" +
                                            SubsetKey::from_mask(entries_[k].first).to_string() +
                                            "'");
    ensure_singletons();
  }

  int n() const { return n_; }
  const std::vector<std::pair<std::uint32_t, double>>& entries() const { return entries_; }

  double rate(std::uint32_t mask) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(),
                               std::make_pair(mask, -inf_value));
    return (it != entries_.end() && it->first == mask) ? it->second : 0.0;
  }

  /// Sum of every rate in the map (aggregate shock rate).
  double total() const {
    double s = 0.0;
    for (const auto& [mask, rate] : entries_) s += rate;
    return s;
  }

  /// Sum of rates over subsets containing component i (its marginal rate).
  double covering_total(int i) const {
    const std::uint32_t bit = 1u << (i - 1);
    double s = 0.0;
    for (const auto& [mask, rate] : entries_)
      if (mask & bit) s += rate;
    return s;
  }

  std::vector<double> singleton_rates() const {
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (const auto& [mask, rate] : entries_)
      if (std::popcount(mask) == 1) out[std::countr_zero(mask)] = rate;
    return out;
  }

  bool has_interactions() const {
    for (const auto& [mask, rate] : entries_)
      if (std::popcount(mask) > 1 && rate > 0.0) return true;
    return false;
  }

  void check() const {
    if (n_ < 1) throw InvalidParameter("n", "component count must be >= 1");
    if (n_ > 31) throw InvalidParameter("n", "component count must be <= 31");
    const std::uint32_t full = (1u << n_) - 1u;
    bool any_positive = false;
    for (const auto& [mask, rate] : entries_) {
      if (mask == 0 || (mask & ~full) != 0)
        throw InvalidParameter("rates", "subset outside component range");
      if (!std::isfinite(rate) || rate < 0.0)
        throw InvalidParameter("rates", "rate for subset '" +
                                            SubsetKey::from_mask(mask).to_string() +
                                            "' must be finite and >= 0");
      any_positive = any_positive || rate > 0.0;
    }
    if (!any_positive) throw InvalidParameter("rates", "at least one rate must be positive");
  }

 private:
  void ensure_singletons() {
    for (int i = 0; i < n_; ++i) {
      const std::uint32_t bit = 1u << i;
      auto it = std::lower_bound(entries_.begin(), entries_.end(),
                                 std::make_pair(bit, -inf_value));
      if (it == entries_.end() || it->first != bit) entries_.insert(it, {bit, 0.0});
    }
  }

  int n_ = 0;
  std::vector<std::pair<std::uint32_t, double>> entries_;
};

}  // namespace sysrel
