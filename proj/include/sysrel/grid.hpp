#pragma once

// Evaluation grids: strictly increasing positive time points.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sysrel/common.hpp"

namespace sysrel {

struct EvalGrid {
  std::vector<double> points;

  static EvalGrid linear(double start, double stop, std::size_t count) {
    EvalGrid g;
    g.points.resize(count);
    for (std::size_t k = 0; k < count; ++k)
      g.points[k] = start + (stop - start) * static_cast<double>(k) /
                                static_cast<double>(count - 1);
    g.points.front() = start;
    g.points.back() = stop;
    g.check();
    return g;
  }

  static EvalGrid log_spaced(double start, double stop, std::size_t count) {
    EvalGrid g;
    g.points.resize(count);
    const double la = std::log(start), lb = std::log(stop);
    for (std::size_t k = 0; k < count; ++k)
      g.points[k] = std::exp(la + (lb - la) * static_cast<double>(k) /
                                      static_cast<double>(count - 1));
    g.points.front() = start;
    g.points.back() = stop;
    g.check();
    return g;
  }

  std::size_t size() const { return points.size(); }

  void check() const {
    if (points.size() < 2) throw InvalidParameter("grid", "needs at least two points");
    double prev = 0.0;
    for (double t : points) {
      if (!is_finite_pos(t)) throw InvalidParameter("grid", "points must be finite and > 0");
      if (t <= prev) throw InvalidParameter("grid", "points must be strictly increasing");
      prev = t;
    }
  }
};

/// Library default: 200 log-spaced points on [0.01, 10].
inline EvalGrid default_grid() { return EvalGrid::log_spaced(0.01, 10.0, 200); }

}  // namespace sysrel
