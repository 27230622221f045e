#pragma once

#include <algorithm>
#include <cmath>

#include "cbfsim/sim_time.hpp"

namespace cbfsim {

// Contention timer bounds. dist_max is the assumed maximum radio range of
// the access technology, which is an independent parameter from the range
// the channel model actually realizes.
struct CbfParams {
  TimeUs t_max = millis(100);
  TimeUs t_min = millis(1);
  double dist_max_m = 1000.0;
};

// Contention timer: linearly decreasing from t_max at the sender's position
// down to t_min at dist_max, and t_min beyond. Farther receivers fire first.
inline TimeUs compute_cbf_timer(double dist_m, const CbfParams& p) {
  if (dist_m > p.dist_max_m) return p.t_min;
  const double span = static_cast<double>(p.t_max - p.t_min);
  const double t = static_cast<double>(p.t_max) - span * (dist_m / p.dist_max_m);
  const TimeUs rounded = static_cast<TimeUs>(std::llround(t));
  return std::clamp(rounded, p.t_min, p.t_max);
}

}  // namespace cbfsim
