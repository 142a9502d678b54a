#pragma once

#include <span>

#include "narrametric/value.hpp"

namespace narrametric {

// y(x) = amplitude * exp(-decay * x) + baseline, with rate = exp(-decay).
struct DecayFit {
  double amplitude = 0;  // A >= 0
  double decay = 0;      // b > 0
  double baseline = 0;   // 0 <= C <= min(y)
  double rate = 0;       // r = exp(-b), the per-sentence decay factor
  double r_squared = 0;
  double rmse = 0;
};

struct FitOptions {
  double decay_min = 1e-3;
  double decay_max = 10.0;
  int grid_points = 400;            // log-spaced initial scan
  double relative_tolerance = 1e-6; // final bracket width relative to b
};

// Least-squares fit over x = 1..m. For fixed b the optimal (A, C) has a closed
// form under the bounds, so only b is searched: a log grid followed by golden
// section refinement around the best grid point.
//
// Undefined when m < 3 or the trajectory is flat.
OrUndefined<DecayFit> fit_decay(std::span<const double> trajectory, const FitOptions& options = {});

double evaluate_decay(const DecayFit& fit, double x);

}  // namespace narrametric
