#include "narrametric/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "narrametric/error.hpp"

namespace narrametric {

namespace {

struct LinearPart {
  double amplitude = 0;
  double baseline = 0;
  double sse = std::numeric_limits<double>::infinity();
};

// Best (A, C) for a fixed decay b under A >= 0 and 0 <= C <= c_max. The
// objective is a convex quadratic over a box, so the optimum is either the
// unconstrained solution or lies on one of the three active edges.
class Subproblem {
 public:
  Subproblem(std::span<const double> y, double c_max) : y_(y), c_max_(c_max) {
    for (double v : y_) mean_ += v;
    mean_ /= static_cast<double>(y_.size());
  }

  LinearPart solve(double b) const {
    const std::size_t m = y_.size();
    std::vector<double> e(m);
    double se = 0, see = 0, sey = 0;
    for (std::size_t i = 0; i < m; ++i) {
      e[i] = std::exp(-b * static_cast<double>(i + 1));
      se += e[i];
      see += e[i] * e[i];
      sey += e[i] * y_[i];
    }
    const double n = static_cast<double>(m);
    const double sy = mean_ * n;

    LinearPart best;
    auto consider = [&](double a, double c) {
      double sse = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = a * e[i] + c - y_[i];
        sse += r * r;
      }
      if (sse < best.sse) best = {a, c, sse};
    };

    const double det = n * see - se * se;
    if (det > 0) {
      const double a = (n * sey - se * sy) / det;
      const double c = (see * sy - se * sey) / det;
      if (a >= 0 && c >= 0 && c <= c_max_) consider(a, c);
    }
    if (see > 0) {
      consider(std::max(0.0, sey / see), 0.0);
      consider(std::max(0.0, (sey - c_max_ * se) / see), c_max_);
    }
    consider(0.0, std::clamp(mean_, 0.0, c_max_));
    return best;
  }

 private:
  std::span<const double> y_;
  double c_max_;
  double mean_ = 0;
};

}  // namespace

OrUndefined<DecayFit> fit_decay(std::span<const double> trajectory, const FitOptions& options) {
  for (double v : trajectory) {
    if (!std::isfinite(v) || v <= 0) throw InputError("trajectory values must be positive and finite");
  }
  if (trajectory.size() < 3) return Undefined{"too few sentences to fit"};
  const auto [lo_it, hi_it] = std::minmax_element(trajectory.begin(), trajectory.end());
  const double y_min = *lo_it;
  const double y_max = *hi_it;
  if (y_max - y_min < 1e-6 * y_max) return Undefined{"flat trajectory, r unidentifiable"};

  const Subproblem sub(trajectory, y_min);
  const int points = std::max(options.grid_points, 3);
  const double log_lo = std::log(options.decay_min);
  const double log_hi = std::log(options.decay_max);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
  }

  std::size_t best_index = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sse = sub.solve(grid[i]).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_index = i;
    }
  }

  // Golden-section search between the neighbours of the best grid point.
  double lo = grid[best_index == 0 ? 0 : best_index - 1];
  double hi = grid[std::min(best_index + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = sub.solve(x1).sse;
  double f2 = sub.solve(x2).sse;
  while (hi - lo > options.relative_tolerance * 0.5 * (hi + lo)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = sub.solve(x1).sse;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = sub.solve(x2).sse;
    }
  }
  double b = 0.5 * (lo + hi);
  LinearPart part = sub.solve(b);
  if (best_sse < part.sse) {
    b = grid[best_index];
    part = sub.solve(b);
  }

  const double m = static_cast<double>(trajectory.size());
  double mean = 0;
  for (double v : trajectory) mean += v;
  mean /= m;
  double sst = 0;
  for (double v : trajectory) sst += (v - mean) * (v - mean);

  DecayFit fit;
  fit.amplitude = part.amplitude;
  fit.decay = b;
  fit.baseline = part.baseline;
  fit.rate = std::exp(-b);
  fit.r_squared = 1.0 - part.sse / sst;
  fit.rmse = std::sqrt(part.sse / m);
  return fit;
}

double evaluate_decay(const DecayFit& fit, double x) {
  return fit.amplitude * std::exp(-fit.decay * x) + fit.baseline;
}

}  // namespace narrametric
