#pragma once

#include <span>
#include <vector>

#include "harmax/maximal.hpp"
#include "harmax/space.hpp"

namespace harmax {

// Weighted mean of f over the open ball B(x, r); the ball is never empty.
double ball_average(const MetricMeasureSpace& space, const SampledFunction& f,
                    std::size_t x, double r);

// Geometric radius schedule from `from` down to `to` (ratio in (0,1)),
// largest first.
std::vector<double> geometric_radii(double from, double to, double ratio = 0.5);

// Per-point trajectories of A_r f and the measures of the bad sets
//   { x : sup over schedule radii s <= r of |A_s f(x) - f(x)| > eps }.
struct ConvergenceReport {
    std::vector<double> radii;     // strictly decreasing
    std::vector<double> epsilons;
    // bad_set_measure[i][j]: radius i, epsilon j
    std::vector<std::vector<double>> bad_set_measure;
    // trajectories[i][p]: radius i, point p
    std::vector<std::vector<double>> trajectories;
    // sup_deviation[i][p] = max over radii s <= radii[i] of |A_s f(p) - f(p)|
    std::vector<std::vector<double>> sup_deviation;
};

ConvergenceReport differentiation_experiment(const MetricMeasureSpace& space,
                                             const SampledFunction& f,
                                             std::span<const double> radii,
                                             std::span<const double> epsilons,
                                             unsigned threads = 1);

} // namespace harmax
