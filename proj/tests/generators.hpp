#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "harmax/covering.hpp"
#include "harmax/space.hpp"

// Seeded instance generators shared by the unit and acceptance suites.

namespace harmax::testgen {

inline MetricMeasureSpace random_grid(std::mt19937_64& rng, int dim,
                                      std::size_t max_cells_1d = 256) {
    std::uniform_real_distribution<double> lo_d(-4.0, 0.0);
    std::uniform_real_distribution<double> len_d(2.0, 8.0);
    std::vector<double> lo(dim), hi(dim);
    std::vector<std::size_t> cells(dim);
    for (int a = 0; a < dim; ++a) {
        lo[a] = lo_d(rng);
        hi[a] = lo[a] + len_d(rng);
    }
    if (dim == 1) {
        std::uniform_int_distribution<std::size_t> c(32, max_cells_1d);
        cells[0] = c(rng);
    } else if (dim == 2) {
        std::uniform_int_distribution<std::size_t> c(8, 20);
        for (int a = 0; a < 2; ++a) cells[a] = c(rng);
    } else {
        std::uniform_int_distribution<std::size_t> c(4, 8);
        for (int a = 0; a < 3; ++a) cells[a] = c(rng);
    }
    return MetricMeasureSpace::uniform_grid(lo, hi, cells);
}

// Small cloud with integer weights; with integer-valued samples every ball
// average is an exact rational, so independently coded sweeps must agree
// bitwise.
inline MetricMeasureSpace random_cloud(std::mt19937_64& rng, int dim,
                                       std::size_t n) {
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    std::uniform_int_distribution<int> w(1, 8);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < dim; ++a) pts[i][a] = c(rng);
        weights[i] = static_cast<double>(w(rng));
    }
    return MetricMeasureSpace::from_points(pts, weights);
}

inline std::vector<double> random_integer_values(std::mt19937_64& rng,
                                                 std::size_t n) {
    std::uniform_int_distribution<int> v(-10, 10);
    std::vector<double> out(n);
    for (auto& x : out) x = static_cast<double>(v(rng));
    return out;
}

inline MeasurableSet random_nonempty_subset(std::mt19937_64& rng,
                                            const MetricMeasureSpace& space,
                                            double keep_prob = 0.3) {
    std::bernoulli_distribution keep(keep_prob);
    MeasurableSet s(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        if (keep(rng)) s.add(i);
    if (s.empty()) {
        std::uniform_int_distribution<std::size_t> p(0, space.size() - 1);
        s.add(p(rng));
    }
    return s;
}

// Union of 1..4 random coordinate intervals on a 1-d grid; never empty.
inline MeasurableSet random_interval_union(std::mt19937_64& rng,
                                           const MetricMeasureSpace& space) {
    const double lo = space.coord(0, 0);
    const double hi = space.coord(space.size() - 1, 0);
    std::uniform_int_distribution<int> n_iv(1, 4);
    std::uniform_real_distribution<double> pos(lo, hi);
    std::uniform_real_distribution<double> len(0.05 * (hi - lo),
                                               0.35 * (hi - lo));
    MeasurableSet s(space.size());
    const int k = n_iv(rng);
    for (int i = 0; i < k; ++i) {
        const double a = pos(rng);
        const double b = a + len(rng);
        for (std::size_t p = 0; p < space.size(); ++p)
            if (space.coord(p, 0) >= a && space.coord(p, 0) <= b) s.add(p);
    }
    if (s.empty()) s.add(space.size() / 2);
    return s;
}

// Random ball family guaranteed to cover `target`: random balls first, then
// a pass adding balls at still-uncovered target points.
inline std::vector<Ball> random_covering_family(std::mt19937_64& rng,
                                                const MetricMeasureSpace& space,
                                                const MeasurableSet& target,
                                                std::size_t max_random_balls) {
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    std::uniform_real_distribution<double> rad(0.1, 2.5);
    std::vector<Ball> family;
    std::uniform_int_distribution<std::size_t> nb(1, max_random_balls);
    const std::size_t k = nb(rng);
    for (std::size_t i = 0; i < k; ++i)
        family.push_back({pick(rng), rad(rng)});
    for (;;) {
        auto missed = uncovered_point(space, family, target);
        if (!missed) break;
        family.push_back({*missed, rad(rng)});
    }
    return family;
}

} // namespace harmax::testgen
