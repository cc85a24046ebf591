#include "harmax/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "harmax/errors.hpp"

namespace harmax {

namespace {

std::vector<std::size_t> sort_by_radius_desc(std::span<const Ball> family) {
    std::vector<std::size_t> order(family.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&family](std::size_t a,
                                                    std::size_t b) {
        if (family[a].radius != family[b].radius)
            return family[a].radius > family[b].radius;
        return a < b;
    });
    return order;
}

} // namespace

std::optional<std::size_t> uncovered_point(const MetricMeasureSpace& space,
                                           std::span<const Ball> family,
                                           const MeasurableSet& target) {
    MeasurableSet covered(space.size());
    for (const Ball& b : family) covered = covered.unite(ball_members(space, b));
    for (std::size_t i = 0; i < space.size(); ++i)
        if (target.contains(i) && !covered.contains(i)) return i;
    return std::nullopt;
}

std::vector<std::size_t> greedy_disjoint_selection(
    const MetricMeasureSpace& space, std::span<const Ball> family) {
    const auto order = sort_by_radius_desc(family);
    MeasurableSet taken(space.size());
    std::vector<std::size_t> selected;
    for (std::size_t idx : order) {
        const MeasurableSet mem = ball_members(space, family[idx]);
        bool clash = false;
        for (std::size_t j = 0; j < space.size() && !clash; ++j)
            clash = mem.contains(j) && taken.contains(j);
        if (clash) continue;
        taken = taken.unite(mem);
        selected.push_back(idx);
    }
    return selected;
}

bool greedy_maximal(const MetricMeasureSpace& space,
                    std::span<const Ball> family,
                    std::span<const std::size_t> selection) {
    std::vector<MeasurableSet> sel_members;
    sel_members.reserve(selection.size());
    for (std::size_t s : selection)
        sel_members.push_back(ball_members(space, family[s]));
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (std::find(selection.begin(), selection.end(), i) !=
            selection.end())
            continue;
        const MeasurableSet mem = ball_members(space, family[i]);
        bool blocked = false;
        for (std::size_t k = 0; k < selection.size() && !blocked; ++k) {
            if (family[selection[k]].radius < family[i].radius) continue;
            blocked = !mem.intersect(sel_members[k]).empty();
        }
        if (!blocked) return false;
    }
    return true;
}

CoverSelection wiener_select(const MetricMeasureSpace& space,
                             std::span<const Ball> family,
                             const MeasurableSet& target, double dilation) {
    if (family.empty()) throw validation_error("ball family is empty");
    if (!(dilation >= 1.0)) throw validation_error("dilation must be >= 1");
    if (auto missed = uncovered_point(space, family, target))
        throw validation_error("family does not cover target: point " +
                               std::to_string(*missed) + " is uncovered");

    CoverSelection sel;
    sel.dilation_factor = dilation;
    sel.selected = greedy_disjoint_selection(space, family);

    // certificates, recomputed from scratch
    MeasurableSet seen(space.size());
    sel.pairwise_disjoint = true;
    for (std::size_t s : sel.selected) {
        const MeasurableSet mem = ball_members(space, family[s]);
        if (!mem.intersect(seen).empty()) sel.pairwise_disjoint = false;
        sel.selected_mass += space.measure(mem);
        seen = seen.unite(mem);
    }
    MeasurableSet dilated_union(space.size());
    for (std::size_t s : sel.selected)
        dilated_union = dilated_union.unite(
            ball_members(space, family[s].dilated(dilation)));
    sel.residual = target.subtract(dilated_union);
    sel.dilated_covers_target = sel.residual.empty();
    return sel;
}

CoverSelection vitali_select(const MetricMeasureSpace& space,
                             std::span<const Ball> family,
                             double mass_target) {
    if (family.empty()) throw validation_error("ball family is empty");
    CoverSelection sel;
    sel.mass_target = mass_target;
    sel.selected = greedy_disjoint_selection(space, family);
    MeasurableSet seen(space.size());
    sel.pairwise_disjoint = true;
    for (std::size_t s : sel.selected) {
        const MeasurableSet mem = ball_members(space, family[s]);
        if (!mem.intersect(seen).empty()) sel.pairwise_disjoint = false;
        sel.selected_mass += space.measure(mem);
        seen = seen.unite(mem);
    }
    sel.residual = MeasurableSet(space.size());
    sel.mass_target_met = sel.selected_mass > mass_target;
    return sel;
}

double density_radius(const MetricMeasureSpace& space, const MeasurableSet& K,
                      std::size_t x, double cap, double threshold) {
    if (x >= space.size()) throw validation_error("point index out of range");
    if (!K.contains(x)) throw validation_error("density_radius requires x in K");
    if (!(cap > 0.0)) throw validation_error("cap must be > 0");

    std::vector<double> chi(space.size(), 0.0);
    for (std::size_t i = 0; i < space.size(); ++i)
        if (K.contains(i)) chi[i] = 1.0;
    const BallSweep sw = ball_sweep(space, x, chi);

    double last_good = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < sw.levels(); ++k) {
        if (sw.thresholds[k] > cap) break;
        if (!(sw.average(k) > threshold)) break;
        last_good = sw.thresholds[k];
        any = true;
    }
    return any ? last_good : 0.0;
}

std::optional<RefinementViolation> verify_refined_cover(
    const MetricMeasureSpace& space, const MeasurableSet& K,
    const RefinedCover& cover) {
    MeasurableSet seen(space.size());
    double total = 0.0;
    for (std::size_t j = 0; j < cover.balls.size(); ++j) {
        const MeasurableSet mem = ball_members(space, cover.balls[j]);
        if (!mem.intersect(seen).empty())
            return RefinementViolation{
                "disjoint", "ball " + std::to_string(j) +
                                " overlaps an earlier ball"};
        seen = seen.unite(mem);
        const double m = space.measure(mem);
        const double mk = space.measure(mem.intersect(K));
        total += m;
        if (!(mk / m > cover.threshold))
            return RefinementViolation{
                "density", "ball " + std::to_string(j) + " has density " +
                               std::to_string(mk / m)};
    }
    const double km = space.measure(K);
    if (!(total > cover.threshold * km))
        return RefinementViolation{
            "mass", "total mass " + std::to_string(total) +
                        " does not exceed " + std::to_string(cover.threshold) +
                        " * |K| = " + std::to_string(cover.threshold * km)};
    return std::nullopt;
}

RefinedCover refine_cover(const MetricMeasureSpace& space,
                          const MeasurableSet& K, std::span<const Ball> family,
                          double threshold) {
    if (family.empty()) throw validation_error("ball family is empty");
    if (K.empty()) throw validation_error("K is empty");
    if (auto missed = uncovered_point(space, family, K))
        throw validation_error("family does not cover K: point " +
                               std::to_string(*missed) + " is uncovered");

    MeasurableSet family_union(space.size());
    for (const Ball& b : family)
        family_union = family_union.unite(ball_members(space, b));

    std::vector<double> chi(space.size(), 0.0);
    for (std::size_t i = 0; i < space.size(); ++i)
        if (K.contains(i)) chi[i] = 1.0;

    // Candidates per point of K: the largest admissible density scale plus
    // the singleton scale. The singleton fallback is what makes the greedy
    // pass below an exhaustion: a K-point left uncovered always still has
    // its own singleton ball available, so the selection ends up covering
    // all of K and condition (c) follows from disjointness.
    std::vector<Ball> candidates;
    std::size_t capped = 0;
    std::vector<double> row(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (!K.contains(x)) continue;
        space.distance_row(x, row);
        double cap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < space.size(); ++j)
            if (!family_union.contains(j)) cap = std::min(cap, row[j]);

        const BallSweep sw = ball_sweep(space, x, chi);
        std::ptrdiff_t best_capped = -1;
        std::ptrdiff_t best_uncapped = -1;
        for (std::size_t k = 0; k < sw.levels(); ++k) {
            if (!(sw.average(k) > threshold)) break;
            best_uncapped = static_cast<std::ptrdiff_t>(k);
            if (sw.thresholds[k] < cap) best_capped = static_cast<std::ptrdiff_t>(k);
        }
        if (best_uncapped > best_capped) ++capped;
        if (best_capped < 0) continue;  // even the singleton shell fails

        const auto open_radius = [&](std::size_t k) {
            return std::min(sw.open_radius_for_level(k), cap);
        };
        const std::size_t k_best = static_cast<std::size_t>(best_capped);
        candidates.push_back({x, open_radius(k_best)});
        if (k_best != 0) candidates.push_back({x, open_radius(0)});
    }

    RefinedCover out;
    out.threshold = threshold;
    out.target_mass = space.measure(K);
    out.capped_points = capped;
    for (std::size_t idx : greedy_disjoint_selection(space, candidates)) {
        const Ball& b = candidates[idx];
        const MeasurableSet mem = ball_members(space, b);
        out.balls.push_back(b);
        const double m = space.measure(mem);
        out.density_ratios.push_back(space.measure(mem.intersect(K)) / m);
        out.total_mass += m;
    }

    if (auto bad = verify_refined_cover(space, K, out))
        throw algorithm_failure("refinement violates condition (" +
                                bad->condition + "): " + bad->detail);
    return out;
}

} // namespace harmax
