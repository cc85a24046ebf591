#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmax/space.hpp"

namespace harmax {

// Result of a greedy disjoint ball selection. `selected` holds indices into
// the input family in selection order. Certificates are recomputed from the
// selection, not assumed from the construction.
struct CoverSelection {
    std::vector<std::size_t> selected;
    double dilation_factor = 3.0;
    bool pairwise_disjoint = false;
    double selected_mass = 0.0;   // sum of |B_j| over the selection
    MeasurableSet residual;       // target minus the union of dilated balls
    bool dilated_covers_target = false;
    // vitali_select bookkeeping
    double mass_target = 0.0;
    bool mass_target_met = false;
};

// Output of the refinement construction: pairwise disjoint balls, each more
// than half-filled by K, together carrying more than half of K's mass.
struct RefinedCover {
    std::vector<Ball> balls;
    std::vector<double> density_ratios;  // |C_j ∩ K| / |C_j|
    double total_mass = 0.0;             // sum of |C_j|
    double target_mass = 0.0;            // |K|
    double threshold = 0.5;
    // points whose density radius was shortened to keep the ball inside the
    // union of the input family
    std::size_t capped_points = 0;
};

// First target point not covered by the union of family members, if any.
std::optional<std::size_t> uncovered_point(const MetricMeasureSpace& space,
                                           std::span<const Ball> family,
                                           const MeasurableSet& target);

// Greedy selection: radius descending (ties by index ascending), keep a ball
// iff its member set meets no previously kept ball.
std::vector<std::size_t> greedy_disjoint_selection(
    const MetricMeasureSpace& space, std::span<const Ball> family);

// Every unselected family ball shares a member with a selected ball of radius
// >= its own; this is the property the 3r dilation argument rests on.
bool greedy_maximal(const MetricMeasureSpace& space,
                    std::span<const Ball> family,
                    std::span<const std::size_t> selection);

// Wiener-type selection from a family covering `target`. With dilation >= 3
// the dilated selection covers the target and the residual is empty.
CoverSelection wiener_select(const MetricMeasureSpace& space,
                             std::span<const Ball> family,
                             const MeasurableSet& target,
                             double dilation = 3.0);

// Same greedy selection; reports whether the selected mass exceeds
// mass_target instead of checking coverage.
CoverSelection vitali_select(const MetricMeasureSpace& space,
                             std::span<const Ball> family,
                             double mass_target);

// Largest realized radius r <= cap such that every realized scale s <= r has
// |B(x,s) ∩ K| / |B(x,s)| > threshold. Scales are the closed balls at the
// distinct distances from x.
double density_radius(const MetricMeasureSpace& space, const MeasurableSet& K,
                      std::size_t x, double cap, double threshold = 0.5);

struct RefinementViolation {
    std::string condition;  // "disjoint" | "density" | "mass"
    std::string detail;
};

std::optional<RefinementViolation> verify_refined_cover(
    const MetricMeasureSpace& space, const MeasurableSet& K,
    const RefinedCover& cover);

// The refinement construction: per-point density balls (capped so each ball
// stays inside the union of the family), singleton-scale fallbacks, then
// greedy disjoint selection. Certifies disjointness, per-ball density, and
// total mass before returning; throws algorithm_failure otherwise.
RefinedCover refine_cover(const MetricMeasureSpace& space,
                          const MeasurableSet& K, std::span<const Ball> family,
                          double threshold = 0.5);

} // namespace harmax
