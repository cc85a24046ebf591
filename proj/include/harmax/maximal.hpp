#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmax/space.hpp"

namespace harmax {

struct SampledFunction {
    std::vector<double> values;
    std::string tag;
};

// Distribution-function samples and the weak-type constants they imply.
struct WeakTypeReport {
    std::vector<double> lambdas;
    std::vector<double> superlevel_measures;  // mu{ |g| > lambda }
    std::vector<double> constants;  // lambda * mu{>lambda} / ref_l1, if ref set
    double sup_constant = 0.0;
    std::optional<double> ref_l1;
};

// Centered Hardy-Littlewood maximal function at one point: the exact sup of
// ball averages of |f| over the realized radii from x.
double hl_maximal(const MetricMeasureSpace& space, const SampledFunction& f,
                  std::size_t x);

SampledFunction maximal_field(const MetricMeasureSpace& space,
                              const SampledFunction& f, unsigned threads = 1);

double l1_norm(const MetricMeasureSpace& space, const SampledFunction& f);

WeakTypeReport distribution(const MetricMeasureSpace& space,
                            const SampledFunction& g,
                            std::span<const double> lambdas,
                            std::optional<double> ref_l1 = std::nullopt);

// One row per lambda of the restricted weak-type check against the constant 4.
struct RestrictedWeakTypeResult {
    WeakTypeReport report;        // ref_l1 = |E|
    std::vector<double> bounds;   // 4 |E| / lambda
    std::vector<bool> passes;     // |S_lambda| <= bound + slack
    double slack_measure = 0.0;   // discretization slack, in measure units
    double set_mass = 0.0;        // |E|
    bool all_pass = true;
};

// Computes S_lambda = { M chi_E > lambda } for each lambda in (0,1) and tests
// |S_lambda| <= 4 |E| / lambda + slack. Slack defaults to two boundary cells.
RestrictedWeakTypeResult restricted_weak_type_test(
    const MetricMeasureSpace& space, const MeasurableSet& E,
    std::span<const double> lambdas,
    std::optional<double> slack_measure = std::nullopt, unsigned threads = 1);

// Trace of the restricted weak-type chain
//   |S_lambda| <= 2|K| <= 4 sum|B_j| <= (4/lambda) sum|B_j ∩ E| <= 4|E|/lambda
// run as an algorithm: witness balls with chi_E-average > lambda at every
// point of K, then a greedy disjoint refinement of the witness family.
struct ChainTrace {
    double lambda = 0.0;
    double s_mass = 0.0;       // |S_lambda|
    double k_mass = 0.0;       // |K| (= |S_lambda| on a finite space)
    double sum_balls = 0.0;    // sum |B_j|
    double sum_balls_e = 0.0;  // sum |B_j ∩ E|
    double e_mass = 0.0;       // |E|
    std::vector<Ball> selected;
    std::array<bool, 4> links{};
    bool all_hold = false;
};

std::optional<std::string> verify_chain(const ChainTrace& t);

ChainTrace weak_type_pipeline(const MetricMeasureSpace& space,
                              const MeasurableSet& E, double lambda,
                              unsigned threads = 1);

} // namespace harmax
