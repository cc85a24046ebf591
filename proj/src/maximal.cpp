#include "harmax/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "harmax/covering.hpp"
#include "harmax/errors.hpp"
#include "harmax/kernels.hpp"
#include "harmax/util.hpp"

namespace harmax {

namespace {

std::vector<double> abs_values(const MetricMeasureSpace& space,
                               const SampledFunction& f) {
    if (f.values.size() != space.size())
        throw validation_error("function sample count does not match space");
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
    return a;
}

double sweep_max_average(const BallSweep& sw) {
    double best = 0.0;
    for (std::size_t k = 0; k < sw.levels(); ++k)
        best = std::max(best, sw.average(k));
    return best;
}

} // namespace

double hl_maximal(const MetricMeasureSpace& space, const SampledFunction& f,
                  std::size_t x) {
    const std::vector<double> a = abs_values(space, f);
    return sweep_max_average(ball_sweep(space, x, a));
}

SampledFunction maximal_field(const MetricMeasureSpace& space,
                              const SampledFunction& f, unsigned threads) {
    const std::vector<double> a = abs_values(space, f);
    SampledFunction out;
    out.tag = "M[" + f.tag + "]";
    out.values.resize(space.size());
    util::parallel_for(space.size(), threads,
                       [&](std::size_t b, std::size_t e) {
                           for (std::size_t i = b; i < e; ++i)
                               out.values[i] =
                                   sweep_max_average(ball_sweep(space, i, a));
                       });
    return out;
}

double l1_norm(const MetricMeasureSpace& space, const SampledFunction& f) {
    if (f.values.size() != space.size())
        throw validation_error("function sample count does not match space");
    double s = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        s += std::abs(f.values[i]) * space.weight(i);
    return s;
}

WeakTypeReport distribution(const MetricMeasureSpace& space,
                            const SampledFunction& g,
                            std::span<const double> lambdas,
                            std::optional<double> ref_l1) {
    const std::vector<double> a = abs_values(space, g);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0))
            throw validation_error("lambdas must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw validation_error("lambdas must be sorted ascending");
    }
    WeakTypeReport rep;
    rep.lambdas.assign(lambdas.begin(), lambdas.end());
    rep.ref_l1 = ref_l1;
    const auto& k = kern::active();
    for (double lam : lambdas) {
        const double m =
            k.mass_above(a.data(), space.weights().data(), a.size(), lam);
        rep.superlevel_measures.push_back(m);
        if (ref_l1) {
            const double c = *ref_l1 > 0.0 ? lam * m / *ref_l1 : 0.0;
            rep.constants.push_back(c);
            rep.sup_constant = std::max(rep.sup_constant, c);
        }
    }
    return rep;
}

RestrictedWeakTypeResult restricted_weak_type_test(
    const MetricMeasureSpace& space, const MeasurableSet& E,
    std::span<const double> lambdas, std::optional<double> slack_measure,
    unsigned threads) {
    const double e_mass = space.measure(E);
    if (!(e_mass > 0.0)) throw validation_error("E must have positive measure");
    for (double lam : lambdas)
        if (!(lam > 0.0 && lam < 1.0))
            throw validation_error(
                "lambda must lie in (0,1): M chi_E never exceeds 1");

    SampledFunction chi{std::vector<double>(space.size(), 0.0), "chi_E"};
    for (std::size_t i = 0; i < space.size(); ++i)
        if (E.contains(i)) chi.values[i] = 1.0;
    const SampledFunction field = maximal_field(space, chi, threads);

    double w_max = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        w_max = std::max(w_max, space.weight(i));

    RestrictedWeakTypeResult res;
    res.set_mass = e_mass;
    res.slack_measure = slack_measure.value_or(2.0 * w_max);
    res.report = distribution(space, field, lambdas, e_mass);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double bound = 4.0 * e_mass / lambdas[i];
        const bool ok =
            res.report.superlevel_measures[i] <= bound + res.slack_measure;
        res.bounds.push_back(bound);
        res.passes.push_back(ok);
        res.all_pass = res.all_pass && ok;
    }
    return res;
}

std::optional<std::string> verify_chain(const ChainTrace& t) {
    // Comparisons carry a relative epsilon: the two sides are sums of the
    // same weights taken in different orders.
    if (!util::leq_tol(t.s_mass, 2.0 * t.k_mass))
        return "link 1 failed: |S_lambda| > 2|K|";
    if (!util::leq_tol(2.0 * t.k_mass, 4.0 * t.sum_balls))
        return "link 2 failed: 2|K| > 4 sum|B_j|";
    if (!util::leq_tol(t.sum_balls, t.sum_balls_e / t.lambda))
        return "link 3 failed: sum|B_j| > (1/lambda) sum|B_j ∩ E|";
    if (!util::leq_tol(t.sum_balls_e, t.e_mass))
        return "link 4 failed: sum|B_j ∩ E| > |E|";
    return std::nullopt;
}

ChainTrace weak_type_pipeline(const MetricMeasureSpace& space,
                              const MeasurableSet& E, double lambda,
                              unsigned threads) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("lambda must lie in (0,1)");
    const double e_mass = space.measure(E);
    if (!(e_mass > 0.0)) throw validation_error("E must have positive measure");

    SampledFunction chi{std::vector<double>(space.size(), 0.0), "chi_E"};
    for (std::size_t i = 0; i < space.size(); ++i)
        if (E.contains(i)) chi.values[i] = 1.0;
    const SampledFunction field = maximal_field(space, chi, threads);

    ChainTrace t;
    t.lambda = lambda;
    t.e_mass = e_mass;

    MeasurableSet s_lambda(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        if (field.values[i] > lambda) s_lambda.add(i);
    t.s_mass = space.measure(s_lambda);
    // On a finite space the compact K with |K| > |S|/2 degenerates to S itself;
    // the factor 2 stays in the chain to match the printed constant.
    const MeasurableSet& K = s_lambda;
    t.k_mass = t.s_mass;

    // Witness balls: for each x in K some realized scale averages chi_E above
    // lambda. Offer the greedy both the largest and the smallest such scale;
    // for x in E the smallest is the singleton, which keeps the selection an
    // exhaustion of K ∩ E.
    std::vector<Ball> candidates;
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (!K.contains(x)) continue;
        const BallSweep sw = ball_sweep(space, x, chi.values);
        std::ptrdiff_t lo = -1, hi = -1;
        for (std::size_t k = 0; k < sw.levels(); ++k) {
            if (sw.average(k) > lambda) {
                if (lo < 0) lo = static_cast<std::ptrdiff_t>(k);
                hi = static_cast<std::ptrdiff_t>(k);
            }
        }
        if (hi < 0)
            throw algorithm_failure(
                "no witness ball at a point of S_lambda; maximal field and "
                "sweep disagree");
        candidates.push_back(
            {x, sw.open_radius_for_level(static_cast<std::size_t>(hi))});
        if (lo != hi)
            candidates.push_back(
                {x, sw.open_radius_for_level(static_cast<std::size_t>(lo))});
    }

    for (std::size_t idx : greedy_disjoint_selection(space, candidates)) {
        const Ball& b = candidates[idx];
        const MeasurableSet mem = ball_members(space, b);
        t.selected.push_back(b);
        t.sum_balls += space.measure(mem);
        t.sum_balls_e += space.measure(mem.intersect(E));
    }

    t.links[0] = util::leq_tol(t.s_mass, 2.0 * t.k_mass);
    t.links[1] = util::leq_tol(2.0 * t.k_mass, 4.0 * t.sum_balls);
    t.links[2] = util::leq_tol(t.sum_balls, t.sum_balls_e / lambda);
    t.links[3] = util::leq_tol(t.sum_balls_e, t.e_mass);
    t.all_hold = t.links[0] && t.links[1] && t.links[2] && t.links[3];

    if (auto bad = verify_chain(t)) throw algorithm_failure(*bad);
    return t;
}

} // namespace harmax
