#include "harmax/differentiation.hpp"

#include <algorithm>
#include <cmath>

#include "harmax/errors.hpp"
#include "harmax/kernels.hpp"
#include "harmax/util.hpp"

namespace harmax {

double ball_average(const MetricMeasureSpace& space, const SampledFunction& f,
                    std::size_t x, double r) {
    if (f.values.size() != space.size())
        throw validation_error("function sample count does not match space");
    if (!(r > 0.0)) throw validation_error("radius must be > 0");
    std::vector<double> row(space.size());
    space.distance_row(x, row);
    const auto s = kern::active().ball_sums(row.data(), space.weights().data(),
                                            f.values.data(), space.size(), r);
    return s.weighted_sum / s.weight_sum;
}

std::vector<double> geometric_radii(double from, double to, double ratio) {
    if (!(from > 0.0 && to > 0.0 && to <= from))
        throw validation_error("need from >= to > 0");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw validation_error("ratio must lie in (0,1)");
    std::vector<double> r;
    for (double v = from; v >= to; v *= ratio) r.push_back(v);
    return r;
}

ConvergenceReport differentiation_experiment(const MetricMeasureSpace& space,
                                             const SampledFunction& f,
                                             std::span<const double> radii,
                                             std::span<const double> epsilons,
                                             unsigned threads) {
    if (f.values.size() != space.size())
        throw validation_error("function sample count does not match space");
    if (radii.empty()) throw validation_error("radius schedule is empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw validation_error("radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw validation_error("radii must be strictly decreasing");
    }
    for (double e : epsilons)
        if (!(e > 0.0)) throw validation_error("epsilons must be positive");

    const std::size_t n = space.size();
    const std::size_t nr = radii.size();

    ConvergenceReport rep;
    rep.radii.assign(radii.begin(), radii.end());
    rep.epsilons.assign(epsilons.begin(), epsilons.end());
    rep.trajectories.assign(nr, std::vector<double>(n, 0.0));
    rep.sup_deviation.assign(nr, std::vector<double>(n, 0.0));

    util::parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        std::vector<double> row(n);
        const auto& k = kern::active();
        for (std::size_t p = b; p < e; ++p) {
            space.distance_row(p, row);
            for (std::size_t i = 0; i < nr; ++i) {
                const auto s =
                    k.ball_sums(row.data(), space.weights().data(),
                                f.values.data(), n, radii[i]);
                rep.trajectories[i][p] = s.weighted_sum / s.weight_sum;
            }
            // sup over schedule radii <= radii[i] is a suffix max: the
            // schedule is decreasing, so smaller radii sit at larger i.
            double sup = 0.0;
            for (std::size_t i = nr; i-- > 0;) {
                sup = std::max(sup,
                               std::abs(rep.trajectories[i][p] - f.values[p]));
                rep.sup_deviation[i][p] = sup;
            }
        }
    });

    rep.bad_set_measure.assign(nr, std::vector<double>(epsilons.size(), 0.0));
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < epsilons.size(); ++j) {
            double m = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                if (rep.sup_deviation[i][p] > epsilons[j])
                    m += space.weight(p);
            rep.bad_set_measure[i][j] = m;
        }
    return rep;
}

} // namespace harmax
