#include "harmax/io.hpp"

#include <cmath>
#include <ostream>

#include "harmax/errors.hpp"
#include "harmax/util.hpp"

namespace harmax::io {

using nlohmann::json;
using util::fmt_g17;

namespace {

const json& need(const json& j, const char* key) {
    if (!j.contains(key))
        throw validation_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<double> doubles(const json& j, const char* what) {
    if (!j.is_array())
        throw validation_error(std::string(what) + " must be an array");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

} // namespace

MetricMeasureSpace space_from_json(const json& j) {
    const std::string backend = need(j, "backend").get<std::string>();
    std::vector<double> weights;
    if (j.contains("weights")) weights = doubles(j["weights"], "weights");
    if (backend == "grid") {
        const auto lo = doubles(need(j, "lo"), "lo");
        const auto hi = doubles(need(j, "hi"), "hi");
        std::vector<std::size_t> cells;
        for (const auto& c : need(j, "cells")) cells.push_back(c.get<std::size_t>());
        if (!weights.empty())
            throw validation_error("grid backend derives weights from cells");
        return MetricMeasureSpace::uniform_grid(lo, hi, cells);
    }
    if (backend == "points") {
        std::vector<std::vector<double>> pts;
        for (const auto& p : need(j, "points"))
            pts.push_back(doubles(p, "point"));
        return MetricMeasureSpace::from_points(pts, std::move(weights));
    }
    if (backend == "table") {
        const auto& d = need(j, "distances");
        std::vector<double> flat;
        std::size_t n = 0;
        if (d.is_array() && !d.empty() && d[0].is_array()) {
            n = d.size();
            for (const auto& row : d)
                for (const auto& e : row) flat.push_back(e.get<double>());
        } else {
            flat = doubles(d, "distances");
            n = static_cast<std::size_t>(std::llround(std::sqrt(
                static_cast<double>(flat.size()))));
        }
        return MetricMeasureSpace::from_table(n, std::move(flat),
                                              std::move(weights));
    }
    throw validation_error("unknown space backend '" + backend + "'");
}

MeasurableSet set_from_json(const MetricMeasureSpace& space, const json& j) {
    if (j.contains("all") && j["all"].get<bool>()) {
        MeasurableSet s(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) s.add(i);
        return s;
    }
    if (j.contains("indices")) {
        std::vector<std::size_t> idx;
        for (const auto& e : j["indices"]) idx.push_back(e.get<std::size_t>());
        return MeasurableSet::from_indices(space.size(), idx);
    }
    if (j.contains("intervals")) {
        if (space.dim() != 1)
            throw validation_error("'intervals' needs a 1-d coordinate space");
        MeasurableSet s(space.size());
        for (const auto& iv : j["intervals"]) {
            const double a = iv.at(0).get<double>();
            const double b = iv.at(1).get<double>();
            for (std::size_t i = 0; i < space.size(); ++i) {
                const double c = space.coord(i, 0);
                if (c >= a && c <= b) s.add(i);
            }
        }
        return s;
    }
    if (j.contains("boxes")) {
        if (space.is_table())
            throw validation_error("'boxes' needs a coordinate space");
        MeasurableSet s(space.size());
        for (const auto& box : j["boxes"]) {
            if (static_cast<int>(box.size()) != space.dim())
                throw validation_error("box rank does not match space dim");
            for (std::size_t i = 0; i < space.size(); ++i) {
                bool in = true;
                for (int a = 0; a < space.dim() && in; ++a) {
                    const double c = space.coord(i, a);
                    in = c >= box[a].at(0).get<double>() &&
                         c <= box[a].at(1).get<double>();
                }
                if (in) s.add(i);
            }
        }
        return s;
    }
    throw validation_error(
        "set descriptor needs 'indices', 'intervals', 'boxes' or 'all'");
}

SampledFunction function_from_json(const MetricMeasureSpace& space,
                                   const json& j) {
    const std::string type = need(j, "type").get<std::string>();
    SampledFunction f;
    f.tag = type;
    if (type == "constant") {
        f.values.assign(space.size(), need(j, "value").get<double>());
        return f;
    }
    if (type == "indicator") {
        const MeasurableSet s = set_from_json(space, need(j, "set"));
        f.values.assign(space.size(), 0.0);
        for (std::size_t i = 0; i < space.size(); ++i)
            if (s.contains(i)) f.values[i] = 1.0;
        return f;
    }
    if (type == "values") {
        f.values = doubles(need(j, "values"), "values");
        if (f.values.size() != space.size())
            throw validation_error("value count does not match space size");
        return f;
    }
    if (type == "sin") {
        if (space.is_table())
            throw validation_error("'sin' needs a coordinate space");
        const int axis = j.value("axis", 0);
        f.values.resize(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            f.values[i] = std::sin(space.coord(i, axis));
        return f;
    }
    throw validation_error("unknown function type '" + type + "'");
}

std::vector<Ball> family_from_json(const MetricMeasureSpace& space,
                                   const json& j) {
    std::vector<Ball> family;
    for (const auto& e : j) {
        Ball b;
        if (e.contains("center")) {
            b.center = e["center"].get<std::size_t>();
            if (b.center >= space.size())
                throw validation_error("ball center index out of range");
        } else if (e.contains("at")) {
            const auto at = doubles(e["at"], "at");
            b.center = space.nearest_index(at);
        } else {
            throw validation_error("ball needs 'center' or 'at'");
        }
        b.radius = need(e, "radius").get<double>();
        if (!(b.radius > 0.0))
            throw validation_error("ball radius must be > 0");
        family.push_back(b);
    }
    if (family.empty()) throw validation_error("ball family is empty");
    return family;
}

KernelDomain domain_from_json(const json& j) {
    const std::string v = need(j, "variant").get<std::string>();
    if (v == "disc") return KernelDomain::disc();
    if (v == "halfplane") return KernelDomain::halfplane();
    if (v == "ball") return KernelDomain::ball(need(j, "n").get<int>());
    if (v == "halfspace")
        return KernelDomain::halfspace(need(j, "n").get<int>());
    throw validation_error("unknown domain variant '" + v + "'");
}

BoundaryGrid grid_from_json(const KernelDomain& domain, const json& j) {
    const std::string kind = need(j, "kind").get<std::string>();
    BoundaryGrid g;
    if (kind == "circle") {
        g = circle_grid(need(j, "nodes").get<std::size_t>());
    } else if (kind == "sphere") {
        g = sphere_grid(need(j, "lat").get<std::size_t>(),
                        need(j, "lon").get<std::size_t>());
    } else if (kind == "line") {
        g = line_grid(need(j, "radius").get<double>(),
                      need(j, "cells").get<std::size_t>());
    } else if (kind == "line-auto") {
        g = line_grid_for(need(j, "min_height").get<double>(),
                          need(j, "max_height").get<double>(),
                          j.value("max_offset", 0.0),
                          j.value("tail", 1e-7), j.value("alias", 1e-9));
    } else if (kind == "plane") {
        g = plane_grid(need(j, "radius").get<double>(),
                       need(j, "cells").get<std::size_t>());
    } else {
        throw validation_error("unknown grid kind '" + kind + "'");
    }
    if (g.coord_dim != domain.boundary_coord_dim())
        throw validation_error("grid kind does not match the domain variant");
    return g;
}

BoundaryFn boundary_function_from_json(const json& j) {
    const std::string type = need(j, "type").get<std::string>();
    if (type == "constant") {
        const double v = need(j, "value").get<double>();
        return [v](std::span<const double>) { return v; };
    }
    if (type == "coord") {
        const int axis = j.value("axis", 0);
        return [axis](std::span<const double> t) { return t[axis]; };
    }
    if (type == "upper-indicator") {
        const int axis = j.value("axis", 1);
        return [axis](std::span<const double> t) {
            return t[axis] > 0.0 ? 1.0 : 0.0;
        };
    }
    if (type == "sign-coord") {
        const int axis = j.value("axis", 0);
        return [axis](std::span<const double> t) {
            return t[axis] >= 0.0 ? 1.0 : -1.0;
        };
    }
    throw validation_error("unknown boundary function type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Tabular serializers

void write_cover_csv(std::ostream& os, const MetricMeasureSpace& space,
                     std::span<const Ball> family, const CoverSelection& sel) {
    os << "# pairwise_disjoint=" << (sel.pairwise_disjoint ? 1 : 0)
       << " dilation=" << fmt_g17(sel.dilation_factor)
       << " selected_mass=" << fmt_g17(sel.selected_mass)
       << " residual_count=" << sel.residual.count()
       << " dilated_covers_target=" << (sel.dilated_covers_target ? 1 : 0)
       << "\n";
    os << "family_index,center_index,radius,member_mass\n";
    for (std::size_t s : sel.selected) {
        const Ball& b = family[s];
        os << s << ',' << b.center << ',' << fmt_g17(b.radius) << ','
           << fmt_g17(space.measure(ball_members(space, b))) << "\n";
    }
}

void write_refined_csv(std::ostream& os, const RefinedCover& cover) {
    os << "# total_mass=" << fmt_g17(cover.total_mass)
       << " target_mass=" << fmt_g17(cover.target_mass)
       << " threshold=" << fmt_g17(cover.threshold)
       << " capped_points=" << cover.capped_points << "\n";
    os << "center_index,radius,density\n";
    for (std::size_t j = 0; j < cover.balls.size(); ++j)
        os << cover.balls[j].center << ',' << fmt_g17(cover.balls[j].radius)
           << ',' << fmt_g17(cover.density_ratios[j]) << "\n";
}

void write_distribution_csv(std::ostream& os, const WeakTypeReport& rep) {
    os << "lambda,superlevel_measure,constant\n";
    for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
        os << fmt_g17(rep.lambdas[i]) << ','
           << fmt_g17(rep.superlevel_measures[i]) << ',';
        os << (i < rep.constants.size() ? fmt_g17(rep.constants[i]) : "");
        os << "\n";
    }
}

void write_weaktype_csv(std::ostream& os, const RestrictedWeakTypeResult& res) {
    os << "# set_mass=" << fmt_g17(res.set_mass)
       << " slack_measure=" << fmt_g17(res.slack_measure)
       << " all_pass=" << (res.all_pass ? 1 : 0) << "\n";
    os << "lambda,superlevel_measure,constant,bound,pass\n";
    for (std::size_t i = 0; i < res.report.lambdas.size(); ++i)
        os << fmt_g17(res.report.lambdas[i]) << ','
           << fmt_g17(res.report.superlevel_measures[i]) << ','
           << fmt_g17(res.report.constants[i]) << ','
           << fmt_g17(res.bounds[i]) << ',' << (res.passes[i] ? 1 : 0) << "\n";
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
    os << "radius,epsilon,bad_set_measure\n";
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
        for (std::size_t j = 0; j < rep.epsilons.size(); ++j)
            os << fmt_g17(rep.radii[i]) << ',' << fmt_g17(rep.epsilons[j])
               << ',' << fmt_g17(rep.bad_set_measure[i][j]) << "\n";
}

void write_chain_csv(std::ostream& os, const ChainTrace& t) {
    os << "# lambda=" << fmt_g17(t.lambda) << " balls=" << t.selected.size()
       << " all_hold=" << (t.all_hold ? 1 : 0) << "\n";
    os << "link,lhs,rhs,holds\n";
    os << "|S_lambda| <= 2|K|," << fmt_g17(t.s_mass) << ','
       << fmt_g17(2.0 * t.k_mass) << ',' << (t.links[0] ? 1 : 0) << "\n";
    os << "2|K| <= 4 sum|B_j|," << fmt_g17(2.0 * t.k_mass) << ','
       << fmt_g17(4.0 * t.sum_balls) << ',' << (t.links[1] ? 1 : 0) << "\n";
    os << "sum|B_j| <= (1/lambda) sum|B_j ^ E|," << fmt_g17(t.sum_balls) << ','
       << fmt_g17(t.sum_balls_e / t.lambda) << ',' << (t.links[2] ? 1 : 0)
       << "\n";
    os << "sum|B_j ^ E| <= |E|," << fmt_g17(t.sum_balls_e) << ','
       << fmt_g17(t.e_mass) << ',' << (t.links[3] ? 1 : 0) << "\n";
}

void write_nontangential_csv(std::ostream& os, const NontangentialReport& rep) {
    os << "# f_apex=" << fmt_g17(rep.f_apex) << "\n";
    os << "scale,max_error,max_oracle_deviation,samples\n";
    for (const auto& row : rep.rows)
        os << fmt_g17(row.scale) << ',' << fmt_g17(row.max_error) << ','
           << fmt_g17(row.max_oracle_deviation) << ',' << row.errors.size()
           << "\n";
}

} // namespace harmax::io
