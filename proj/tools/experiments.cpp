#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "harmax/covering.hpp"
#include "harmax/differentiation.hpp"
#include "harmax/errors.hpp"
#include "harmax/io.hpp"
#include "harmax/kernels.hpp"
#include "harmax/maximal.hpp"
#include "harmax/poisson.hpp"
#include "harmax/space.hpp"
#include "harmax/util.hpp"

namespace harmax::cli {

using nlohmann::json;
using util::fmt_g17;

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> catalog = {
        {"metric-check", "verify metric axioms on random triples"},
        {"cover", "Wiener greedy ball selection with dilation certificates"},
        {"refine", "disjoint density refinement of a ball cover"},
        {"maximal", "centered maximal function field over a space"},
        {"weaktype", "restricted weak-type constants against the bound 4"},
        {"chain", "restricted weak-type inequality chain, link by link"},
        {"differentiate", "ball-average convergence and bad-set measures"},
        {"kernel-eval", "closed-form Poisson kernel values"},
        {"kernel-normalize", "boundary quadrature of the kernel against 1"},
        {"ratio-survey", "two-sided kernel comparability ratios"},
        {"extend", "harmonic extension of boundary data by quadrature"},
        {"converge", "nontangential boundary convergence along cones"},
    };
    return catalog;
}

bool is_experiment(const std::string& name) {
    for (const auto& e : list_experiments())
        if (e.name == name) return true;
    return false;
}

json sample_config(const std::string& experiment) {
    if (experiment == "metric-check")
        return json{{"space", {{"backend", "grid"}, {"lo", {0.0}}, {"hi", {1.0}}, {"cells", {32}}}},
                    {"samples", 200},
                    {"seed", 1}};
    if (experiment == "cover")
        return json{{"space", {{"backend", "grid"}, {"lo", {-8.0}}, {"hi", {8.0}}, {"cells", {160}}}},
                    {"family",
                     {{{"at", {0.0}}, {"radius", 2.0}},
                      {{"at", {3.0}}, {"radius", 1.0}},
                      {{"at", {1.5}}, {"radius", 1.0}}}},
                    {"target", {{"intervals", {{-1.0, 3.5}}}}},
                    {"dilation", 3.0}};
    if (experiment == "refine")
        return json{{"space", {{"backend", "grid"}, {"lo", {-2.0}}, {"hi", {2.0}}, {"cells", {64}}}},
                    {"target", {{"intervals", {{0.0, 1.0}}}}},
                    {"family", {{{"at", {0.5}}, {"radius", 10.0}}}}};
    if (experiment == "maximal")
        return json{{"space", {{"backend", "points"}, {"points", {{0.0}, {1.0}, {2.0}}}}},
                    {"function", {{"type", "values"}, {"values", {0.0, 3.0, 0.0}}}}};
    if (experiment == "weaktype")
        return json{{"space", {{"backend", "grid"}, {"lo", {-4.0}}, {"hi", {4.0}}, {"cells", {4096}}}},
                    {"set", {{"intervals", {{0.0, 1.0}}}}},
                    {"lambdas", {0.25}}};
    if (experiment == "chain")
        return json{{"space", {{"backend", "grid"}, {"lo", {-2.0}}, {"hi", {2.0}}, {"cells", {128}}}},
                    {"set", {{"intervals", {{0.0, 0.5}}}}},
                    {"lambda", 0.5}};
    if (experiment == "differentiate")
        return json{{"space", {{"backend", "grid"}, {"lo", {-2.0}}, {"hi", {2.0}}, {"cells", {256}}}},
                    {"function", {{"type", "indicator"}, {"set", {{"intervals", {{0.0, 1.0}}}}}}},
                    {"radii", {{"from", 4.0}, {"to", 0.05}, {"ratio", 0.5}}},
                    {"epsilons", {0.1}}};
    if (experiment == "kernel-eval")
        return json{{"domain", {{"variant", "disc"}}},
                    {"pairs",
                     {{{"x", {0.0, 0.0}}, {"t", {1.0, 0.0}}},
                      {{"x", {0.5, 0.0}}, {"t", {1.0, 0.0}}}}}};
    if (experiment == "kernel-normalize")
        return json{{"domain", {{"variant", "disc"}}},
                    {"grid", {{"kind", "circle"}, {"nodes", 16}}},
                    {"points", {{0.0, 0.0}}}};
    if (experiment == "ratio-survey")
        return json{{"domain", {{"variant", "halfspace"}, {"n", 2}}},
                    {"samples", 1000},
                    {"delta_min", 1e-4},
                    {"delta_max", 0.5},
                    {"seed", 7}};
    if (experiment == "extend")
        return json{{"domain", {{"variant", "disc"}}},
                    {"grid", {{"kind", "circle"}, {"nodes", 512}}},
                    {"boundary_function", {{"type", "coord"}, {"axis", 0}}},
                    {"points", {{0.3, 0.2}, {0.0, 0.0}, {0.5, 0.0}}}};
    if (experiment == "converge")
        return json{{"domain", {{"variant", "disc"}}},
                    {"grid", {{"kind", "circle"}, {"nodes", 512}}},
                    {"boundary_function", {{"type", "coord"}, {"axis", 0}}},
                    {"y", {1.0, 0.0}},
                    {"alpha", 2.0},
                    {"scales", {0.5, 0.25, 0.125}}};
    throw validation_error("unknown experiment '" + experiment + "'");
}

namespace {

std::uint64_t resolve_seed(const RunOptions& opt, bool required) {
    if (opt.seed_override) return *opt.seed_override;
    if (opt.config.contains("seed"))
        return opt.config["seed"].get<std::uint64_t>();
    if (required)
        throw validation_error(
            "randomized experiment needs a seed (config field or --seed)");
    return 0;
}

std::vector<double> point_from_json(const json& j) {
    std::vector<double> p;
    for (const auto& e : j) p.push_back(e.get<double>());
    return p;
}

// Interior sample with boundary distance delta, direction drawn uniformly.
std::vector<double> random_interior(const KernelDomain& dom, double delta,
                                    std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int dim = dom.ambient_dim();
    std::vector<double> x(dim);
    if (dom.variant == DomainVariant::disc ||
        dom.variant == DomainVariant::ball) {
        double n2 = 0.0;
        for (auto& c : x) {
            c = gauss(rng);
            n2 += c * c;
        }
        const double scale = (1.0 - delta) / std::sqrt(n2);
        for (auto& c : x) c *= scale;
    } else {
        for (int a = 0; a + 1 < dim; ++a) x[a] = uni(rng);
        x[dim - 1] = delta;
    }
    return x;
}

std::vector<double> random_boundary(const KernelDomain& dom,
                                    std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    const int bd = dom.boundary_coord_dim();
    std::vector<double> t(bd);
    if (dom.variant == DomainVariant::disc ||
        dom.variant == DomainVariant::ball) {
        double n2 = 0.0;
        for (auto& c : t) {
            c = gauss(rng);
            n2 += c * c;
        }
        for (auto& c : t) c /= std::sqrt(n2);
    } else {
        for (auto& c : t) c = uni(rng);
    }
    return t;
}

std::vector<double> radii_from_json(const json& j) {
    if (j.is_array()) {
        std::vector<double> r;
        for (const auto& e : j) r.push_back(e.get<double>());
        return r;
    }
    return geometric_radii(j.at("from").get<double>(),
                           j.at("to").get<double>(), j.value("ratio", 0.5));
}

struct Emitter {
    std::filesystem::path dir;
    std::ostringstream csv;

    void finish(const RunOptions& opt, std::uint64_t seed, bool seeded) {
        std::filesystem::create_directories(dir);
        {
            std::ofstream f(dir / (opt.experiment + ".csv"),
                            std::ios::binary);
            f << csv.str();
        }
        json manifest;
        manifest["experiment"] = opt.experiment;
        manifest["config"] = opt.config;
        if (seeded) manifest["seed"] = seed;
        manifest["threads"] = opt.threads;
        manifest["kernel_backend"] = kern::active().name;
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        manifest["timestamp_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        std::ofstream m(dir / "manifest.json", std::ios::binary);
        m << manifest.dump(2) << "\n";
    }
};

} // namespace

void run_experiment(const RunOptions& opt) {
    const json& cfg = opt.config;
    Emitter out;
    out.dir = opt.out_dir;
    std::uint64_t seed = 0;
    bool seeded = false;
    const std::string& name = opt.experiment;

    if (name == "metric-check") {
        seed = resolve_seed(opt, true);
        seeded = true;
        const auto space = io::space_from_json(cfg.at("space"));
        const auto rep = verify_metric_axioms(
            space, cfg.value("samples", std::size_t{1000}), seed);
        out.csv << "passed,samples_checked,kind,i,j,k,lhs,rhs\n";
        out.csv << (rep.passed ? 1 : 0) << ',' << rep.samples_checked << ',';
        if (rep.violation)
            out.csv << rep.violation->kind << ',' << rep.violation->triple[0]
                    << ',' << rep.violation->triple[1] << ','
                    << rep.violation->triple[2] << ','
                    << fmt_g17(rep.violation->lhs) << ','
                    << fmt_g17(rep.violation->rhs);
        else
            out.csv << ",,,,,";
        out.csv << "\n";
    } else if (name == "cover") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto family = io::family_from_json(space, cfg.at("family"));
        const auto target = io::set_from_json(space, cfg.at("target"));
        const auto sel =
            wiener_select(space, family, target, cfg.value("dilation", 3.0));
        io::write_cover_csv(out.csv, space, family, sel);
    } else if (name == "refine") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto K = io::set_from_json(space, cfg.at("target"));
        const auto family = io::family_from_json(space, cfg.at("family"));
        const auto cover =
            refine_cover(space, K, family, cfg.value("threshold", 0.5));
        io::write_refined_csv(out.csv, cover);
    } else if (name == "maximal") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto f = io::function_from_json(space, cfg.at("function"));
        const auto field = maximal_field(space, f, opt.threads);
        out.csv << "index,f,Mf\n";
        for (std::size_t i = 0; i < space.size(); ++i)
            out.csv << i << ',' << fmt_g17(f.values[i]) << ','
                    << fmt_g17(field.values[i]) << "\n";
    } else if (name == "weaktype") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto E = io::set_from_json(space, cfg.at("set"));
        std::vector<double> lambdas;
        for (const auto& l : cfg.at("lambdas"))
            lambdas.push_back(l.get<double>());
        const auto res = restricted_weak_type_test(space, E, lambdas,
                                                   std::nullopt, opt.threads);
        io::write_weaktype_csv(out.csv, res);
    } else if (name == "chain") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto E = io::set_from_json(space, cfg.at("set"));
        const auto trace = weak_type_pipeline(
            space, E, cfg.at("lambda").get<double>(), opt.threads);
        io::write_chain_csv(out.csv, trace);
    } else if (name == "differentiate") {
        const auto space = io::space_from_json(cfg.at("space"));
        const auto f = io::function_from_json(space, cfg.at("function"));
        const auto radii = radii_from_json(cfg.at("radii"));
        std::vector<double> eps;
        for (const auto& e : cfg.at("epsilons")) eps.push_back(e.get<double>());
        const auto rep =
            differentiation_experiment(space, f, radii, eps, opt.threads);
        io::write_convergence_csv(out.csv, rep);
    } else if (name == "kernel-eval") {
        const auto dom = io::domain_from_json(cfg.at("domain"));
        out.csv << "x,t,P\n";
        for (const auto& pair : cfg.at("pairs")) {
            const auto x = point_from_json(pair.at("x"));
            const auto t = point_from_json(pair.at("t"));
            out.csv << '"' << json(x).dump() << "\",\"" << json(t).dump()
                    << "\"," << fmt_g17(kernel_eval(dom, x, t)) << "\n";
        }
    } else if (name == "kernel-normalize") {
        const auto dom = io::domain_from_json(cfg.at("domain"));
        const auto grid = io::grid_from_json(dom, cfg.at("grid"));
        out.csv << "point,normalization,deviation\n";
        for (const auto& pj : cfg.at("points")) {
            const auto x = point_from_json(pj);
            const double norm = kernel_normalization(dom, x, grid);
            out.csv << '"' << json(x).dump() << "\"," << fmt_g17(norm) << ','
                    << fmt_g17(std::abs(norm - 1.0)) << "\n";
        }
    } else if (name == "ratio-survey") {
        seed = resolve_seed(opt, true);
        seeded = true;
        const auto dom = io::domain_from_json(cfg.at("domain"));
        const auto samples = cfg.value("samples", std::size_t{10000});
        const double dmin = cfg.value("delta_min", 1e-4);
        const double dmax = cfg.value("delta_max", 0.5);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> du(dmin, dmax);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        std::ostringstream rows;
        rows << "delta,ratio\n";
        for (std::size_t s = 0; s < samples; ++s) {
            const double delta = du(rng);
            const auto x = random_interior(dom, delta, rng);
            const auto t = random_boundary(dom, rng);
            const double r = asymptotic_ratio(dom, x, t);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            rows << fmt_g17(delta) << ',' << fmt_g17(r) << "\n";
        }
        out.csv << "# ratio_min=" << fmt_g17(lo) << " ratio_max=" << fmt_g17(hi)
                << " normalizing_constant="
                << fmt_g17(dom.normalizing_constant()) << "\n"
                << rows.str();
    } else if (name == "extend") {
        const auto dom = io::domain_from_json(cfg.at("domain"));
        const auto grid = io::grid_from_json(dom, cfg.at("grid"));
        const auto bf =
            io::boundary_function_from_json(cfg.at("boundary_function"));
        std::vector<double> fvals(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k)
            fvals[k] = bf(grid.node(k));
        const PoissonEvaluator u(dom, grid, fvals);
        out.csv << "point,u\n";
        for (const auto& pj : cfg.at("points")) {
            const auto x = point_from_json(pj);
            out.csv << '"' << json(x).dump() << "\"," << fmt_g17(u(x)) << "\n";
        }
    } else if (name == "converge") {
        const auto dom = io::domain_from_json(cfg.at("domain"));
        const auto grid = io::grid_from_json(dom, cfg.at("grid"));
        const auto bf =
            io::boundary_function_from_json(cfg.at("boundary_function"));
        const auto y = point_from_json(cfg.at("y"));
        std::vector<double> scales;
        for (const auto& s : cfg.at("scales")) scales.push_back(s.get<double>());
        const auto rep = nontangential_experiment(
            dom, grid, bf, y, cfg.at("alpha").get<double>(), scales);
        io::write_nontangential_csv(out.csv, rep);
    } else {
        throw validation_error("unknown experiment '" + name + "'");
    }

    out.finish(opt, seed, seeded);
}

} // namespace harmax::cli
