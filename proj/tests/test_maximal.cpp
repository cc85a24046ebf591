#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "generators.hpp"
#include "harmax/errors.hpp"
#include "harmax/maximal.hpp"

using namespace harmax;

namespace {

// Brute force: every subset-ball from x is a closed ball at one of the
// pairwise distances; average each one directly, in index order.
double oracle_maximal(const MetricMeasureSpace& s, const SampledFunction& f,
                      std::size_t x) {
    double best = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double d = s.distance(x, j);
        double sw = 0.0, sv = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.distance(x, i) <= d) {
                sw += s.weight(i);
                sv += s.weight(i) * std::abs(f.values[i]);
            }
        }
        best = std::max(best, sv / sw);
    }
    return best;
}

MeasurableSet interval_set(const MetricMeasureSpace& s, double a, double b) {
    MeasurableSet m(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.coord(i, 0) >= a && s.coord(i, 0) <= b) m.add(i);
    return m;
}

} // namespace

TEST_CASE("hl_maximal: three-point hand trace") {
    const auto s = MetricMeasureSpace::from_points({{0.0}, {1.0}, {2.0}});
    const SampledFunction f{{0.0, 3.0, 0.0}, "spike"};
    CHECK(hl_maximal(s, f, 1) == 3.0);               // singleton ball
    CHECK(hl_maximal(s, f, 0) == doctest::Approx(1.5));  // max(0, 3/2, 1)
    CHECK(hl_maximal(s, f, 2) == doctest::Approx(1.5));
}

TEST_CASE("hl_maximal: constants are fixed points") {
    std::mt19937_64 rng(5);
    const auto s = testgen::random_cloud(rng, 2, 20);
    const SampledFunction f{std::vector<double>(20, -2.5), "const"};
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(hl_maximal(s, f, i) == doctest::Approx(2.5));
}

TEST_CASE("maximal field of chi_[0,1] follows 1/(2x)") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{-4.0}, std::vector<double>{4.0},
        std::vector<std::size_t>{4096});
    const double h = s.cell_size();
    SampledFunction chi{std::vector<double>(s.size(), 0.0), "chi"};
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.coord(i, 0) >= 0.0 && s.coord(i, 0) <= 1.0) chi.values[i] = 1.0;
    // valid while the optimal ball [0, 2x] stays inside [-4, 4], i.e. x <= 2;
    // past that the truncated space inflates the averages
    for (double x : {1.3, 1.5, 2.0}) {
        const std::size_t i = s.nearest_index(std::vector{x});
        const double expected = 1.0 / (2.0 * s.coord(i, 0));
        CHECK(std::abs(hl_maximal(s, chi, i) - expected) <= 2.0 * h);
    }
}

TEST_CASE("maximal_field equals the brute-force oracle exactly") {
    // integer weights and values make every average an exact rational, so
    // the sorted sweep and the direct enumeration agree bitwise
    std::mt19937_64 rng(606);
    for (int it = 0; it < 100; ++it) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        std::uniform_int_distribution<std::size_t> nd(1, 10);
        const auto s = testgen::random_cloud(rng, dim, nd(rng));
        const SampledFunction f{testgen::random_integer_values(rng, s.size()),
                                "rand"};
        const auto field = maximal_field(s, f);
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(field.values[i] == oracle_maximal(s, f, i));
    }
}

TEST_CASE("maximal operator properties") {
    std::mt19937_64 rng(707);
    const auto s = testgen::random_cloud(rng, 2, 25);
    std::uniform_real_distribution<double> vd(-3.0, 3.0);
    for (int it = 0; it < 10; ++it) {
        SampledFunction f{std::vector<double>(s.size()), "f"};
        SampledFunction g{std::vector<double>(s.size()), "g"};
        for (auto& v : f.values) v = vd(rng);
        for (auto& v : g.values) v = vd(rng);
        SampledFunction sum{std::vector<double>(s.size()), "f+g"};
        SampledFunction scaled{std::vector<double>(s.size()), "cf"};
        const double c = vd(rng);
        for (std::size_t i = 0; i < s.size(); ++i) {
            sum.values[i] = f.values[i] + g.values[i];
            scaled.values[i] = c * f.values[i];
        }
        const auto mf = maximal_field(s, f);
        const auto mg = maximal_field(s, g);
        const auto msum = maximal_field(s, sum);
        const auto mscaled = maximal_field(s, scaled);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(mf.values[i] >= std::abs(f.values[i]) - 1e-12);
            CHECK(msum.values[i] <= mf.values[i] + mg.values[i] + 1e-12);
            CHECK(mscaled.values[i] ==
                  doctest::Approx(std::abs(c) * mf.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("M chi_E is at most 1 and exactly 1 inside E") {
    std::mt19937_64 rng(808);
    const auto s = testgen::random_grid(rng, 1, 128);
    const auto E = testgen::random_interval_union(rng, s);
    SampledFunction chi{std::vector<double>(s.size(), 0.0), "chi"};
    for (std::size_t i = 0; i < s.size(); ++i)
        if (E.contains(i)) chi.values[i] = 1.0;
    const auto field = maximal_field(s, chi);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(field.values[i] <= 1.0 + 1e-12);
        if (E.contains(i)) CHECK(field.values[i] == 1.0);
    }
}

TEST_CASE("distribution: hand values and step structure") {
    const auto s = MetricMeasureSpace::from_points({{0.0}, {1.0}, {2.0}});
    const SampledFunction zero{{0.0, 0.0, 0.0}, "zero"};
    const std::vector<double> lams = {0.5, 1.0, 2.0};
    const auto rz = distribution(s, zero, lams);
    for (double m : rz.superlevel_measures) CHECK(m == 0.0);

    const SampledFunction g{{1.0, 2.0, 3.0}, "ladder"};
    const auto rg = distribution(s, g, std::vector<double>{1.5});
    CHECK(rg.superlevel_measures[0] == 2.0);

    // constant between consecutive |g| values
    const auto ra = distribution(s, g, std::vector<double>{1.2, 1.8});
    CHECK(ra.superlevel_measures[0] == ra.superlevel_measures[1]);

    CHECK_THROWS_AS(distribution(s, g, std::vector<double>{1.0, 0.5}),
                    validation_error);
    CHECK_THROWS_AS(distribution(s, g, std::vector<double>{-1.0}),
                    validation_error);
}

TEST_CASE("distribution is nonincreasing in lambda on random input") {
    std::mt19937_64 rng(909);
    const auto s = testgen::random_cloud(rng, 1, 40);
    std::uniform_real_distribution<double> vd(-5.0, 5.0);
    SampledFunction g{std::vector<double>(s.size()), "g"};
    for (auto& v : g.values) v = vd(rng);
    const std::vector<double> lams = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    const auto rep = distribution(s, g, lams, l1_norm(s, g));
    for (std::size_t i = 1; i < lams.size(); ++i)
        CHECK(rep.superlevel_measures[i] <= rep.superlevel_measures[i - 1]);
    CHECK(rep.sup_constant ==
          *std::max_element(rep.constants.begin(), rep.constants.end()));
}

TEST_CASE("restricted weak type: whole space and the closed form") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{-4.0}, std::vector<double>{4.0},
        std::vector<std::size_t>{4096});
    MeasurableSet whole(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) whole.add(i);
    const std::vector<double> lams = {0.25, 0.5, 0.75};
    const auto rw = restricted_weak_type_test(s, whole, lams);
    CHECK(rw.all_pass);
    for (std::size_t i = 0; i < lams.size(); ++i) {
        // M chi_X = 1 everywhere, so S_lambda is the whole space
        CHECK(rw.report.superlevel_measures[i] ==
              doctest::Approx(s.total_mass()));
        CHECK(rw.report.constants[i] == doctest::Approx(lams[i]));
    }

    const auto E = interval_set(s, 0.0, 1.0);
    const auto res =
        restricted_weak_type_test(s, E, std::vector<double>{0.25});
    // continuum: S_lambda = (-1, 2), measure 1/lambda - 1 = 3
    CHECK(std::abs(res.report.superlevel_measures[0] - 3.0) <=
          2.0 * s.cell_size());
    CHECK(res.report.constants[0] == doctest::Approx(0.75).epsilon(0.01));
    CHECK(res.all_pass);

    CHECK_THROWS_AS(restricted_weak_type_test(s, E, std::vector<double>{1.5}),
                    validation_error);
    CHECK_THROWS_AS(restricted_weak_type_test(s, E, std::vector<double>{1.0}),
                    validation_error);
}

TEST_CASE("restricted weak type: random sets stay under the bound 4") {
    std::mt19937_64 rng(111);
    const std::vector<double> lams = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (int it = 0; it < 15; ++it) {
        const auto s = testgen::random_grid(rng, 1, 192);
        const auto E = testgen::random_interval_union(rng, s);
        const auto res = restricted_weak_type_test(s, E, lams);
        CHECK(res.all_pass);
        for (double c : res.report.constants) CHECK(c <= 4.0 + 1e-9);
    }
}

TEST_CASE("weak_type_pipeline: singleton E gives the 8w bound") {
    const auto s = MetricMeasureSpace::from_points(
        {{0.0}, {1.0}, {2.0}, {3.5}}, {1.0, 2.5, 1.0, 1.0});
    MeasurableSet E(s.size());
    E.add(1);  // weight 2.5
    const auto t = weak_type_pipeline(s, E, 0.5);
    CHECK(t.all_hold);
    CHECK(t.e_mass == 2.5);
    // final bound 4|E|/lambda = 8w
    CHECK(4.0 * t.e_mass / t.lambda == doctest::Approx(8.0 * 2.5));
    CHECK(t.s_mass <= 4.0 * t.e_mass / t.lambda);
}

TEST_CASE("weak_type_pipeline: whole space is near-equality bookkeeping") {
    std::mt19937_64 rng(222);
    const auto s = testgen::random_grid(rng, 1, 64);
    MeasurableSet whole(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) whole.add(i);
    const auto t = weak_type_pipeline(s, whole, 0.5);
    CHECK(t.all_hold);
    CHECK(t.s_mass == doctest::Approx(s.total_mass()));
    CHECK(t.sum_balls_e == doctest::Approx(t.sum_balls));
}

TEST_CASE("weak_type_pipeline: random instances keep every link") {
    std::mt19937_64 rng(333);
    std::uniform_real_distribution<double> ld(0.1, 0.9);
    for (int it = 0; it < 40; ++it) {
        const auto s = testgen::random_grid(rng, 1, 128);
        const auto E = testgen::random_interval_union(rng, s);
        const auto t = weak_type_pipeline(s, E, ld(rng));
        CHECK(t.all_hold);
        CHECK(!verify_chain(t).has_value());
    }
}

TEST_CASE("verify_chain flags broken links") {
    ChainTrace t;
    t.lambda = 0.5;
    t.s_mass = 10.0;
    t.k_mass = 10.0;
    t.sum_balls = 1.0;  // far too small for link 2
    t.sum_balls_e = 0.6;
    t.e_mass = 1.0;
    auto v = verify_chain(t);
    REQUIRE(v.has_value());
    CHECK(v->find("link 2") != std::string::npos);
    CHECK_THROWS_AS(
        weak_type_pipeline(MetricMeasureSpace::from_points({{0.0}}),
                           MeasurableSet::from_indices(1, std::vector<std::size_t>{0}),
                           1.5),
        validation_error);
}
