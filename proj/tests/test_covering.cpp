#include <doctest.h>

#include <random>
#include <vector>

#include "generators.hpp"
#include "harmax/covering.hpp"
#include "harmax/errors.hpp"

using namespace harmax;

namespace {

MetricMeasureSpace line_points(double lo, double hi, double step) {
    std::vector<std::vector<double>> pts;
    for (double x = lo; x <= hi + 1e-9; x += step) pts.push_back({x});
    return MetricMeasureSpace::from_points(pts);
}

MeasurableSet interval_set(const MetricMeasureSpace& s, double a, double b) {
    MeasurableSet m(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.coord(i, 0) >= a && s.coord(i, 0) <= b) m.add(i);
    return m;
}

// Brute force over all 2^m subfamilies: does any pairwise-disjoint subfamily
// exist whose dilated members cover the target? Independent of the greedy
// path; only usable for small families.
bool exhaustive_disjoint_dilated_cover_exists(const MetricMeasureSpace& space,
                                              std::span<const Ball> family,
                                              const MeasurableSet& target,
                                              double dilation) {
    const std::size_t m = family.size();
    REQUIRE(m <= 12);
    std::vector<MeasurableSet> mem, dil;
    for (const Ball& b : family) {
        mem.push_back(ball_members(space, b));
        dil.push_back(ball_members(space, b.dilated(dilation)));
    }
    std::vector<std::vector<bool>> meets(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            meets[i][j] = !mem[i].intersect(mem[j]).empty();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        bool disjoint = true;
        for (std::size_t i = 0; i < m && disjoint; ++i) {
            if (!(mask >> i & 1)) continue;
            for (std::size_t j = i + 1; j < m && disjoint; ++j)
                if ((mask >> j & 1) && meets[i][j]) disjoint = false;
        }
        if (!disjoint) continue;
        MeasurableSet cov(space.size());
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1) cov = cov.unite(dil[i]);
        if (target.subtract(cov).empty()) return true;
    }
    return false;
}

} // namespace

TEST_CASE("wiener_select: single covering ball") {
    const auto s = line_points(-2.0, 2.0, 0.1);
    const std::vector<Ball> fam = {{s.nearest_index(std::vector{0.0}), 3.0}};
    const auto target = interval_set(s, -1.0, 1.0);
    const auto sel = wiener_select(s, fam, target);
    REQUIRE(sel.selected.size() == 1);
    CHECK(sel.selected[0] == 0);
    CHECK(sel.pairwise_disjoint);
    CHECK(sel.dilated_covers_target);
    CHECK(sel.residual.empty());
}

TEST_CASE("wiener_select: hand trace on the line") {
    // points at exact multiples of 0.1 so the three centers are hit exactly
    const auto s = line_points(-8.0, 8.0, 0.1);
    const std::vector<Ball> fam = {
        {s.nearest_index(std::vector{0.0}), 2.0},
        {s.nearest_index(std::vector{3.0}), 1.0},
        {s.nearest_index(std::vector{1.5}), 1.0},
    };
    const auto K = interval_set(s, -1.0, 3.5);
    const auto sel = wiener_select(s, fam, K, 3.0);
    // greedy: radius order picks B(0,2), then B(3,1); B(1.5,1) clashes
    REQUIRE(sel.selected.size() == 2);
    CHECK(sel.selected[0] == 0);
    CHECK(sel.selected[1] == 1);
    CHECK(sel.pairwise_disjoint);
    CHECK(sel.dilated_covers_target);
    CHECK(greedy_maximal(s, fam, sel.selected));
}

TEST_CASE("wiener_select: precondition names an uncovered point") {
    const auto s = line_points(0.0, 2.0, 0.5);
    const std::vector<Ball> fam = {{0, 0.6}};
    const auto target = interval_set(s, 0.0, 2.0);
    CHECK_THROWS_WITH_AS(wiener_select(s, fam, target),
                         doctest::Contains("uncovered"), validation_error);
    CHECK_THROWS_AS(wiener_select(s, fam, interval_set(s, 0.0, 0.5), 0.5),
                    validation_error);  // dilation < 1
}

TEST_CASE("wiener_select: random families vs the exhaustive oracle") {
    std::mt19937_64 rng(101);
    for (int it = 0; it < 60; ++it) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const auto space = testgen::random_cloud(rng, dim, 24);
        auto target = testgen::random_nonempty_subset(rng, space, 0.4);
        std::uniform_int_distribution<std::size_t> nb(1, 6);
        auto fam =
            testgen::random_covering_family(rng, space, target, nb(rng));
        if (fam.size() > 12) continue;

        const auto sel = wiener_select(space, fam, target, 3.0);
        CHECK(sel.pairwise_disjoint);
        CHECK(sel.dilated_covers_target);
        CHECK(greedy_maximal(space, fam, sel.selected));
        CHECK(exhaustive_disjoint_dilated_cover_exists(space, fam, target,
                                                       3.0));
    }
}

TEST_CASE("wiener_select: small dilation can leave a residual") {
    // chained overlapping balls: greedy keeps every other one, and without
    // dilation the gaps between the kept balls stay uncovered
    const auto s = line_points(0.0, 4.0, 0.1);
    const std::vector<Ball> fam = {
        {s.nearest_index(std::vector{0.5}), 0.52},
        {s.nearest_index(std::vector{1.5}), 0.52},
        {s.nearest_index(std::vector{2.5}), 0.52},
        {s.nearest_index(std::vector{3.5}), 0.52},
    };
    const auto target = interval_set(s, 0.0, 4.0);
    const auto full = wiener_select(s, fam, target, 3.0);
    CHECK(full.dilated_covers_target);
    const auto tight = wiener_select(s, fam, target, 1.0);
    CHECK(tight.selected.size() == 2);
    CHECK(!tight.dilated_covers_target);
    CHECK(tight.residual.count() > 0);
}

TEST_CASE("vitali_select basics") {
    const auto s = line_points(0.0, 1.0, 0.1);
    const std::vector<Ball> one = {{5, 0.25}};
    const auto sel = vitali_select(s, one, 0.0);
    CHECK(sel.selected.size() == 1);
    CHECK(sel.selected_mass > 0.0);
    CHECK(sel.mass_target_met);

    // duplicates share members, so exactly one survives; tie broken by index
    const std::vector<Ball> dup = {{5, 0.25}, {5, 0.25}};
    const auto sel2 = vitali_select(s, dup, 0.0);
    REQUIRE(sel2.selected.size() == 1);
    CHECK(sel2.selected[0] == 0);

    CHECK_THROWS_AS(vitali_select(s, {}, 0.0), validation_error);
}

TEST_CASE("vitali_select on per-point density balls clears |K|/2") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{-2.0}, std::vector<double>{2.0},
        std::vector<std::size_t>{512});
    const auto K = interval_set(s, 0.0, 1.0);
    std::vector<Ball> fam;
    for (std::size_t x : K.members()) {
        const double r = density_radius(s, K, x, 10.0);
        fam.push_back({x, r > 0.0 ? r : s.cell_size() / 2.0});
    }
    const double km = s.measure(K);
    const auto sel = vitali_select(s, fam, km / 2.0);
    CHECK(sel.pairwise_disjoint);
    CHECK(sel.mass_target_met);
}

TEST_CASE("density_radius: closed forms on the unit interval") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{-2.0}, std::vector<double>{2.0},
        std::vector<std::size_t>{1024});
    const auto K = interval_set(s, 0.0, 1.0);
    const double h = s.cell_size();

    // center of K: density 1 up to s = 0.5, then 1/(2s) > 1/2 until s = 1
    const std::size_t mid = s.nearest_index(std::vector{0.5});
    const double r_mid = density_radius(s, K, mid, 10.0);
    CHECK(r_mid > 1.0 - 3.0 * h);
    CHECK(r_mid < 1.0 + 3.0 * h);

    for (double probe : {0.2, 0.5, 0.9}) {
        const auto mem = ball_members(s, {mid, probe});
        CHECK(s.measure(mem.intersect(K)) / s.measure(mem) > 0.5);
    }

    // edge point (first cell center inside K): the discrete density
    // (k+1)/(2k+1) stays strictly above 1/2 until the ball saturates the far
    // end of K
    const std::size_t edge = s.nearest_index(std::vector{h / 2.0});
    REQUIRE(K.contains(edge));
    const double r_edge = density_radius(s, K, edge, 10.0);
    CHECK(r_edge > 1.0 - 3.0 * h);
    CHECK(r_edge < 1.0 + 3.0 * h);

    // the cap truncates
    CHECK(density_radius(s, K, mid, 0.3) <= 0.3);

    CHECK_THROWS_AS(
        density_radius(s, K, s.nearest_index(std::vector{-1.5}), 1.0),
        validation_error);
}

TEST_CASE("density_radius: colocated mass can sink the singleton shell") {
    // two points at distance zero; the shell at threshold 0 holds both
    const auto t = MetricMeasureSpace::from_table(2, {0, 0, 0, 0}, {1, 3});
    MeasurableSet K(2);
    K.add(0);
    CHECK(density_radius(t, K, 0, 1.0) == 0.0);
}

TEST_CASE("refine_cover: huge-ball example certifies (a)(b)(c)") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{-2.0}, std::vector<double>{2.0},
        std::vector<std::size_t>{512});
    const auto K = interval_set(s, 0.0, 1.0);
    const std::vector<Ball> fam = {{s.nearest_index(std::vector{0.5}), 10.0}};
    const auto cover = refine_cover(s, K, fam);
    CHECK(!verify_refined_cover(s, K, cover).has_value());
    CHECK(cover.total_mass > 0.5 * cover.target_mass);
    for (double d : cover.density_ratios) CHECK(d > 0.5);
}

TEST_CASE("refine_cover: singleton K") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{0.0}, std::vector<double>{1.0},
        std::vector<std::size_t>{16});
    MeasurableSet K(s.size());
    K.add(7);
    const std::vector<Ball> fam = {{7, 5.0}};
    const auto cover = refine_cover(s, K, fam);
    REQUIRE(cover.balls.size() == 1);
    CHECK(cover.density_ratios[0] == 1.0);
    CHECK(cover.total_mass == doctest::Approx(s.weight(7)));
}

TEST_CASE("refine_cover: 50 random instances, certificates re-verified") {
    std::mt19937_64 rng(202);
    for (int it = 0; it < 50; ++it) {
        const int dim = it % 2 == 0 ? 1 : 2;
        auto space = testgen::random_grid(rng, dim, 128);
        MeasurableSet K = dim == 1
                              ? testgen::random_interval_union(rng, space)
                              : testgen::random_nonempty_subset(rng, space);
        auto fam = testgen::random_covering_family(rng, space, K, 5);
        const auto cover = refine_cover(space, K, fam);
        CHECK(!verify_refined_cover(space, K, cover).has_value());
        CHECK(cover.total_mass > 0.5 * space.measure(K));
    }
}

TEST_CASE("refine_cover error paths") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{0.0}, std::vector<double>{1.0},
        std::vector<std::size_t>{32});
    const auto K = interval_set(s, 0.2, 0.8);
    CHECK_THROWS_AS(refine_cover(s, K, std::vector<Ball>{{0, 0.05}}),
                    validation_error);
    // an unreachable density threshold empties the candidate set; condition
    // (c) then fails and must surface as algorithm_failure, never silently
    CHECK_THROWS_AS(refine_cover(s, K, std::vector<Ball>{{16, 5.0}}, 1.5),
                    algorithm_failure);
}

TEST_CASE("verify_refined_cover flags doctored certificates") {
    const auto s = MetricMeasureSpace::uniform_grid(
        std::vector<double>{0.0}, std::vector<double>{1.0},
        std::vector<std::size_t>{32});
    const auto K = interval_set(s, 0.0, 1.0);
    RefinedCover bad;
    bad.threshold = 0.5;
    bad.target_mass = s.measure(K);
    bad.balls = {{5, 0.2}, {6, 0.2}};  // overlapping members
    auto v = verify_refined_cover(s, K, bad);
    REQUIRE(v.has_value());
    CHECK(v->condition == "disjoint");

    bad.balls = {{5, 0.1}};
    v = verify_refined_cover(s, K, bad);
    REQUIRE(v.has_value());
    CHECK(v->condition == "mass");
}

TEST_CASE("greedy selection is deterministic") {
    std::mt19937_64 rng(303);
    const auto space = testgen::random_cloud(rng, 2, 30);
    std::vector<Ball> fam;
    std::uniform_int_distribution<std::size_t> pd(0, space.size() - 1);
    std::uniform_real_distribution<double> rd(0.2, 2.0);
    for (int i = 0; i < 15; ++i) fam.push_back({pd(rng), rd(rng)});
    const auto a = greedy_disjoint_selection(space, fam);
    const auto b = greedy_disjoint_selection(space, fam);
    CHECK(a == b);
}
