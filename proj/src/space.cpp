#include "harmax/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "harmax/errors.hpp"
#include "harmax/kernels.hpp"

namespace harmax {

// ---------------------------------------------------------------------------
// MeasurableSet

MeasurableSet MeasurableSet::from_indices(std::size_t n,
                                          std::span<const std::size_t> idx) {
    MeasurableSet s(n);
    for (std::size_t i : idx) {
        if (i >= n) throw validation_error("set index out of range");
        s.in_[i] = 1;
    }
    return s;
}

std::size_t MeasurableSet::count() const {
    std::size_t c = 0;
    for (auto b : in_) c += b;
    return c;
}

std::vector<std::size_t> MeasurableSet::members() const {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < in_.size(); ++i)
        if (in_[i]) m.push_back(i);
    return m;
}

MeasurableSet MeasurableSet::complement() const {
    MeasurableSet s(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i) s.in_[i] = in_[i] ? 0 : 1;
    return s;
}

MeasurableSet MeasurableSet::intersect(const MeasurableSet& o) const {
    MeasurableSet s(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i) s.in_[i] = in_[i] & o.in_[i];
    return s;
}

MeasurableSet MeasurableSet::unite(const MeasurableSet& o) const {
    MeasurableSet s(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i) s.in_[i] = in_[i] | o.in_[i];
    return s;
}

MeasurableSet MeasurableSet::subtract(const MeasurableSet& o) const {
    MeasurableSet s(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i)
        s.in_[i] = in_[i] & static_cast<std::uint8_t>(o.in_[i] ? 0 : 1);
    return s;
}

// ---------------------------------------------------------------------------
// MetricMeasureSpace

void MetricMeasureSpace::validate_weights() const {
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw validation_error(
                "point weights must be strictly positive and finite");
}

MetricMeasureSpace MetricMeasureSpace::from_points(
    const std::vector<std::vector<double>>& pts, std::vector<double> weights) {
    if (pts.empty()) throw validation_error("space needs at least one point");
    const std::size_t d = pts.front().size();
    if (d < 1 || d > 3)
        throw validation_error("coordinate backend supports dimensions 1..3");
    MetricMeasureSpace s;
    s.n_ = pts.size();
    s.dim_ = static_cast<int>(d);
    for (std::size_t a = 0; a < d; ++a) s.coords_[a].resize(s.n_);
    for (std::size_t i = 0; i < s.n_; ++i) {
        if (pts[i].size() != d)
            throw validation_error("inconsistent point dimension");
        for (std::size_t a = 0; a < d; ++a) s.coords_[a][i] = pts[i][a];
    }
    s.weights_ = weights.empty() ? std::vector<double>(s.n_, 1.0)
                                 : std::move(weights);
    if (s.weights_.size() != s.n_)
        throw validation_error("weight count does not match point count");
    s.validate_weights();
    s.total_mass_ = std::accumulate(s.weights_.begin(), s.weights_.end(), 0.0);
    return s;
}

MetricMeasureSpace MetricMeasureSpace::uniform_grid(
    std::span<const double> lo, std::span<const double> hi,
    std::span<const std::size_t> cells) {
    const std::size_t d = cells.size();
    if (d < 1 || d > 3) throw validation_error("grid dimension must be 1..3");
    if (lo.size() != d || hi.size() != d)
        throw validation_error("grid extent arrays must match the dimension");
    std::size_t n = 1;
    double vol = 1.0;
    std::array<double, 3> h{};
    for (std::size_t a = 0; a < d; ++a) {
        if (cells[a] == 0 || !(hi[a] > lo[a]))
            throw validation_error("grid cells must be positive, hi > lo");
        n *= cells[a];
        h[a] = (hi[a] - lo[a]) / static_cast<double>(cells[a]);
        vol *= h[a];
    }
    MetricMeasureSpace s;
    s.n_ = n;
    s.dim_ = static_cast<int>(d);
    for (std::size_t a = 0; a < d; ++a) s.coords_[a].resize(n);
    // row-major over cells, cell centers
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rem = i;
        for (std::size_t a = d; a-- > 0;) {
            const std::size_t k = rem % cells[a];
            rem /= cells[a];
            s.coords_[a][i] = lo[a] + (static_cast<double>(k) + 0.5) * h[a];
        }
    }
    s.weights_.assign(n, vol);
    s.total_mass_ = vol * static_cast<double>(n);
    s.cell_ = *std::max_element(h.begin(), h.begin() + d);
    return s;
}

MetricMeasureSpace MetricMeasureSpace::from_table(
    std::size_t n, std::vector<double> rho_row_major,
    std::vector<double> weights) {
    if (n == 0) throw validation_error("space needs at least one point");
    if (rho_row_major.size() != n * n)
        throw validation_error("distance table must be n*n");
    MetricMeasureSpace s;
    s.n_ = n;
    s.dim_ = 0;
    s.table_ = std::move(rho_row_major);
    for (double v : s.table_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw validation_error("distances must be finite and nonnegative");
    s.weights_ =
        weights.empty() ? std::vector<double>(n, 1.0) : std::move(weights);
    if (s.weights_.size() != n)
        throw validation_error("weight count does not match point count");
    s.validate_weights();
    s.total_mass_ = std::accumulate(s.weights_.begin(), s.weights_.end(), 0.0);
    return s;
}

double MetricMeasureSpace::distance(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw validation_error("point index out of range");
    if (is_table()) return table_[i * n_ + j];
    double d2 = 0.0;
    for (int a = 0; a < dim_; ++a) {
        const double d = coords_[a][i] - coords_[a][j];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

void MetricMeasureSpace::distance_row(std::size_t i,
                                      std::span<double> out) const {
    if (i >= n_) throw validation_error("point index out of range");
    if (out.size() != n_) throw validation_error("row buffer size mismatch");
    if (is_table()) {
        std::copy_n(table_.data() + i * n_, n_, out.data());
        return;
    }
    const auto& k = kern::active();
    switch (dim_) {
        case 1:
            k.dist2_1(coords_[0].data(), n_, coords_[0][i], 0.0, out.data());
            break;
        case 2:
            k.dist2_2(coords_[0].data(), coords_[1].data(), n_, coords_[0][i],
                      coords_[1][i], 0.0, out.data());
            break;
        default:
            k.dist2_3(coords_[0].data(), coords_[1].data(), coords_[2].data(),
                      n_, coords_[0][i], coords_[1][i], coords_[2][i], 0.0,
                      out.data());
            break;
    }
    k.sqrt_ip(out.data(), n_);
}

double MetricMeasureSpace::measure(const MeasurableSet& s) const {
    if (s.size() != n_) throw validation_error("set size does not match space");
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        if (s.contains(i)) m += weights_[i];
    return m;
}

double MetricMeasureSpace::min_positive_distance(std::size_t i) const {
    std::vector<double> row(n_);
    distance_row(i, row);
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
        if (row[j] > 0.0 && (best == 0.0 || row[j] < best)) best = row[j];
    return best;
}

std::size_t MetricMeasureSpace::nearest_index(std::span<const double> x) const {
    if (is_table())
        throw validation_error("nearest_index needs a coordinate backend");
    if (static_cast<int>(x.size()) != dim_)
        throw validation_error("query dimension mismatch");
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
        double d2 = 0.0;
        for (int a = 0; a < dim_; ++a) {
            const double d = coords_[a][i] - x[a];
            d2 += d * d;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Ball queries

MeasurableSet ball_members(const MetricMeasureSpace& space, const Ball& b) {
    if (b.center >= space.size())
        throw validation_error("ball center index out of range");
    if (!(b.radius > 0.0)) throw validation_error("ball radius must be > 0");
    std::vector<double> row(space.size());
    space.distance_row(b.center, row);
    MeasurableSet s(space.size());
    for (std::size_t j = 0; j < space.size(); ++j)
        if (row[j] < b.radius) s.add(j);
    return s;
}

double measure(const MetricMeasureSpace& space, const MeasurableSet& s) {
    return space.measure(s);
}

double doubling_ratio(const MetricMeasureSpace& space, std::size_t x,
                      double r) {
    if (!(r > 0.0)) throw validation_error("radius must be > 0");
    const double small = space.measure(ball_members(space, {x, r}));
    const double big = space.measure(ball_members(space, {x, 3.0 * r}));
    return big / small;
}

MetricCheckReport verify_metric_axioms(const MetricMeasureSpace& space,
                                       std::size_t sample_count,
                                       std::uint64_t seed) {
    if (sample_count < 1) throw validation_error("sample_count must be >= 1");
    MetricCheckReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    const double tol = 1e-12;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
        const double ab = space.distance(a, b);
        const double ba = space.distance(b, a);
        const double bc = space.distance(b, c);
        const double ac = space.distance(a, c);
        const double aa = space.distance(a, a);
        const double scale = 1.0 + std::abs(ab) + std::abs(bc) + std::abs(ac);
        rep.samples_checked = s + 1;
        if (ab < 0.0) {
            rep.passed = false;
            rep.violation = {"negative", {a, b, c}, ab, 0.0};
            return rep;
        }
        if (std::abs(aa) > tol * scale) {
            rep.passed = false;
            rep.violation = {"identity", {a, a, a}, aa, 0.0};
            return rep;
        }
        if (std::abs(ab - ba) > tol * scale) {
            rep.passed = false;
            rep.violation = {"symmetry", {a, b, b}, ab, ba};
            return rep;
        }
        if (ac > ab + bc + tol * scale) {
            rep.passed = false;
            rep.violation = {"triangle", {a, b, c}, ac, ab + bc};
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Realized-radius sweep

BallSweep ball_sweep(const MetricMeasureSpace& space, std::size_t x,
                     std::span<const double> values) {
    if (values.size() != space.size())
        throw validation_error("value array size mismatch");
    const std::size_t n = space.size();
    std::vector<double> row(n);
    space.distance_row(x, row);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&row](std::uint32_t a,
                                                 std::uint32_t b) {
        return row[a] < row[b];
    });

    BallSweep sw;
    sw.thresholds.reserve(64);
    sw.cum_weight.reserve(64);
    sw.cum_value.reserve(64);
    double cw = 0.0, cv = 0.0;
    std::size_t j = 0;
    while (j < n) {
        const double d = row[order[j]];
        // fold the whole equal-distance shell into one level
        while (j < n && row[order[j]] == d) {
            const std::size_t p = order[j];
            cw += space.weight(p);
            cv += space.weight(p) * values[p];
            ++j;
        }
        sw.thresholds.push_back(d);
        sw.cum_weight.push_back(cw);
        sw.cum_value.push_back(cv);
    }
    return sw;
}

double BallSweep::open_radius_for_level(std::size_t k) const {
    const double d = thresholds[k];
    if (k + 1 < thresholds.size()) return 0.5 * (d + thresholds[k + 1]);
    return d + 1.0;
}

} // namespace harmax
