#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace harmax {

// An open metric ball: center is a point index, radius in distance units.
struct Ball {
    std::size_t center = 0;
    double radius = 0.0;

    Ball dilated(double c) const { return {center, c * radius}; }
};

// Subset of point indices, kept as a byte mask for O(1) membership.
class MeasurableSet {
public:
    MeasurableSet() = default;
    explicit MeasurableSet(std::size_t n) : in_(n, 0) {}
    static MeasurableSet from_indices(std::size_t n,
                                      std::span<const std::size_t> idx);

    std::size_t size() const { return in_.size(); }
    bool contains(std::size_t i) const { return in_[i] != 0; }
    void add(std::size_t i) { in_[i] = 1; }
    void remove(std::size_t i) { in_[i] = 0; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::size_t> members() const;

    MeasurableSet complement() const;
    MeasurableSet intersect(const MeasurableSet& o) const;
    MeasurableSet unite(const MeasurableSet& o) const;
    MeasurableSet subtract(const MeasurableSet& o) const;

private:
    std::vector<std::uint8_t> in_;
};

// Finite weighted point cloud with a metric: either coordinates in R^d
// (d = 1..3, Euclidean) or an explicit symmetric distance table. Immutable
// after construction; all queries are pure.
class MetricMeasureSpace {
public:
    static MetricMeasureSpace from_points(
        const std::vector<std::vector<double>>& pts,
        std::vector<double> weights = {});
    // Uniform cell-centered grid on the box [lo, hi]; each point carries the
    // Lebesgue mass of its cell.
    static MetricMeasureSpace uniform_grid(std::span<const double> lo,
                                           std::span<const double> hi,
                                           std::span<const std::size_t> cells);
    static MetricMeasureSpace from_table(std::size_t n,
                                         std::vector<double> rho_row_major,
                                         std::vector<double> weights = {});

    std::size_t size() const { return n_; }
    int dim() const { return dim_; }  // 0 for the table backend
    bool is_table() const { return dim_ == 0; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }
    double total_mass() const { return total_mass_; }
    // Mesh width of a uniform_grid construction (0 otherwise); reported as
    // discretization slack by the statistical modules.
    double cell_size() const { return cell_; }

    double coord(std::size_t i, int axis) const { return coords_[axis][i]; }
    std::span<const double> axis(int a) const { return coords_[a]; }

    double distance(std::size_t i, std::size_t j) const;
    // Fills out[j] = rho(i, j) for all j (SIMD path on the Euclidean backend).
    void distance_row(std::size_t i, std::span<double> out) const;

    double measure(const MeasurableSet& s) const;

    // Smallest nonzero distance from i; 0 when i is the only point.
    double min_positive_distance(std::size_t i) const;
    std::size_t nearest_index(std::span<const double> x) const;

private:
    MetricMeasureSpace() = default;
    void validate_weights() const;

    std::size_t n_ = 0;
    int dim_ = 0;
    std::array<std::vector<double>, 3> coords_;
    std::vector<double> weights_;
    std::vector<double> table_;
    double total_mass_ = 0.0;
    double cell_ = 0.0;
};

// Exactly the points with rho(center, t) < radius; always contains the center.
MeasurableSet ball_members(const MetricMeasureSpace& space, const Ball& b);

double measure(const MetricMeasureSpace& space, const MeasurableSet& s);

// |B(x, 3r)| / |B(x, r)|. The denominator is never zero: x is in its own ball.
double doubling_ratio(const MetricMeasureSpace& space, std::size_t x, double r);

struct MetricViolation {
    std::string kind;  // "symmetry" | "triangle" | "identity" | "negative"
    std::array<std::size_t, 3> triple;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct MetricCheckReport {
    bool passed = true;
    std::size_t samples_checked = 0;
    std::optional<MetricViolation> violation;
};

// Symmetry / identity / triangle inequality on seeded random triples.
MetricCheckReport verify_metric_axioms(const MetricMeasureSpace& space,
                                       std::size_t sample_count,
                                       std::uint64_t seed);

// The sweep over realized radii from a fixed center. thresholds[k] is the
// k-th distinct distance from x (thresholds[0] == 0); cum_weight[k] and
// cum_value[k] are the sums of w and w*v over the closed ball
// {t : rho(x,t) <= thresholds[k]}. On a finite space every ball average and
// every sup over r > 0 is a finite max over these prefixes.
struct BallSweep {
    std::vector<double> thresholds;
    std::vector<double> cum_weight;
    std::vector<double> cum_value;

    std::size_t levels() const { return thresholds.size(); }
    double average(std::size_t k) const { return cum_value[k] / cum_weight[k]; }
    // An open-ball radius r with members(B(x,r)) equal to the closed ball at
    // level k: strictly between thresholds[k] and the next realized distance.
    double open_radius_for_level(std::size_t k) const;
};

BallSweep ball_sweep(const MetricMeasureSpace& space, std::size_t x,
                     std::span<const double> values);

} // namespace harmax
