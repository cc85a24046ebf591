#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace harmax {

// The four model domains with closed-form Poisson kernels: the unit disc in
// R^2, the upper halfplane, the unit ball in R^N, and the upper halfspace
// R^{N+1}_+ with boundary R^N.
enum class DomainVariant { disc, halfplane, ball, halfspace };

struct KernelDomain {
    DomainVariant variant = DomainVariant::disc;
    // ball: ambient dimension N >= 2; halfspace: boundary dimension N >= 1.
    int n = 0;

    static KernelDomain disc();
    static KernelDomain halfplane();
    static KernelDomain ball(int ambient_n);
    static KernelDomain halfspace(int boundary_n);

    int ambient_dim() const;
    int boundary_coord_dim() const;  // how many coordinates a boundary node has
    // distance to the boundary (disc/ball: 1 - |x|, halfplane/halfspace: last
    // coordinate)
    double delta(std::span<const double> x) const;
    bool is_interior(std::span<const double> x) const;  // delta > 1e-12
    bool on_boundary(std::span<const double> t) const;  // within 1e-12
    double normalizing_constant() const;
    // exponent d in the two-sided comparison P(x,t) ~ delta(x) / |x-t|^d
    int comparability_exponent() const;
};

// Quadrature nodes on (a truncation of) the boundary, coordinates stored
// column-wise. weights sum to sigma of the (truncated) boundary.
struct BoundaryGrid {
    std::array<std::vector<double>, 3> coords;
    std::vector<double> weights;
    int coord_dim = 0;

    std::size_t size() const { return weights.size(); }
    double sigma_total() const;
    std::vector<double> node(std::size_t k) const;
};

// Uniform angles on the unit circle; trapezoid weights (spectral accuracy for
// the periodic kernel integrand).
BoundaryGrid circle_grid(std::size_t nodes);
// Product rule on S^2: Gauss-Legendre in cos(polar angle) so the sine factor
// of the area element is absorbed into the latitude weights, uniform in
// longitude.
BoundaryGrid sphere_grid(std::size_t n_lat, std::size_t n_lon);
// Midpoint cells on [-radius, radius] (halfplane or halfspace N = 1).
BoundaryGrid line_grid(double radius, std::size_t cells);
// Midpoint cells on [-radius, radius]^2 (halfspace N = 2).
BoundaryGrid plane_grid(double radius, std::size_t cells_per_side);

// Sizes a line grid so the truncation tail stays below tail_budget for
// interior points with height in [min_height, max_height] and |offset| up to
// max_offset, and the midpoint-rule aliasing error stays below alias_budget.
BoundaryGrid line_grid_for(double min_height, double max_height,
                           double max_offset, double tail_budget,
                           double alias_budget);

// Mass of the halfplane kernel outside [-R, R], exact.
double halfplane_truncation_tail(std::span<const double> x, double R);
// Mass of the halfspace N=2 kernel outside the disc of radius R around x',
// exact; a lower bound for the square truncation [-R, R]^2.
double halfspace2_truncation_tail(double height, double R);

// Closed-form kernel value; validates x interior and t on the boundary.
double kernel_eval(const KernelDomain& domain, std::span<const double> x,
                   std::span<const double> t);

// P(x,t) * |x - t|^d / delta(x) with d the comparability exponent.
double asymptotic_ratio(const KernelDomain& domain, std::span<const double> x,
                        std::span<const double> t);

// Quadrature of the kernel against boundary samples. Holds references to the
// grid; keep it alive while evaluating.
class PoissonEvaluator {
public:
    PoissonEvaluator(const KernelDomain& domain, const BoundaryGrid& grid,
                     std::span<const double> boundary_values);
    double operator()(std::span<const double> x) const;

private:
    const KernelDomain dom_;
    const BoundaryGrid& grid_;
    std::vector<double> fw_;  // value * weight per node
    double half_exponent_;
};

// Sum of P(x, t_k) w_k; approaches 1 as the grid refines.
double kernel_normalization(const KernelDomain& domain,
                            std::span<const double> x,
                            const BoundaryGrid& grid);

double poisson_extend(const KernelDomain& domain, const BoundaryGrid& grid,
                      std::span<const double> boundary_values,
                      std::span<const double> x);

struct SurfaceBall {
    std::vector<std::size_t> nodes;
    double sigma = 0.0;
};

// Nodes within ambient Euclidean distance r of node y.
SurfaceBall surface_ball(const BoundaryGrid& grid, std::size_t y, double r);

// sup over realized radii of sigma-averages of |f| over surface balls at y.
double boundary_maximal(const BoundaryGrid& grid,
                        std::span<const double> values, std::size_t y);

struct ConeRegion {
    std::vector<double> apex;  // ambient coordinates of a boundary point
    double aperture = 2.0;     // alpha
};

// The strict test |x - apex| < alpha * delta(x).
bool cone_contains(const KernelDomain& domain, const ConeRegion& cone,
                   std::span<const double> x);

std::vector<double> to_ambient(const KernelDomain& domain,
                               std::span<const double> boundary_point);

struct NontangentialRow {
    double scale = 0.0;
    std::vector<double> errors;  // |u(x) - f(y)| per cone sample point
    double max_error = 0.0;
    // largest |u(x) - oracle(x)| over the sample, when an oracle is supplied
    double max_oracle_deviation = 0.0;
};

struct NontangentialReport {
    std::vector<NontangentialRow> rows;
    double f_apex = 0.0;
};

using BoundaryFn = std::function<double(std::span<const double>)>;
using InteriorFn = std::function<double(std::span<const double>)>;

// For each scale h, samples the cone at distance ~h from the apex (normal ray
// plus near-maximal slants), extends f by quadrature and records
// |u(x) - f(y)|. `oracle`, when given, is the exact extension used to track
// quadrature deviation separately.
NontangentialReport nontangential_experiment(
    const KernelDomain& domain, const BoundaryGrid& grid, const BoundaryFn& f,
    std::span<const double> y_boundary, double alpha,
    std::span<const double> approach_scales, const InteriorFn& oracle = {});

} // namespace harmax
