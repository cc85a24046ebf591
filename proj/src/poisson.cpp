#include "harmax/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "harmax/errors.hpp"
#include "harmax/kernels.hpp"
#include "harmax/util.hpp"

namespace harmax {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-12;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return s;
}

void check_dims(const KernelDomain& d, std::span<const double> x,
                std::span<const double> t) {
    if (static_cast<int>(x.size()) != d.ambient_dim())
        throw validation_error("interior point has wrong dimension");
    if (static_cast<int>(t.size()) != d.boundary_coord_dim())
        throw validation_error("boundary point has wrong dimension");
}

// |x - t|^2 with t embedded into the ambient space at height 0 for the
// halfplane / halfspace variants.
double dist2_to_boundary(const KernelDomain& d, std::span<const double> x,
                         std::span<const double> t) {
    double s = 0.0;
    switch (d.variant) {
        case DomainVariant::disc:
        case DomainVariant::ball:
            for (std::size_t a = 0; a < t.size(); ++a) {
                const double dd = x[a] - t[a];
                s += dd * dd;
            }
            return s;
        case DomainVariant::halfplane:
        case DomainVariant::halfspace: {
            for (std::size_t a = 0; a < t.size(); ++a) {
                const double dd = x[a] - t[a];
                s += dd * dd;
            }
            const double h = x[x.size() - 1];
            return s + h * h;
        }
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// KernelDomain

KernelDomain KernelDomain::disc() { return {DomainVariant::disc, 2}; }
KernelDomain KernelDomain::halfplane() { return {DomainVariant::halfplane, 1}; }

KernelDomain KernelDomain::ball(int ambient_n) {
    if (ambient_n < 2) throw validation_error("ball needs ambient dim >= 2");
    return {DomainVariant::ball, ambient_n};
}

KernelDomain KernelDomain::halfspace(int boundary_n) {
    if (boundary_n < 1)
        throw validation_error("halfspace needs boundary dim >= 1");
    return {DomainVariant::halfspace, boundary_n};
}

int KernelDomain::ambient_dim() const {
    switch (variant) {
        case DomainVariant::disc: return 2;
        case DomainVariant::halfplane: return 2;
        case DomainVariant::ball: return n;
        case DomainVariant::halfspace: return n + 1;
    }
    return 0;
}

int KernelDomain::boundary_coord_dim() const {
    switch (variant) {
        case DomainVariant::disc: return 2;
        case DomainVariant::halfplane: return 1;
        case DomainVariant::ball: return n;
        case DomainVariant::halfspace: return n;
    }
    return 0;
}

double KernelDomain::delta(std::span<const double> x) const {
    switch (variant) {
        case DomainVariant::disc:
        case DomainVariant::ball:
            return 1.0 - std::sqrt(norm2(x));
        case DomainVariant::halfplane:
        case DomainVariant::halfspace:
            return x[x.size() - 1];
    }
    return 0.0;
}

bool KernelDomain::is_interior(std::span<const double> x) const {
    return static_cast<int>(x.size()) == ambient_dim() &&
           delta(x) > kBoundaryTol;
}

bool KernelDomain::on_boundary(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != boundary_coord_dim()) return false;
    switch (variant) {
        case DomainVariant::disc:
        case DomainVariant::ball:
            return std::abs(std::sqrt(norm2(t)) - 1.0) <= kBoundaryTol;
        case DomainVariant::halfplane:
        case DomainVariant::halfspace:
            return true;  // every coordinate tuple parametrizes the boundary
    }
    return false;
}

double KernelDomain::normalizing_constant() const {
    switch (variant) {
        case DomainVariant::disc:
            return 1.0 / (2.0 * kPi);
        case DomainVariant::halfplane:
            return 1.0 / kPi;
        case DomainVariant::ball:
            return std::tgamma(n / 2.0) / (2.0 * std::pow(kPi, n / 2.0));
        case DomainVariant::halfspace:
            return std::tgamma((n + 1) / 2.0) / std::pow(kPi, (n + 1) / 2.0);
    }
    return 0.0;
}

int KernelDomain::comparability_exponent() const {
    switch (variant) {
        case DomainVariant::disc: return 2;
        case DomainVariant::halfplane: return 2;
        case DomainVariant::ball: return n;
        case DomainVariant::halfspace: return n + 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Boundary grids

double BoundaryGrid::sigma_total() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::vector<double> BoundaryGrid::node(std::size_t k) const {
    std::vector<double> p(coord_dim);
    for (int a = 0; a < coord_dim; ++a) p[a] = coords[a][k];
    return p;
}

BoundaryGrid circle_grid(std::size_t nodes) {
    if (nodes == 0) throw validation_error("grid needs at least one node");
    BoundaryGrid g;
    g.coord_dim = 2;
    g.coords[0].resize(nodes);
    g.coords[1].resize(nodes);
    g.weights.assign(nodes, 2.0 * kPi / static_cast<double>(nodes));
    for (std::size_t k = 0; k < nodes; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) /
                          static_cast<double>(nodes);
        g.coords[0][k] = std::cos(th);
        g.coords[1][k] = std::sin(th);
    }
    return g;
}

BoundaryGrid sphere_grid(std::size_t n_lat, std::size_t n_lon) {
    if (n_lat == 0 || n_lon == 0)
        throw validation_error("grid needs at least one node");
    const auto [u, wu] = util::gauss_legendre(n_lat);
    BoundaryGrid g;
    g.coord_dim = 3;
    const std::size_t n = n_lat * n_lon;
    for (int a = 0; a < 3; ++a) g.coords[a].resize(n);
    g.weights.resize(n);
    const double wphi = 2.0 * kPi / static_cast<double>(n_lon);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_lat; ++i) {
        const double cz = u[i];
        const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        for (std::size_t j = 0; j < n_lon; ++j, ++k) {
            const double phi = 2.0 * kPi * static_cast<double>(j) /
                               static_cast<double>(n_lon);
            g.coords[0][k] = sz * std::cos(phi);
            g.coords[1][k] = sz * std::sin(phi);
            g.coords[2][k] = cz;
            g.weights[k] = wu[i] * wphi;
        }
    }
    return g;
}

BoundaryGrid line_grid(double radius, std::size_t cells) {
    if (!(radius > 0.0) || cells == 0)
        throw validation_error("line grid needs radius > 0 and cells > 0");
    BoundaryGrid g;
    g.coord_dim = 1;
    g.coords[0].resize(cells);
    const double h = 2.0 * radius / static_cast<double>(cells);
    g.weights.assign(cells, h);
    for (std::size_t k = 0; k < cells; ++k)
        g.coords[0][k] = -radius + (static_cast<double>(k) + 0.5) * h;
    return g;
}

BoundaryGrid plane_grid(double radius, std::size_t cells_per_side) {
    if (!(radius > 0.0) || cells_per_side == 0)
        throw validation_error("plane grid needs radius > 0 and cells > 0");
    BoundaryGrid g;
    g.coord_dim = 2;
    const std::size_t n = cells_per_side * cells_per_side;
    g.coords[0].resize(n);
    g.coords[1].resize(n);
    const double h = 2.0 * radius / static_cast<double>(cells_per_side);
    g.weights.assign(n, h * h);
    std::size_t k = 0;
    for (std::size_t i = 0; i < cells_per_side; ++i)
        for (std::size_t j = 0; j < cells_per_side; ++j, ++k) {
            g.coords[0][k] = -radius + (static_cast<double>(i) + 0.5) * h;
            g.coords[1][k] = -radius + (static_cast<double>(j) + 0.5) * h;
        }
    return g;
}

BoundaryGrid line_grid_for(double min_height, double max_height,
                           double max_offset, double tail_budget,
                           double alias_budget) {
    if (!(min_height > 0.0 && max_height >= min_height))
        throw validation_error("heights must satisfy 0 < min <= max");
    // Exact tail is (x2/pi)(1/(R-x1) + 1/(R+x1)); bound both terms by the
    // closer edge. Midpoint rule on the full line has aliasing error about
    // 2 exp(-2 pi x2 / h) (Poisson summation), so h is set from min_height.
    const double R =
        max_offset + 2.0 * max_height / (kPi * tail_budget);
    const double h = 2.0 * kPi * min_height / std::log(2.0 / alias_budget);
    const auto cells = static_cast<std::size_t>(std::ceil(2.0 * R / h));
    return line_grid(R, cells);
}

double halfplane_truncation_tail(std::span<const double> x, double R) {
    const double x1 = x[0], x2 = x[1];
    return 1.0 - (std::atan((R - x1) / x2) + std::atan((R + x1) / x2)) / kPi;
}

double halfspace2_truncation_tail(double height, double R) {
    return height / std::sqrt(R * R + height * height);
}

// ---------------------------------------------------------------------------
// Kernel evaluation

double kernel_eval(const KernelDomain& domain, std::span<const double> x,
                   std::span<const double> t) {
    check_dims(domain, x, t);
    if (!domain.is_interior(x))
        throw validation_error("x must be strictly interior");
    if (!domain.on_boundary(t))
        throw validation_error("t must lie on the boundary");
    const double c = domain.normalizing_constant();
    const double d2 = dist2_to_boundary(domain, x, t);
    switch (domain.variant) {
        case DomainVariant::disc:
            return c * (1.0 - norm2(x)) / d2;
        case DomainVariant::halfplane:
            return c * x[1] / d2;
        case DomainVariant::ball:
            return c * (1.0 - norm2(x)) / std::pow(d2, domain.n / 2.0);
        case DomainVariant::halfspace:
            return c * x[x.size() - 1] / std::pow(d2, (domain.n + 1) / 2.0);
    }
    return 0.0;
}

double asymptotic_ratio(const KernelDomain& domain, std::span<const double> x,
                        std::span<const double> t) {
    const double p = kernel_eval(domain, x, t);
    const double d2 = dist2_to_boundary(domain, x, t);
    const double dist_pow =
        std::pow(d2, domain.comparability_exponent() / 2.0);
    return p * dist_pow / domain.delta(x);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

double accum_half_exponent(const KernelDomain& d) {
    switch (d.variant) {
        case DomainVariant::disc: return 1.0;
        case DomainVariant::halfplane: return 1.0;
        case DomainVariant::ball: return d.n / 2.0;
        case DomainVariant::halfspace: return (d.n + 1) / 2.0;
    }
    return 1.0;
}

double kernel_prefactor(const KernelDomain& d, std::span<const double> x) {
    const double c = d.normalizing_constant();
    switch (d.variant) {
        case DomainVariant::disc:
        case DomainVariant::ball:
            return c * (1.0 - norm2(x));
        case DomainVariant::halfplane:
        case DomainVariant::halfspace:
            return c * x[x.size() - 1];
    }
    return 0.0;
}

void fill_d2_row(const KernelDomain& d, const BoundaryGrid& g,
                 std::span<const double> x, std::vector<double>& d2) {
    d2.resize(g.size());
    const auto& k = kern::active();
    double base = 0.0;
    if (d.variant == DomainVariant::halfplane ||
        d.variant == DomainVariant::halfspace)
        base = x[x.size() - 1] * x[x.size() - 1];
    switch (g.coord_dim) {
        case 1:
            k.dist2_1(g.coords[0].data(), g.size(), x[0], base, d2.data());
            break;
        case 2:
            k.dist2_2(g.coords[0].data(), g.coords[1].data(), g.size(), x[0],
                      x[1], base, d2.data());
            break;
        default:
            k.dist2_3(g.coords[0].data(), g.coords[1].data(),
                      g.coords[2].data(), g.size(), x[0], x[1], x[2], base,
                      d2.data());
            break;
    }
}

double accumulate_quadrature(double half_exp, std::span<const double> d2,
                             std::span<const double> fw) {
    const auto& k = kern::active();
    if (half_exp == 1.0) return k.accum_inv(d2.data(), fw.data(), d2.size());
    if (half_exp == 1.5)
        return k.accum_inv_pow32(d2.data(), fw.data(), d2.size());
    if (half_exp == 2.0) return k.accum_inv_sq(d2.data(), fw.data(), d2.size());
    return kern::accum_inv_powq(d2.data(), fw.data(), d2.size(), half_exp);
}

} // namespace

PoissonEvaluator::PoissonEvaluator(const KernelDomain& domain,
                                   const BoundaryGrid& grid,
                                   std::span<const double> boundary_values)
    : dom_(domain), grid_(grid), half_exponent_(accum_half_exponent(domain)) {
    if (grid.coord_dim != domain.boundary_coord_dim())
        throw validation_error("grid dimension does not match the domain");
    if (boundary_values.size() != grid.size())
        throw validation_error("boundary samples do not match the grid");
    fw_.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        fw_[k] = boundary_values[k] * grid.weights[k];
}

double PoissonEvaluator::operator()(std::span<const double> x) const {
    if (!dom_.is_interior(x))
        throw validation_error("x must be strictly interior");
    std::vector<double> d2;
    fill_d2_row(dom_, grid_, x, d2);
    return kernel_prefactor(dom_, x) *
           accumulate_quadrature(half_exponent_, d2, fw_);
}

double kernel_normalization(const KernelDomain& domain,
                            std::span<const double> x,
                            const BoundaryGrid& grid) {
    const PoissonEvaluator ones(domain, grid,
                                std::vector<double>(grid.size(), 1.0));
    return ones(x);
}

double poisson_extend(const KernelDomain& domain, const BoundaryGrid& grid,
                      std::span<const double> boundary_values,
                      std::span<const double> x) {
    return PoissonEvaluator(domain, grid, boundary_values)(x);
}

// ---------------------------------------------------------------------------
// Surface balls and the boundary maximal operator

namespace {

void chord_d2_row(const BoundaryGrid& g, std::size_t y,
                  std::vector<double>& d2) {
    d2.resize(g.size());
    const auto& k = kern::active();
    switch (g.coord_dim) {
        case 1:
            k.dist2_1(g.coords[0].data(), g.size(), g.coords[0][y], 0.0,
                      d2.data());
            break;
        case 2:
            k.dist2_2(g.coords[0].data(), g.coords[1].data(), g.size(),
                      g.coords[0][y], g.coords[1][y], 0.0, d2.data());
            break;
        default:
            k.dist2_3(g.coords[0].data(), g.coords[1].data(),
                      g.coords[2].data(), g.size(), g.coords[0][y],
                      g.coords[1][y], g.coords[2][y], 0.0, d2.data());
            break;
    }
}

} // namespace

SurfaceBall surface_ball(const BoundaryGrid& grid, std::size_t y, double r) {
    if (y >= grid.size()) throw validation_error("node index out of range");
    if (!(r > 0.0)) throw validation_error("radius must be > 0");
    std::vector<double> d2;
    chord_d2_row(grid, y, d2);
    SurfaceBall b;
    const double r2 = r * r;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (d2[k] < r2) {
            b.nodes.push_back(k);
            b.sigma += grid.weights[k];
        }
    }
    return b;
}

double boundary_maximal(const BoundaryGrid& grid,
                        std::span<const double> values, std::size_t y) {
    if (values.size() != grid.size())
        throw validation_error("boundary samples do not match the grid");
    if (y >= grid.size()) throw validation_error("node index out of range");
    std::vector<double> d2;
    chord_d2_row(grid, y, d2);
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&d2](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
    double best = 0.0, cw = 0.0, cv = 0.0;
    std::size_t j = 0;
    while (j < order.size()) {
        const double d = d2[order[j]];
        while (j < order.size() && d2[order[j]] == d) {
            const std::size_t k = order[j];
            cw += grid.weights[k];
            cv += grid.weights[k] * std::abs(values[k]);
            ++j;
        }
        best = std::max(best, cv / cw);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Cones and nontangential approach

bool cone_contains(const KernelDomain& domain, const ConeRegion& cone,
                   std::span<const double> x) {
    if (!domain.is_interior(x))
        throw validation_error("x must be strictly interior");
    if (cone.apex.size() != x.size())
        throw validation_error("apex dimension mismatch");
    double d2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double d = x[a] - cone.apex[a];
        d2 += d * d;
    }
    return std::sqrt(d2) < cone.aperture * domain.delta(x);
}

std::vector<double> to_ambient(const KernelDomain& domain,
                               std::span<const double> boundary_point) {
    if (static_cast<int>(boundary_point.size()) !=
        domain.boundary_coord_dim())
        throw validation_error("boundary point has wrong dimension");
    std::vector<double> p(boundary_point.begin(), boundary_point.end());
    if (domain.variant == DomainVariant::halfplane ||
        domain.variant == DomainVariant::halfspace)
        p.push_back(0.0);
    return p;
}

namespace {

std::vector<std::vector<double>> tangent_frame(const KernelDomain& d,
                                               std::span<const double> y_amb) {
    const int dim = d.ambient_dim();
    std::vector<std::vector<double>> dirs;
    if (d.variant == DomainVariant::halfplane ||
        d.variant == DomainVariant::halfspace) {
        for (int a = 0; a + 1 < dim; ++a) {
            std::vector<double> e(dim, 0.0);
            e[a] = 1.0;
            dirs.push_back(e);
            e[a] = -1.0;
            dirs.push_back(e);
        }
        return dirs;
    }
    // disc / ball: tangents orthogonal to the radius at y
    if (dim == 2) {
        dirs.push_back({-y_amb[1], y_amb[0]});
        dirs.push_back({y_amb[1], -y_amb[0]});
        return dirs;
    }
    // pick a helper axis least aligned with y, Gram-Schmidt two tangents
    int least = 0;
    for (int a = 1; a < dim; ++a)
        if (std::abs(y_amb[a]) < std::abs(y_amb[least])) least = a;
    std::vector<double> t1(dim, 0.0);
    t1[least] = 1.0;
    double dot = 0.0;
    for (int a = 0; a < dim; ++a) dot += t1[a] * y_amb[a];
    for (int a = 0; a < dim; ++a) t1[a] -= dot * y_amb[a];
    double nrm = std::sqrt(norm2(t1));
    for (int a = 0; a < dim; ++a) t1[a] /= nrm;
    std::vector<double> t2(dim, 0.0);
    if (dim == 3) {
        t2[0] = y_amb[1] * t1[2] - y_amb[2] * t1[1];
        t2[1] = y_amb[2] * t1[0] - y_amb[0] * t1[2];
        t2[2] = y_amb[0] * t1[1] - y_amb[1] * t1[0];
    }
    dirs.push_back(t1);
    std::vector<double> m1 = t1;
    for (auto& c : m1) c = -c;
    dirs.push_back(m1);
    if (dim == 3) {
        dirs.push_back(t2);
        std::vector<double> m2 = t2;
        for (auto& c : m2) c = -c;
        dirs.push_back(m2);
    }
    return dirs;
}

} // namespace

NontangentialReport nontangential_experiment(
    const KernelDomain& domain, const BoundaryGrid& grid, const BoundaryFn& f,
    std::span<const double> y_boundary, double alpha,
    std::span<const double> approach_scales, const InteriorFn& oracle) {
    if (!(alpha > 1.0))
        throw validation_error(
            "aperture must exceed 1: the cone is empty on the normal ray "
            "otherwise");
    if (!domain.on_boundary(y_boundary))
        throw validation_error("apex must lie on the boundary");
    for (std::size_t i = 0; i < approach_scales.size(); ++i) {
        if (!(approach_scales[i] > 0.0))
            throw validation_error("scales must be positive");
        if (i > 0 && !(approach_scales[i] < approach_scales[i - 1]))
            throw validation_error("scales must be strictly decreasing");
    }

    const std::vector<double> y_amb = to_ambient(domain, y_boundary);
    const int dim = domain.ambient_dim();

    std::vector<double> normal(dim);
    if (domain.variant == DomainVariant::disc ||
        domain.variant == DomainVariant::ball) {
        for (int a = 0; a < dim; ++a) normal[a] = -y_amb[a];
    } else {
        normal.assign(dim, 0.0);
        normal[dim - 1] = 1.0;
    }
    const auto tangents = tangent_frame(domain, y_amb);
    const ConeRegion cone{y_amb, alpha};

    std::vector<double> fvals(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) fvals[k] = f(grid.node(k));
    const PoissonEvaluator u(domain, grid, fvals);

    NontangentialReport rep;
    rep.f_apex = f(y_boundary);

    const double psi_max = std::acos(1.0 / alpha);
    for (double h : approach_scales) {
        NontangentialRow row;
        row.scale = h;
        std::vector<std::vector<double>> pts;

        std::vector<double> xn(dim);
        for (int a = 0; a < dim; ++a) xn[a] = y_amb[a] + h * normal[a];
        if (!domain.is_interior(xn))
            throw validation_error("approach scale leaves the domain");
        pts.push_back(xn);

        for (double frac : {0.9, 0.99}) {
            for (const auto& tau : tangents) {
                double psi = frac * psi_max;
                // curvature can push a straight-line slant out of the cone;
                // back off toward the normal until the strict test passes
                for (int tries = 0; tries < 200; ++tries) {
                    std::vector<double> x(dim);
                    for (int a = 0; a < dim; ++a)
                        x[a] = y_amb[a] + h * (std::cos(psi) * normal[a] +
                                               std::sin(psi) * tau[a]);
                    if (domain.is_interior(x) &&
                        cone_contains(domain, cone, x)) {
                        pts.push_back(std::move(x));
                        break;
                    }
                    psi *= 0.9;
                }
            }
        }

        for (const auto& x : pts) {
            const double ux = u(x);
            row.errors.push_back(std::abs(ux - rep.f_apex));
            row.max_error = std::max(row.max_error, row.errors.back());
            if (oracle)
                row.max_oracle_deviation = std::max(
                    row.max_oracle_deviation, std::abs(ux - oracle(x)));
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace harmax
