#include "harmax/kernels.hpp"

#include <cmath>

// Reference kernels. Straight loops, index order; these define the exact
// semantics the vector backends must reproduce.

namespace harmax::kern {
namespace scalar {

static void dist2_1(const double* xs, std::size_t n, double qx, double base,
                    double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = qx - xs[i];
        out[i] = dx * dx + base;
    }
}

static void dist2_2(const double* xs, const double* ys, std::size_t n,
                    double qx, double qy, double base, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        out[i] = dx * dx + dy * dy + base;
    }
}

static void dist2_3(const double* xs, const double* ys, const double* zs,
                    std::size_t n, double qx, double qy, double qz,
                    double base, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double dz = qz - zs[i];
        out[i] = dx * dx + dy * dy + dz * dz + base;
    }
}

static void sqrt_ip(double* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] = std::sqrt(a[i]);
}

static PairSum ball_sums(const double* dist, const double* w, const double* v,
                         std::size_t n, double r) {
    PairSum s;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] < r) {
            s.weight_sum += w[i];
            s.weighted_sum += w[i] * v[i];
        }
    }
    return s;
}

static double mass_above(const double* g, const double* w, std::size_t n,
                         double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (g[i] > lambda) s += w[i];
    return s;
}

static double accum_inv(const double* d2, const double* fw, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += fw[i] / d2[i];
    return s;
}

static double accum_inv_pow32(const double* d2, const double* fw,
                              std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += fw[i] / (d2[i] * std::sqrt(d2[i]));
    return s;
}

static double accum_inv_sq(const double* d2, const double* fw, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += fw[i] / (d2[i] * d2[i]);
    return s;
}

} // namespace scalar

const Backend& scalar_backend() {
    static const Backend b = {
        scalar::dist2_1,  scalar::dist2_2,    scalar::dist2_3,
        scalar::sqrt_ip,  scalar::ball_sums,  scalar::mass_above,
        scalar::accum_inv, scalar::accum_inv_pow32, scalar::accum_inv_sq,
        "scalar",
    };
    return b;
}

double accum_inv_powq(const double* d2, const double* fw, std::size_t n,
                      double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += fw[i] * std::pow(d2[i], -q);
    return s;
}

} // namespace harmax::kern
