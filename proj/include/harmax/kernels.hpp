#pragma once

#include <cstddef>

// Data-parallel inner loops used by the space / maximal / poisson modules:
// squared-distance rows, masked weighted accumulation over a ball, superlevel
// mass, and reciprocal-power quadrature sums. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active
// backend is picked once at runtime. The scalar versions define the semantics
// and the AVX2 versions are equivalence-tested against them.

namespace harmax::kern {

struct PairSum {
    double weight_sum = 0.0;    // sum of w[i] over selected lanes
    double weighted_sum = 0.0;  // sum of w[i] * v[i] over selected lanes
};

struct Backend {
    // out[i] = (qx - xs[i])^2 + base
    void (*dist2_1)(const double* xs, std::size_t n, double qx, double base,
                    double* out);
    void (*dist2_2)(const double* xs, const double* ys, std::size_t n,
                    double qx, double qy, double base, double* out);
    void (*dist2_3)(const double* xs, const double* ys, const double* zs,
                    std::size_t n, double qx, double qy, double qz,
                    double base, double* out);
    // in-place elementwise square root
    void (*sqrt_ip)(double* a, std::size_t n);
    // sums of (w, w*v) over lanes with dist[i] < r
    PairSum (*ball_sums)(const double* dist, const double* w, const double* v,
                         std::size_t n, double r);
    // sum of w[i] over lanes with g[i] > lambda
    double (*mass_above)(const double* g, const double* w, std::size_t n,
                         double lambda);
    // quadrature accumulators: sum of fw[i] / d2[i]^q for q = 1, 3/2, 2
    double (*accum_inv)(const double* d2, const double* fw, std::size_t n);
    double (*accum_inv_pow32)(const double* d2, const double* fw,
                              std::size_t n);
    double (*accum_inv_sq)(const double* d2, const double* fw, std::size_t n);
    const char* name;
};

const Backend& scalar_backend();

#if defined(HARMAX_HAVE_AVX2)
const Backend& avx2_backend();
#endif

// Backend selected at startup (AVX2 when the CPU supports it), unless forced.
const Backend& active();

// Test / CLI hook: route everything through the scalar reference kernels.
void force_scalar(bool on);

// General half-exponent q; no SIMD variant, scalar only.
double accum_inv_powq(const double* d2, const double* fw, std::size_t n,
                      double q);

} // namespace harmax::kern
