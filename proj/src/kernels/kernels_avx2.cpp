#if defined(HARMAX_HAVE_AVX2)

#include "harmax/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 variants, 4 doubles per lane group. Masked accumulation uses a
// full-width compare + and; horizontal reduction happens once at the end.
// Summation order differs from the scalar reference, so results agree to
// rounding, not bitwise (the equivalence tests use a tolerance).

namespace harmax::kern {
namespace avx2 {

static inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

static void dist2_1(const double* xs, std::size_t n, double qx, double base,
                    double* out) {
    const __m256d q = _mm256_set1_pd(qx);
    const __m256d b = _mm256_set1_pd(base);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(q, _mm256_loadu_pd(xs + i));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(d, d, b));
    }
    for (; i < n; ++i) {
        const double dx = qx - xs[i];
        out[i] = dx * dx + base;
    }
}

static void dist2_2(const double* xs, const double* ys, std::size_t n,
                    double qx, double qy, double base, double* out) {
    const __m256d q0 = _mm256_set1_pd(qx);
    const __m256d q1 = _mm256_set1_pd(qy);
    const __m256d b = _mm256_set1_pd(base);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(q0, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(q1, _mm256_loadu_pd(ys + i));
        __m256d acc = _mm256_fmadd_pd(dx, dx, b);
        acc = _mm256_fmadd_pd(dy, dy, acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        out[i] = dx * dx + dy * dy + base;
    }
}

static void dist2_3(const double* xs, const double* ys, const double* zs,
                    std::size_t n, double qx, double qy, double qz,
                    double base, double* out) {
    const __m256d q0 = _mm256_set1_pd(qx);
    const __m256d q1 = _mm256_set1_pd(qy);
    const __m256d q2 = _mm256_set1_pd(qz);
    const __m256d b = _mm256_set1_pd(base);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(q0, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(q1, _mm256_loadu_pd(ys + i));
        const __m256d dz = _mm256_sub_pd(q2, _mm256_loadu_pd(zs + i));
        __m256d acc = _mm256_fmadd_pd(dx, dx, b);
        acc = _mm256_fmadd_pd(dy, dy, acc);
        acc = _mm256_fmadd_pd(dz, dz, acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double dz = qz - zs[i];
        out[i] = dx * dx + dy * dy + dz * dz + base;
    }
}

static void sqrt_ip(double* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(a + i, _mm256_sqrt_pd(_mm256_loadu_pd(a + i)));
    for (; i < n; ++i) a[i] = std::sqrt(a[i]);
}

static PairSum ball_sums(const double* dist, const double* w, const double* v,
                         std::size_t n, double r) {
    const __m256d rr = _mm256_set1_pd(r);
    __m256d acc_w = _mm256_setzero_pd();
    __m256d acc_wv = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(dist + i);
        const __m256d mask = _mm256_cmp_pd(d, rr, _CMP_LT_OQ);
        const __m256d wi = _mm256_and_pd(mask, _mm256_loadu_pd(w + i));
        acc_w = _mm256_add_pd(acc_w, wi);
        acc_wv = _mm256_fmadd_pd(wi, _mm256_loadu_pd(v + i), acc_wv);
    }
    PairSum s;
    s.weight_sum = hsum(acc_w);
    s.weighted_sum = hsum(acc_wv);
    for (; i < n; ++i) {
        if (dist[i] < r) {
            s.weight_sum += w[i];
            s.weighted_sum += w[i] * v[i];
        }
    }
    return s;
}

static double mass_above(const double* g, const double* w, std::size_t n,
                         double lambda) {
    const __m256d lam = _mm256_set1_pd(lambda);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask =
            _mm256_cmp_pd(_mm256_loadu_pd(g + i), lam, _CMP_GT_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        if (g[i] > lambda) s += w[i];
    return s;
}

static double accum_inv(const double* d2, const double* fw, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(
            acc, _mm256_div_pd(_mm256_loadu_pd(fw + i), _mm256_loadu_pd(d2 + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += fw[i] / d2[i];
    return s;
}

static double accum_inv_pow32(const double* d2, const double* fw,
                              std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(d2 + i);
        const __m256d den = _mm256_mul_pd(d, _mm256_sqrt_pd(d));
        acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(fw + i), den));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += fw[i] / (d2[i] * std::sqrt(d2[i]));
    return s;
}

static double accum_inv_sq(const double* d2, const double* fw, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(d2 + i);
        acc = _mm256_add_pd(
            acc, _mm256_div_pd(_mm256_loadu_pd(fw + i), _mm256_mul_pd(d, d)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += fw[i] / (d2[i] * d2[i]);
    return s;
}

} // namespace avx2

const Backend& avx2_backend() {
    static const Backend b = {
        avx2::dist2_1,  avx2::dist2_2,    avx2::dist2_3,
        avx2::sqrt_ip,  avx2::ball_sums,  avx2::mass_above,
        avx2::accum_inv, avx2::accum_inv_pow32, avx2::accum_inv_sq,
        "avx2",
    };
    return b;
}

} // namespace harmax::kern

#endif // HARMAX_HAVE_AVX2
