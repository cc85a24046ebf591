#pragma once

#include <cstddef>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace harmax::util {

// Chunked parallel loop over [0, n). fn(begin, end) must only write state
// owned by its own index range; results are then independent of the thread
// count, which keeps experiment outputs reproducible.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const unsigned k = static_cast<unsigned>(
        std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(k);
    const std::size_t chunk = (n + k - 1) / k;
    for (unsigned t = 0; t < k; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

inline unsigned default_threads() {
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// three-term recurrence. Good to machine precision for the sizes used here.
inline std::pair<std::vector<double>, std::vector<double>>
gauss_legendre(std::size_t m) {
    std::vector<double> x(m), w(m);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return {std::move(x), std::move(w)};
}

// Round-trippable decimal rendering; used for all result tables so reruns
// are byte-identical.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool leq_tol(double a, double b, double rel = 1e-12) {
    return a <= b + rel * (std::abs(a) + std::abs(b));
}

} // namespace harmax::util
