#include "harmax/kernels.hpp"

#include <atomic>

namespace harmax::kern {

namespace {

std::atomic<bool> g_force_scalar{false};

const Backend* detect() {
#if defined(HARMAX_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &avx2_backend();
#endif
    return &scalar_backend();
}

} // namespace

const Backend& active() {
    static const Backend* best = detect();
    return g_force_scalar.load(std::memory_order_relaxed) ? scalar_backend()
                                                          : *best;
}

void force_scalar(bool on) {
    g_force_scalar.store(on, std::memory_order_relaxed);
}

} // namespace harmax::kern
