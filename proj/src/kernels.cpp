#include "depscope/kernels.hpp"

#include <stdexcept>

namespace depscope::kernels {

const Ops* avx2_ops_impl();  // kernels_avx2.cpp

const Ops* avx2_ops() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {
const Ops* g_active = nullptr;
}

const Ops& active() {
    if (!g_active) {
        const Ops* simd = avx2_ops();
        g_active = simd ? simd : &scalar_ops();
    }
    return *g_active;
}

void select(Backend b) {
    switch (b) {
        case Backend::auto_detect: {
            const Ops* simd = avx2_ops();
            g_active = simd ? simd : &scalar_ops();
            return;
        }
        case Backend::scalar:
            g_active = &scalar_ops();
            return;
        case Backend::avx2: {
            const Ops* simd = avx2_ops();
            if (!simd) throw std::invalid_argument("avx2 backend not available");
            g_active = simd;
            return;
        }
    }
    throw std::invalid_argument("unknown kernel backend");
}

}  // namespace depscope::kernels
