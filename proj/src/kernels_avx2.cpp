// AVX2+FMA variants of the dense kernels. Built only on x86-64; gated at
// runtime by cpu feature detection in kernels.cpp. Reduction kernels keep a
// fixed 4-lane accumulator so results are reproducible run to run, though
// they may differ from the scalar path in the last bits.

#include "depscope/kernels.hpp"

#if defined(__x86_64__) && defined(DEPSCOPE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace depscope::kernels {
namespace {

void mul_avx2(double* dst, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void affine_avx2(double* dst, const double* a, const double* b, double c1, double c2,
                 double c3, std::size_t n) {
    const __m256d vc1 = _mm256_set1_pd(c1);
    const __m256d vc2 = _mm256_set1_pd(c2);
    const __m256d vc3 = _mm256_set1_pd(c3);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(vc2, _mm256_loadu_pd(b + i), vc3);
        r = _mm256_fmadd_pd(vc1, _mm256_loadu_pd(a + i), r);
        _mm256_storeu_pd(dst + i, r);
    }
    for (; i < n; ++i) dst[i] = c1 * a[i] + c2 * b[i] + c3;
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double l1_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
    return total;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}

void scale_avx2(double* dst, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vc, _mm256_loadu_pd(dst + i)));
    for (; i < n; ++i) dst[i] *= c;
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{"avx2", mul_avx2, affine_avx2, l1_diff_avx2, sum_avx2, scale_avx2};
    return &ops;
}

}  // namespace depscope::kernels

#else

namespace depscope::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace depscope::kernels

#endif
