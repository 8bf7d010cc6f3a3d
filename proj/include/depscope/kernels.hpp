#pragma once

#include <cstddef>

namespace depscope::kernels {

/// Dense vector kernels used by the power-iteration inner loop. One scalar
/// reference implementation plus SIMD variants; the active set is picked at
/// runtime from CPU features and can be pinned for testing.
struct Ops {
    const char* name;
    /// dst[i] = a[i] * b[i]
    void (*mul)(double* dst, const double* a, const double* b, std::size_t n);
    /// dst[i] = c1*a[i] + c2*b[i] + c3
    void (*affine)(double* dst, const double* a, const double* b, double c1, double c2,
                   double c3, std::size_t n);
    /// sum_i |a[i] - b[i]|
    double (*l1_diff)(const double* a, const double* b, std::size_t n);
    /// sum_i a[i]
    double (*sum)(const double* a, std::size_t n);
    /// dst[i] *= c
    void (*scale)(double* dst, double c, std::size_t n);
};

enum class Backend { auto_detect, scalar, avx2 };

const Ops& scalar_ops();
/// nullptr when AVX2+FMA is not available on this CPU or build.
const Ops* avx2_ops();

/// The backend in effect; resolved from the CPU on first call.
const Ops& active();
/// Pin the backend. Throws std::invalid_argument if unavailable.
void select(Backend b);

}  // namespace depscope::kernels
