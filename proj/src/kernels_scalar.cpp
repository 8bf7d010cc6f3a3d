#include <cmath>
#include <cstddef>

#include "depscope/kernels.hpp"

namespace depscope::kernels {
namespace {

void mul_scalar(double* dst, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void affine_scalar(double* dst, const double* a, const double* b, double c1, double c2,
                   double c3, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = c1 * a[i] + c2 * b[i] + c3;
}

double l1_diff_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void scale_scalar(double* dst, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] *= c;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", mul_scalar, affine_scalar, l1_diff_scalar, sum_scalar,
                         scale_scalar};
    return ops;
}

}  // namespace depscope::kernels
