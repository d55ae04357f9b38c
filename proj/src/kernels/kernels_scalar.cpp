// Scalar reference kernels. The SIMD backends are equivalence-tested
// against these; keep them simple and obviously correct.

#include <cmath>

#include "kernel_table.hpp"

namespace vbmodem::kernels::detail {
namespace {

void multiplyScalar(double* dst, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void scaleScalar(double* dst, const double* src, double gain, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] * gain;
}

void scaleClipScalar(double* dst, const double* src, double gain, double lo, double hi,
                     std::size_t n) {
    // min(max(v, lo), hi) ordering matches the SIMD variants bit-for-bit.
    for (std::size_t i = 0; i < n; ++i) {
        double v = src[i] * gain;
        v = v < lo ? lo : v;
        v = v > hi ? hi : v;
        dst[i] = v;
    }
}

double dotScalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sumSquaresScalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double maxAbsScalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double maxValueScalar(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] > m) m = x[i];
    }
    return m;
}

void complexMagnitudeScalar(const double* re, const double* im, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

}  // namespace

const KernelTable& scalarTable() {
    static const KernelTable table = {
        "scalar",         multiplyScalar, scaleScalar,    scaleClipScalar,
        dotScalar,        sumSquaresScalar, maxAbsScalar, maxValueScalar,
        complexMagnitudeScalar,
    };
    return table;
}

}  // namespace vbmodem::kernels::detail
