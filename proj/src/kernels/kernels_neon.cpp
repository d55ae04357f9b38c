// NEON kernels, 2 doubles per lane. Compiled only on aarch64 where NEON
// is architecturally guaranteed.

#include <arm_neon.h>
#include <cmath>

#include "kernel_table.hpp"

namespace vbmodem::kernels::detail {
namespace {

void multiplyNeon(double* dst, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void scaleNeon(double* dst, const double* src, double gain, std::size_t n) {
    const float64x2_t vg = vdupq_n_f64(gain);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vmulq_f64(vld1q_f64(src + i), vg));
    }
    for (; i < n; ++i) dst[i] = src[i] * gain;
}

void scaleClipNeon(double* dst, const double* src, double gain, double lo, double hi,
                   std::size_t n) {
    const float64x2_t vg = vdupq_n_f64(gain);
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vhi = vdupq_n_f64(hi);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vmulq_f64(vld1q_f64(src + i), vg);
        v = vminq_f64(vmaxq_f64(v, vlo), vhi);
        vst1q_f64(dst + i, v);
    }
    for (; i < n; ++i) {
        double v = src[i] * gain;
        v = v < lo ? lo : v;
        v = v > hi ? hi : v;
        dst[i] = v;
    }
}

double dotNeon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double result = vaddvq_f64(acc);
    for (; i < n; ++i) result += a[i] * b[i];
    return result;
}

double sumSquaresNeon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        acc = vaddq_f64(acc, vmulq_f64(v, v));
    }
    double result = vaddvq_f64(acc);
    for (; i < n; ++i) result += x[i] * x[i];
    return result;
}

double maxAbsNeon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    }
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i) {
        double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double maxValueNeon(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    double m = x[0];
    std::size_t i = 1;
    if (n >= 3) {
        float64x2_t acc = vld1q_f64(x);
        for (i = 2; i + 2 <= n; i += 2) {
            acc = vmaxq_f64(acc, vld1q_f64(x + i));
        }
        m = vmaxvq_f64(acc);
    }
    for (; i < n; ++i) {
        if (x[i] > m) m = x[i];
    }
    return m;
}

void complexMagnitudeNeon(const double* re, const double* im, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vr = vld1q_f64(re + i);
        float64x2_t vi = vld1q_f64(im + i);
        vst1q_f64(dst + i, vsqrtq_f64(vaddq_f64(vmulq_f64(vr, vr), vmulq_f64(vi, vi))));
    }
    for (; i < n; ++i) dst[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

}  // namespace

const KernelTable& neonTable() {
    static const KernelTable table = {
        "neon",      multiplyNeon, scaleNeon,  scaleClipNeon,
        dotNeon,     sumSquaresNeon, maxAbsNeon, maxValueNeon,
        complexMagnitudeNeon,
    };
    return table;
}

}  // namespace vbmodem::kernels::detail
