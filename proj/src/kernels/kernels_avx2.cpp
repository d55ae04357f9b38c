// AVX2 kernels, 4 doubles per lane. This translation unit is compiled with
// -mavx2 and must only be reached after the runtime CPU check in the
// dispatcher. Plain mul/add intrinsics (no FMA) keep the elementwise
// kernels bit-identical to the scalar reference.

#include <cmath>
#include <immintrin.h>

#include "kernel_table.hpp"

namespace vbmodem::kernels::detail {
namespace {

void multiplyAvx2(double* dst, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void scaleAvx2(double* dst, const double* src, double gain, std::size_t n) {
    const __m256d vg = _mm256_set1_pd(gain);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(src + i), vg));
    }
    for (; i < n; ++i) dst[i] = src[i] * gain;
}

void scaleClipAvx2(double* dst, const double* src, double gain, double lo, double hi,
                   std::size_t n) {
    const __m256d vg = _mm256_set1_pd(gain);
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(src + i), vg);
        v = _mm256_min_pd(_mm256_max_pd(v, vlo), vhi);
        _mm256_storeu_pd(dst + i, v);
    }
    for (; i < n; ++i) {
        double v = src[i] * gain;
        v = v < lo ? lo : v;
        v = v > hi ? hi : v;
        dst[i] = v;
    }
}

double horizontalSum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d sum2 = _mm_add_pd(lo, hi);
    __m128d sum1 = _mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2));
    return _mm_cvtsd_f64(sum1);
}

double horizontalMax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d max2 = _mm_max_pd(lo, hi);
    __m128d max1 = _mm_max_sd(max2, _mm_unpackhi_pd(max2, max2));
    return _mm_cvtsd_f64(max1);
}

double dotAvx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double result = horizontalSum(acc);
    for (; i < n; ++i) result += a[i] * b[i];
    return result;
}

double sumSquaresAvx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double result = horizontalSum(acc);
    for (; i < n; ++i) result += x[i] * x[i];
    return result;
}

double maxAbsAvx2(const double* x, std::size_t n) {
    const __m256d signMask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_andnot_pd(signMask, _mm256_loadu_pd(x + i));
        acc = _mm256_max_pd(acc, v);
    }
    double m = horizontalMax(acc);
    for (; i < n; ++i) {
        double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double maxValueAvx2(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    double m = x[0];
    std::size_t i = 1;
    if (n >= 5) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) {
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
        }
        m = horizontalMax(acc);
    }
    for (; i < n; ++i) {
        if (x[i] > m) m = x[i];
    }
    return m;
}

void complexMagnitudeAvx2(const double* re, const double* im, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vr = _mm256_loadu_pd(re + i);
        __m256d vi = _mm256_loadu_pd(im + i);
        __m256d mag =
            _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(vr, vr), _mm256_mul_pd(vi, vi)));
        _mm256_storeu_pd(dst + i, mag);
    }
    for (; i < n; ++i) dst[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

}  // namespace

const KernelTable& avx2Table() {
    static const KernelTable table = {
        "avx2",      multiplyAvx2, scaleAvx2,  scaleClipAvx2,
        dotAvx2,     sumSquaresAvx2, maxAbsAvx2, maxValueAvx2,
        complexMagnitudeAvx2,
    };
    return table;
}

}  // namespace vbmodem::kernels::detail
