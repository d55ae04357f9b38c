// Data-parallel arithmetic kernels behind the DSP hot loops.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at startup from the host
// CPU. The VBMODEM_KERNELS environment variable ("scalar", "avx2", "neon")
// overrides the automatic choice; selectBackend() does the same
// programmatically and is how the equivalence tests pin each variant.
//
// Elementwise kernels (multiply, scale, scaleClip, complexMagnitude, maxAbs,
// maxValue) produce bit-identical results across backends. Reductions (dot,
// sumSquares) reassociate the sum and agree to rounding error only.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vbmodem::kernels {

// dst[i] = a[i] * b[i]
void multiply(double* dst, const double* a, const double* b, std::size_t n);

// dst[i] = src[i] * gain
void scale(double* dst, const double* src, double gain, std::size_t n);

// dst[i] = min(max(src[i] * gain, lo), hi)
void scaleClip(double* dst, const double* src, double gain, double lo, double hi, std::size_t n);

// sum of a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum of x[i]^2
double sumSquares(const double* x, std::size_t n);

// max of |x[i]|, 0 for empty input
double maxAbs(const double* x, std::size_t n);

// max of x[i], 0 for empty input
double maxValue(const double* x, std::size_t n);

// dst[i] = sqrt(re[i]^2 + im[i]^2)
void complexMagnitude(const double* re, const double* im, double* dst, std::size_t n);

std::string_view backendName();
bool selectBackend(std::string_view name);
std::vector<std::string> availableBackends();

}  // namespace vbmodem::kernels
