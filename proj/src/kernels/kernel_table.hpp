// Internal dispatch table shared by the kernel backends.

#pragma once

#include <cstddef>

namespace vbmodem::kernels::detail {

struct KernelTable {
    const char* name;
    void (*multiply)(double*, const double*, const double*, std::size_t);
    void (*scale)(double*, const double*, double, std::size_t);
    void (*scaleClip)(double*, const double*, double, double, double, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sumSquares)(const double*, std::size_t);
    double (*maxAbs)(const double*, std::size_t);
    double (*maxValue)(const double*, std::size_t);
    void (*complexMagnitude)(const double*, const double*, double*, std::size_t);
};

const KernelTable& scalarTable();

#if defined(VBMODEM_HAVE_AVX2)
const KernelTable& avx2Table();
#endif
#if defined(VBMODEM_HAVE_NEON)
const KernelTable& neonTable();
#endif

}  // namespace vbmodem::kernels::detail
