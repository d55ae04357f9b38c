// Kernel dispatch: picks the best backend for the host CPU at startup,
// honoring the VBMODEM_KERNELS environment variable when set.

#include "vbmodem/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "kernel_table.hpp"

namespace vbmodem::kernels {
namespace {

using detail::KernelTable;

const KernelTable* findByName(std::string_view name) {
    if (name == "scalar") return &detail::scalarTable();
#if defined(VBMODEM_HAVE_AVX2)
    if (name == "avx2" && __builtin_cpu_supports("avx2")) return &detail::avx2Table();
#endif
#if defined(VBMODEM_HAVE_NEON)
    if (name == "neon") return &detail::neonTable();
#endif
    return nullptr;
}

const KernelTable* detectBest() {
    if (const char* env = std::getenv("VBMODEM_KERNELS")) {
        if (const KernelTable* t = findByName(env)) return t;
    }
#if defined(VBMODEM_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return &detail::avx2Table();
#endif
#if defined(VBMODEM_HAVE_NEON)
    return &detail::neonTable();
#endif
    return &detail::scalarTable();
}

std::atomic<const KernelTable*>& activeTable() {
    static std::atomic<const KernelTable*> table{detectBest()};
    return table;
}

const KernelTable& active() { return *activeTable().load(std::memory_order_relaxed); }

}  // namespace

void multiply(double* dst, const double* a, const double* b, std::size_t n) {
    active().multiply(dst, a, b, n);
}

void scale(double* dst, const double* src, double gain, std::size_t n) {
    active().scale(dst, src, gain, n);
}

void scaleClip(double* dst, const double* src, double gain, double lo, double hi, std::size_t n) {
    active().scaleClip(dst, src, gain, lo, hi, n);
}

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }

double sumSquares(const double* x, std::size_t n) { return active().sumSquares(x, n); }

double maxAbs(const double* x, std::size_t n) { return active().maxAbs(x, n); }

double maxValue(const double* x, std::size_t n) { return active().maxValue(x, n); }

void complexMagnitude(const double* re, const double* im, double* dst, std::size_t n) {
    active().complexMagnitude(re, im, dst, n);
}

std::string_view backendName() { return active().name; }

bool selectBackend(std::string_view name) {
    if (const KernelTable* t = findByName(name)) {
        activeTable().store(t, std::memory_order_relaxed);
        return true;
    }
    return false;
}

std::vector<std::string> availableBackends() {
    std::vector<std::string> names = {"scalar"};
#if defined(VBMODEM_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) names.emplace_back("avx2");
#endif
#if defined(VBMODEM_HAVE_NEON)
    names.emplace_back("neon");
#endif
    return names;
}

}  // namespace vbmodem::kernels
