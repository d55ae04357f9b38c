// Equivalence tests for the SIMD kernel backends against the scalar
// reference: elementwise kernels must match bit-for-bit, reductions to
// rounding error, across sizes that exercise every tail path.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vbmodem/kernels.hpp"

using namespace vbmodem;

namespace {

const std::vector<std::size_t> kSizes = {0,  1,  2,  3,  4,  5,  7,  8,   9,   15,  16,
                                         17, 31, 32, 33, 63, 64, 65, 100, 1000, 1601};

std::vector<double> randomVector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) {
        x = scale * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
    }
    return v;
}

struct BackendGuard {
    std::string saved;
    BackendGuard() : saved(kernels::backendName()) {}
    ~BackendGuard() { kernels::selectBackend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available") {
    auto backends = kernels::availableBackends();
    CHECK(std::find(backends.begin(), backends.end(), "scalar") != backends.end());
    BackendGuard guard;
    CHECK(kernels::selectBackend("scalar"));
    CHECK(kernels::backendName() == "scalar");
    CHECK_FALSE(kernels::selectBackend("no-such-backend"));
}

TEST_CASE("simd backends match the scalar reference") {
    BackendGuard guard;
    std::mt19937_64 rng(12345);

    for (const std::string& backend : kernels::availableBackends()) {
        if (backend == "scalar") continue;
        CAPTURE(backend);

        for (std::size_t n : kSizes) {
            CAPTURE(n);
            std::vector<double> a = randomVector(rng, n);
            std::vector<double> b = randomVector(rng, n);

            REQUIRE(kernels::selectBackend("scalar"));
            std::vector<double> mulRef(n), scaleRef(n), clipRef(n), magRef(n);
            kernels::multiply(mulRef.data(), a.data(), b.data(), n);
            kernels::scale(scaleRef.data(), a.data(), 0.37, n);
            kernels::scaleClip(clipRef.data(), a.data(), 1.9, -1.0, 1.0, n);
            kernels::complexMagnitude(a.data(), b.data(), magRef.data(), n);
            double dotRef = kernels::dot(a.data(), b.data(), n);
            double ssRef = kernels::sumSquares(a.data(), n);
            double maRef = kernels::maxAbs(a.data(), n);
            double mvRef = kernels::maxValue(a.data(), n);

            REQUIRE(kernels::selectBackend(backend));
            std::vector<double> mul(n), scl(n), clip(n), mag(n);
            kernels::multiply(mul.data(), a.data(), b.data(), n);
            kernels::scale(scl.data(), a.data(), 0.37, n);
            kernels::scaleClip(clip.data(), a.data(), 1.9, -1.0, 1.0, n);
            kernels::complexMagnitude(a.data(), b.data(), mag.data(), n);

            for (std::size_t i = 0; i < n; ++i) {
                CHECK(mul[i] == mulRef[i]);
                CHECK(scl[i] == scaleRef[i]);
                CHECK(clip[i] == clipRef[i]);
                CHECK(mag[i] == magRef[i]);
            }
            CHECK(kernels::maxAbs(a.data(), n) == maRef);
            CHECK(kernels::maxValue(a.data(), n) == mvRef);

            const double tol = 1e-12 * (1.0 + std::fabs(dotRef) + static_cast<double>(n));
            CHECK(std::fabs(kernels::dot(a.data(), b.data(), n) - dotRef) <= tol);
            CHECK(std::fabs(kernels::sumSquares(a.data(), n) - ssRef) <=
                  1e-12 * (1.0 + ssRef + static_cast<double>(n)));
        }
    }
}

TEST_CASE("kernel results match naive formulas") {
    std::mt19937_64 rng(99);
    for (std::size_t n : {1u, 7u, 64u, 501u}) {
        std::vector<double> a = randomVector(rng, n);
        std::vector<double> b = randomVector(rng, n);

        double dotNaive = 0.0, ssNaive = 0.0, maNaive = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dotNaive += a[i] * b[i];
            ssNaive += a[i] * a[i];
            maNaive = std::max(maNaive, std::fabs(a[i]));
        }
        CHECK(kernels::dot(a.data(), b.data(), n) == doctest::Approx(dotNaive).epsilon(1e-12));
        CHECK(kernels::sumSquares(a.data(), n) == doctest::Approx(ssNaive).epsilon(1e-12));
        CHECK(kernels::maxAbs(a.data(), n) == doctest::Approx(maNaive));
    }

    CHECK(kernels::maxValue(nullptr, 0) == 0.0);
    CHECK(kernels::maxAbs(nullptr, 0) == 0.0);
    CHECK(kernels::dot(nullptr, nullptr, 0) == 0.0);
}

TEST_CASE("scaleClip clamps into the requested interval") {
    std::vector<double> src = {-3.0, -0.5, 0.0, 0.5, 3.0};
    std::vector<double> dst(src.size());
    kernels::scaleClip(dst.data(), src.data(), 1.0, -1.0, 1.0, src.size());
    CHECK(dst == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}
