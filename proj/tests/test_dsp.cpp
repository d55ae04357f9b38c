#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "vbmodem/dsp.hpp"
#include "vbmodem/errors.hpp"
#include "vbmodem/kernels.hpp"
#include "vbmodem/synth.hpp"

using namespace vbmodem;

namespace {

constexpr double kPi = std::numbers::pi;

// O(N^2) DFT oracle, independent of the FFT implementation.
std::vector<double> dftMagnitudes(const std::vector<double>& frame, int n) {
    std::vector<double> mags(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
        std::complex<double> acc = 0.0;
        for (int t = 0; t < static_cast<int>(frame.size()); ++t) {
            double angle = -2.0 * kPi * k * t / n;
            acc += frame[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        mags[k] = std::abs(acc);
    }
    return mags;
}

std::vector<double> randomFrame(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) {
        x = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    }
    return v;
}

AudioBuffer sineBuffer(double freq, double amplitude, double seconds, int rate = 8000) {
    AudioBuffer buf;
    buf.sampleRate = rate;
    std::size_t count = static_cast<std::size_t>(seconds * rate);
    buf.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        buf.samples[i] = amplitude * std::sin(2.0 * kPi * freq * i / rate);
    }
    return buf;
}

double rmsOf(const AudioBuffer& buf) {
    return std::sqrt(kernels::sumSquares(buf.samples.data(), buf.size()) / buf.size());
}

}  // namespace

TEST_CASE("hann window closed forms") {
    std::vector<double> w4 = dsp::hannWindow(4);
    REQUIRE(w4.size() == 4);
    CHECK(w4[0] == 0.0);
    CHECK(w4[1] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(w4[2] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(w4[3] == 0.0);

    for (int n : {2, 3, 16, 255, 1600}) {
        std::vector<double> w = dsp::hannWindow(n);
        CHECK(w.front() == 0.0);
        CHECK(w.back() == 0.0);
        if (n % 2 == 1) CHECK(w[(n - 1) / 2] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dsp::hannWindow(1), InvalidSize);
}

TEST_CASE("binToFreq") {
    CHECK(dsp::binToFreq(0, 8000, 2048) == 0.0);
    CHECK(dsp::binToFreq(256, 8000, 2048) == doctest::Approx(1000.0));
    CHECK(dsp::binToFreq(1024, 8000, 2048) == doctest::Approx(4000.0));
}

TEST_CASE("complex magnitude arithmetic") {
    double re = 3.0, im = 4.0, mag = 0.0;
    kernels::complexMagnitude(&re, &im, &mag, 1);
    CHECK(mag == doctest::Approx(5.0));
}

TEST_CASE("fftMagnitudes basics") {
    std::vector<double> zeros(1600, 0.0);
    for (double m : dsp::fftMagnitudes(zeros, 2048)) CHECK(m == 0.0);

    // unit-amplitude 1000 Hz tone lands exactly on bin 256 = 1000*2048/8000
    std::vector<double> tone(2048);
    for (std::size_t i = 0; i < tone.size(); ++i) {
        tone[i] = std::sin(2.0 * kPi * 1000.0 * i / 8000.0);
    }
    std::vector<double> mags = dsp::fftMagnitudes(tone, 2048);
    std::size_t argmax = std::max_element(mags.begin(), mags.end()) - mags.begin();
    CHECK(argmax == 256);

    CHECK_THROWS_AS(dsp::fftMagnitudes(zeros, 1000), InvalidSize);  // not a power of two
    CHECK_THROWS_AS(dsp::fftMagnitudes(tone, 1024), InvalidSize);   // frame longer than fft
}

TEST_CASE("fft magnitudes match the direct DFT oracle") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 4 << (rng() % 7);  // 4..256
        std::size_t frameLen = 1 + rng() % static_cast<std::size_t>(n);
        std::vector<double> frame = randomFrame(rng, frameLen);

        std::vector<double> fft = dsp::fftMagnitudes(frame, n);
        std::vector<double> dft = dftMagnitudes(frame, n);
        REQUIRE(fft.size() == dft.size());
        double scale = *std::max_element(dft.begin(), dft.end()) + 1e-30;
        for (std::size_t k = 0; k < fft.size(); ++k) {
            CHECK(std::fabs(fft[k] - dft[k]) / scale <= 1e-6);
        }
    }
}

TEST_CASE("parseval identity on unwindowed frames") {
    std::mt19937_64 rng(11);
    for (int n : {64, 256, 2048}) {
        std::vector<double> frame = randomFrame(rng, n);
        dsp::FftPlan plan(n);
        std::vector<double> re, im;
        plan.forward(frame, re, im);

        double timeEnergy = 0.0;
        for (double x : frame) timeEnergy += x * x;
        double freqEnergy = 0.0;
        for (int k = 0; k < n; ++k) freqEnergy += re[k] * re[k] + im[k] * im[k];
        freqEnergy /= n;
        CHECK(std::fabs(timeEnergy - freqEnergy) / timeEnergy <= 1e-6);
    }
}

TEST_CASE("normalizeSpectrum") {
    CHECK(dsp::normalizeSpectrum({2.0, 4.0, 8.0}) == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(dsp::normalizeSpectrum({0.0, 0.0}) == std::vector<double>{0.0, 0.0});

    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> mags = randomFrame(rng, 64);
        for (double& m : mags) m = std::fabs(m);
        std::size_t argmaxBefore = std::max_element(mags.begin(), mags.end()) - mags.begin();
        std::vector<double> normalized = dsp::normalizeSpectrum(mags);
        std::size_t argmaxAfter =
            std::max_element(normalized.begin(), normalized.end()) - normalized.begin();
        CHECK(argmaxBefore == argmaxAfter);  // normalization never moves the peak
        double top = *std::max_element(normalized.begin(), normalized.end());
        CHECK((top == 0.0 || top == doctest::Approx(1.0)));
    }
}

TEST_CASE("lowPass frequency response") {
    AudioBuffer zeros{std::vector<double>(4000, 0.0), 8000};
    AudioBuffer filteredZeros = dsp::lowPass(zeros, 1800.0);
    for (double s : filteredZeros.samples) CHECK(s == 0.0);

    AudioBuffer inBand = sineBuffer(600.0, 0.8, 1.0);
    CHECK(rmsOf(dsp::lowPass(inBand, 1800.0)) >= 0.95 * rmsOf(inBand));

    AudioBuffer outOfBand = sineBuffer(3500.0, 0.8, 1.0);
    CHECK(rmsOf(dsp::lowPass(outOfBand, 1800.0)) <= 0.01 * rmsOf(outOfBand));

    CHECK_THROWS_AS(dsp::lowPass(inBand, 0.0), InvalidCutoff);
    CHECK_THROWS_AS(dsp::lowPass(inBand, 4000.0), InvalidCutoff);
}

TEST_CASE("lowPass passband and stopband meet the design contract") {
    const double cutoff = 1800.0;
    // passband ripple < 0.5 dB below 0.8*cutoff
    for (double f : {200.0, 600.0, 1000.0, 1400.0}) {
        AudioBuffer tone = sineBuffer(f, 0.5, 1.0);
        double ratio = rmsOf(dsp::lowPass(tone, cutoff)) / rmsOf(tone);
        CHECK(20.0 * std::log10(ratio) > -0.5);
        CHECK(20.0 * std::log10(ratio) < 0.5);
    }
    // stopband attenuation >= 40 dB above 1.25*cutoff
    for (double f : {2300.0, 2800.0, 3600.0}) {
        AudioBuffer tone = sineBuffer(f, 0.5, 1.0);
        double ratio = rmsOf(dsp::lowPass(tone, cutoff)) / rmsOf(tone);
        CHECK(20.0 * std::log10(ratio) <= -40.0);
    }
}

TEST_CASE("analyzeFrame finds synthesized tone peaks within one bin") {
    ModemConfig cfg;
    const double binWidth = static_cast<double>(cfg.sampleRate) / cfg.fftSize;

    struct Case {
        morse::ToneClass cls;
        double freq;
    };
    for (Case c : {Case{morse::ToneClass::Dot, cfg.dotFreq},
                   Case{morse::ToneClass::Dash, cfg.dashFreq}}) {
        AudioBuffer tone = synth::synthesizeTone(c.cls, cfg);
        REQUIRE(tone.size() == static_cast<std::size_t>(cfg.frameSamples()));
        dsp::FrameSpectrum spec = dsp::analyzeFrame(tone.samples, cfg);
        CHECK(std::fabs(spec.peakFreq - c.freq) <= binWidth);
        CHECK(spec.rms > 0.1);
        CHECK(spec.peakBin ==
              static_cast<std::size_t>(
                  std::max_element(spec.magnitudes.begin(), spec.magnitudes.end()) -
                  spec.magnitudes.begin()));
    }

    std::vector<double> zeros(cfg.frameSamples(), 0.0);
    dsp::FrameSpectrum spec = dsp::analyzeFrame(zeros, cfg);
    CHECK(spec.rms == 0.0);
    for (double m : spec.magnitudes) CHECK(m == 0.0);
}

TEST_CASE("analyzeFrame peak error stays within one bin for random in-band tones") {
    ModemConfig cfg;
    const double binWidth = static_cast<double>(cfg.sampleRate) / cfg.fftSize;
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 50; ++iter) {
        double freq = 300.0 + (3100.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53);
        AudioBuffer tone = sineBuffer(freq, 0.8, cfg.frameMs / 1000.0);
        dsp::FrameSpectrum spec = dsp::analyzeFrame(tone.samples, cfg);
        CHECK(std::fabs(spec.peakFreq - freq) <= binWidth);
    }
}

TEST_CASE("analyzeFrame rejects wrong frame lengths") {
    ModemConfig cfg;
    std::vector<double> shortFrame(10, 0.0);
    CHECK_THROWS_AS(dsp::analyzeFrame(shortFrame, cfg), InvalidSize);
}
