#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vbmodem/dsp.hpp"
#include "vbmodem/errors.hpp"
#include "vbmodem/kernels.hpp"
#include "vbmodem/morse.hpp"
#include "vbmodem/synth.hpp"

using namespace vbmodem;
using morse::ToneClass;

TEST_CASE("toneSample evaluates the sinusoid") {
    CHECK(synth::toneSample(0.8, 1000.0, 0, 8000) == 0.0);
    // 2*pi*1000*2/8000 = pi/2
    CHECK(synth::toneSample(0.8, 1000.0, 2, 8000) == doctest::Approx(0.8).epsilon(1e-12));
    // a whole number of cycles returns to ~0
    CHECK(std::fabs(synth::toneSample(0.8, 600.0, 8000, 8000)) <= 1e-9);
}

TEST_CASE("synthesizeTone durations and spectral peaks") {
    ModemConfig cfg;
    const double binWidth = static_cast<double>(cfg.sampleRate) / cfg.fftSize;

    AudioBuffer dot = synth::synthesizeTone(ToneClass::Dot, cfg);
    CHECK(dot.size() == 1600);
    CHECK(std::fabs(dsp::analyzeFrame(dot.samples, cfg).peakFreq - cfg.dotFreq) <= binWidth);

    AudioBuffer dash = synth::synthesizeTone(ToneClass::Dash, cfg);
    CHECK(dash.size() == 1600);
    CHECK(std::fabs(dsp::analyzeFrame(dash.samples, cfg).peakFreq - cfg.dashFreq) <= binWidth);

    AudioBuffer hail = synth::synthesizeTone(ToneClass::Hail, cfg);
    CHECK(hail.size() == 3200);
    // analyze the first frame-length slice of the hail
    dsp::FrameSpectrum spec =
        dsp::analyzeFrame(hail.view(0, cfg.frameSamples()), cfg);
    CHECK(std::fabs(spec.peakFreq - cfg.hailFreq) <= binWidth);
}

TEST_CASE("renderTimeline duration additivity and amplitude bound") {
    ModemConfig cfg;
    for (const char* text : {"E", "SOS", "HELLO WORLD", "A1 B2 C3"}) {
        morse::SymbolTimeline tl = morse::buildTimeline(text, cfg);
        AudioBuffer buf = synth::renderTimeline(tl, cfg);
        CHECK(buf.size() == static_cast<std::size_t>(tl.totalDurationMs()) *
                                static_cast<std::size_t>(cfg.sampleRate) / 1000);
        CHECK(kernels::maxAbs(buf.samples.data(), buf.size()) <= cfg.amplitude + 1e-12);
    }

    morse::SymbolTimeline tl = morse::buildTimeline("E", cfg);
    AudioBuffer buf = synth::renderTimeline(tl, cfg);
    CHECK(buf.size() ==
          static_cast<std::size_t>(cfg.hailMs + cfg.postHailGapMs + cfg.frameMs) * 8);
}

TEST_CASE("renderTimeline is deterministic bit for bit") {
    ModemConfig cfg;
    AudioBuffer a = synth::encodeText("DETERMINISM 42", cfg);
    AudioBuffer b = synth::encodeText("DETERMINISM 42", cfg);
    REQUIRE(a.size() == b.size());
    CHECK(a.samples == b.samples);
}

TEST_CASE("renderTimeline rejects timelines that violate invariants") {
    ModemConfig cfg;
    morse::SymbolTimeline bad;
    bad.slots.push_back(morse::Slot::makeSilence(100));
    CHECK_THROWS_AS(synth::renderTimeline(bad, cfg), InvalidConfig);
}

TEST_CASE("rendered signal keeps >= 99% of its energy in the voice band") {
    ModemConfig cfg;
    AudioBuffer buf = synth::encodeText("SOS SOS", cfg);

    // total and in-band energy via one zero-padded transform of the signal
    int n = 1;
    while (n < static_cast<int>(buf.size())) n <<= 1;
    dsp::FftPlan plan(n);
    std::vector<double> re, im;
    plan.forward(buf.samples, re, im);

    auto binEnergy = [&](int k) {
        double e = re[k] * re[k] + im[k] * im[k];
        // count positive and negative frequency halves
        return (k == 0 || k == n / 2) ? e : 2.0 * e;
    };
    double total = 0.0, inBand = 0.0;
    for (int k = 0; k <= n / 2; ++k) {
        double freq = dsp::binToFreq(k, cfg.sampleRate, n);
        double e = binEnergy(k);
        total += e;
        if (freq >= 300.0 && freq <= 3400.0) inBand += e;
    }
    CHECK(inBand / total >= 0.99);
}

TEST_CASE("tones carry raised-cosine edges") {
    ModemConfig cfg;
    AudioBuffer dot = synth::synthesizeTone(ToneClass::Dot, cfg);
    const std::size_t ramp = 40;  // 5 ms at 8 kHz
    // the first samples are strongly attenuated relative to the peak
    double edgePeak = kernels::maxAbs(dot.samples.data(), ramp / 4);
    double bodyPeak = kernels::maxAbs(dot.samples.data() + ramp, dot.size() - 2 * ramp);
    CHECK(edgePeak < 0.25 * bodyPeak);
    CHECK(dot.samples.front() == 0.0);
}
