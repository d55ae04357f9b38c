#include "vbmodem/synth.hpp"

#include <cmath>
#include <numbers>

#include "vbmodem/errors.hpp"

namespace vbmodem::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double classFrequency(morse::ToneClass cls, const ModemConfig& cfg) {
    switch (cls) {
        case morse::ToneClass::Dot: return cfg.dotFreq;
        case morse::ToneClass::Dash: return cfg.dashFreq;
        case morse::ToneClass::Hail: return cfg.hailFreq;
    }
    return cfg.dotFreq;
}

void appendTone(std::vector<double>& out, double freqHz, int durationMs,
                const ModemConfig& cfg) {
    const std::size_t count =
        static_cast<std::size_t>(durationMs) * cfg.sampleRate / 1000;
    std::size_t ramp = static_cast<std::size_t>(kEdgeRampMs) * cfg.sampleRate / 1000;
    if (2 * ramp > count) ramp = count / 2;

    for (std::size_t i = 0; i < count; ++i) {
        double s = toneSample(cfg.amplitude, freqHz, i, cfg.sampleRate);
        if (i < ramp) {
            s *= 0.5 * (1.0 - std::cos(std::numbers::pi * i / ramp));
        } else if (i >= count - ramp) {
            std::size_t tail = count - 1 - i;
            s *= 0.5 * (1.0 - std::cos(std::numbers::pi * tail / ramp));
        }
        out.push_back(s);
    }
}

}  // namespace

double toneSample(double amplitude, double freqHz, std::size_t sampleIndex, int sampleRate) {
    return amplitude * std::sin(kTwoPi * freqHz * static_cast<double>(sampleIndex) / sampleRate);
}

AudioBuffer synthesizeTone(morse::ToneClass cls, const ModemConfig& cfg) {
    cfg.validate();
    AudioBuffer buf;
    buf.sampleRate = cfg.sampleRate;
    int durationMs = cls == morse::ToneClass::Hail ? cfg.hailMs : cfg.frameMs;
    appendTone(buf.samples, classFrequency(cls, cfg), durationMs, cfg);
    return buf;
}

AudioBuffer renderTimeline(const morse::SymbolTimeline& tl, const ModemConfig& cfg) {
    cfg.validate();
    tl.validate(cfg);

    AudioBuffer buf;
    buf.sampleRate = cfg.sampleRate;
    buf.samples.reserve(static_cast<std::size_t>(tl.totalDurationMs()) * cfg.sampleRate / 1000);
    for (const morse::Slot& slot : tl.slots) {
        if (slot.isTone()) {
            appendTone(buf.samples, classFrequency(slot.tone, cfg), slot.durationMs, cfg);
        } else {
            std::size_t count =
                static_cast<std::size_t>(slot.durationMs) * cfg.sampleRate / 1000;
            buf.samples.insert(buf.samples.end(), count, 0.0);
        }
    }
    return buf;
}

AudioBuffer encodeText(std::string_view text, const ModemConfig& cfg, bool strict) {
    return renderTimeline(morse::buildTimeline(text, cfg, strict), cfg);
}

}  // namespace vbmodem::synth
