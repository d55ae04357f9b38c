// FSK tone synthesis: renders a symbol timeline into speech-band audio.

#pragma once

#include <cstddef>

#include "vbmodem/audio.hpp"
#include "vbmodem/modem_config.hpp"
#include "vbmodem/morse.hpp"

namespace vbmodem::synth {

// Raised-cosine amplitude ramp applied at both ends of every tone to keep
// spectral splatter out of the neighboring silence.
inline constexpr int kEdgeRampMs = 5;

// amplitude * sin(2*pi*freq * sampleIndex / sampleRate)
double toneSample(double amplitude, double freqHz, std::size_t sampleIndex, int sampleRate);

AudioBuffer synthesizeTone(morse::ToneClass cls, const ModemConfig& cfg);

AudioBuffer renderTimeline(const morse::SymbolTimeline& tl, const ModemConfig& cfg);

// Convenience: buildTimeline + renderTimeline.
AudioBuffer encodeText(std::string_view text, const ModemConfig& cfg, bool strict = true);

}  // namespace vbmodem::synth
