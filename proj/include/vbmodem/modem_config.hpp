// ModemConfig - all tunable modem parameters: tone frequencies, framing,
// gap timing, detection tolerance and FFT size.

#pragma once

#include <cstddef>

#include "vbmodem/errors.hpp"

namespace vbmodem {

struct ModemConfig {
    int sampleRate = 8000;      // Hz, telephony rate
    double dotFreq = 600.0;     // Hz, low payload tone
    double dashFreq = 1000.0;   // Hz, high payload tone
    double hailFreq = 1400.0;   // Hz, transmission preamble tone
    int hailMs = 400;           // hail tone duration
    int frameMs = 200;          // payload tone duration (one dot/dash)
    int elementGapMs = 100;     // silence between elements of one character
    int charGapMs = 300;        // silence between characters
    int wordGapMs = 700;        // silence between words
    int postHailGapMs = 200;    // silence between hail and first payload tone
    double amplitude = 0.8;     // peak tone amplitude, in (0, 1]
    double toleranceHz = 30.0;  // frequency classification tolerance
    int fftSize = 2048;         // decoder FFT size, power of two

    int frameSamples() const { return frameMs * sampleRate / 1000; }
    int hailSamples() const { return hailMs * sampleRate / 1000; }

    // Gap classification thresholds: midpoints between configured durations.
    double charGapThresholdMs() const { return 0.5 * (elementGapMs + charGapMs); }
    double wordGapThresholdMs() const { return 0.5 * (charGapMs + wordGapMs); }

    void validate() const;
};

}  // namespace vbmodem
