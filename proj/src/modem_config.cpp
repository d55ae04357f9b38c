#include "vbmodem/modem_config.hpp"

#include <cmath>
#include <string>

namespace vbmodem {
namespace {

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void ModemConfig::validate() const {
    if (sampleRate <= 0) throw InvalidConfig("sampleRate must be positive");
    if (sampleRate % 1000 != 0) {
        // Millisecond-denominated slots must map to whole sample counts.
        throw InvalidConfig("sampleRate must be a multiple of 1000 Hz");
    }
    for (double f : {dotFreq, dashFreq, hailFreq}) {
        if (f < 300.0 || f > 3400.0) {
            throw InvalidConfig("tone frequency " + std::to_string(f) +
                                " outside the 300-3400 Hz voice band");
        }
    }
    const double minSeparation = 2.0 * toleranceHz;
    if (std::abs(dotFreq - dashFreq) <= minSeparation ||
        std::abs(dotFreq - hailFreq) <= minSeparation ||
        std::abs(dashFreq - hailFreq) <= minSeparation) {
        throw InvalidConfig("tone frequencies closer than twice the tolerance");
    }
    if (!(amplitude > 0.0 && amplitude <= 1.0)) {
        throw InvalidConfig("amplitude must be in (0, 1]");
    }
    if (toleranceHz <= 0.0) throw InvalidConfig("toleranceHz must be positive");
    if (frameMs <= 0 || (frameMs * sampleRate) % 1000 != 0) {
        throw InvalidConfig("frameMs must give a whole number of samples");
    }
    for (int ms : {hailMs, elementGapMs, charGapMs, wordGapMs, postHailGapMs}) {
        if (ms <= 0) throw InvalidConfig("durations must be positive");
    }
    if (!(elementGapMs < charGapMs && charGapMs < wordGapMs)) {
        throw InvalidConfig("gap durations must satisfy element < char < word");
    }
    if (!isPowerOfTwo(fftSize)) throw InvalidConfig("fftSize must be a power of two");
    if (fftSize < frameSamples()) {
        throw InvalidConfig("fftSize smaller than the frame sample count");
    }
}

}  // namespace vbmodem
