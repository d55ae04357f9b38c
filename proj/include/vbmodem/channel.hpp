// Deterministic, seeded simulator of the cellular voice path: band-limit,
// mu-law companding, additive noise, VAD silence suppression and frame
// stealing, applied in that fixed order.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vbmodem/audio.hpp"

namespace vbmodem::channel {

enum class Codec { None, MuLaw };

struct ChannelConfig {
    double bandLowHz = 300.0;
    double bandHighHz = 3400.0;
    double snrDb = std::numeric_limits<double>::infinity();
    int frameMs = 20;  // vocoder frame granularity for VAD and frame stealing
    double frameDropProb = 0.0;
    bool vadEnabled = false;
    double vadThresholdDbfs = -45.0;
    Codec codec = Codec::None;
    double gain = 1.0;
    std::uint64_t seed = 0;

    void validate(int sampleRate) const;
    int frameSamples(int sampleRate) const { return frameMs * sampleRate / 1000; }

    // Plain-text key=value serialization; keys match the CLI flag names.
    std::string toKeyValues() const;
    static ChannelConfig fromKeyValues(const std::string& text);
};

struct ChannelTrace {
    std::vector<std::size_t> droppedFrames;
    std::vector<std::size_t> vadSuppressedFrames;
    double appliedSnrDb = std::numeric_limits<double>::infinity();
};

// Seeded generator with a fully specified output sequence (mt19937_64 words
// plus Box-Muller), so fixtures stay stable across standard libraries.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    double uniform01();  // [0, 1)
    double gaussian();   // standard normal

  private:
    std::mt19937_64 engine_;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

// Derives independent per-stage seeds from a channel seed.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stage);

std::uint8_t muLawEncode(double sample);
double muLawDecode(std::uint8_t code);

AudioBuffer bandpass(const AudioBuffer& buf, double lowHz, double highHz);
AudioBuffer companding(const AudioBuffer& buf);
AudioBuffer addNoise(const AudioBuffer& buf, double snrDb, SeededRng& rng);
std::pair<AudioBuffer, std::vector<std::size_t>> vadSuppress(const AudioBuffer& buf,
                                                             const ChannelConfig& cfg);
std::pair<AudioBuffer, std::vector<std::size_t>> frameSteal(const AudioBuffer& buf,
                                                            const ChannelConfig& cfg,
                                                            SeededRng& rng);

std::pair<AudioBuffer, ChannelTrace> apply(const AudioBuffer& buf, const ChannelConfig& cfg);

}  // namespace vbmodem::channel
