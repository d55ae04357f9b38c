// The decoder: hail detection, tone/silence segmentation, frequency
// classification with tolerance, and text reconstruction.
//
// Analysis runs on a fixed 20 ms hop grid over the low-pass-filtered
// signal. Each hop contributes a local RMS (activity at hop resolution)
// and the peak frequency of a frame-length window centered on the hop
// (classification). Tone runs are built from active hops with single-hop
// dropouts bridged; runs shorter than half a payload frame are discarded.
//
// StreamingDecoder is the engine; decode() is the whole-buffer wrapper and
// produces identical results to any chunking of the same samples.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbmodem/audio.hpp"
#include "vbmodem/dsp.hpp"
#include "vbmodem/modem_config.hpp"
#include "vbmodem/morse.hpp"

namespace vbmodem::detect {

inline constexpr int kHopMs = 20;

// Hail search: hops count as hail when their window peak sits within
// tolerance of the hail frequency and local RMS clears a small absolute
// floor (digital-silence rejection; keeps the search causal for
// streaming). Dropout holes up to kHailGapHops are tolerated.
inline constexpr double kHailRmsFloor = 1e-4;
inline constexpr int kHailGapHops = 2;

// Segmentation activity thresholds as fractions of the median hail RMS:
// runs open at the onset fraction and are sustained at the lower fraction,
// which keeps near-floor channel noise from starting phantom runs.
inline constexpr double kSustainFraction = 0.10;
inline constexpr double kOnsetFraction = 0.25;

struct DecodeOptions {
    bool strict = false;            // throw NoHailFound / UnknownCode
    int silenceTimeoutMs = 0;       // streaming: end after this much silence; 0 = off
    bool keepFrameDiagnostics = true;
};

struct DetectedTone {
    morse::ToneClass cls;
    std::size_t startSample = 0;
    double gapBeforeMs = 0.0;
};

struct DecodeResult {
    std::string text;
    std::optional<std::size_t> hailAt;
    std::vector<DetectedTone> symbols;
    std::vector<dsp::FrameSpectrum> frames;  // one diagnostic spectrum per symbol
    std::vector<std::string> warnings;
};

std::optional<std::size_t> findHail(const AudioBuffer& buf, const ModemConfig& cfg);

// Tone segmentation from `from` (typically the end of the hail). When
// noiseFloorRms is negative the floor is derived from the loudest hop in
// the segment range instead of a measured hail. Dropped unclassifiable
// runs are reported through `warnings` when given.
std::vector<DetectedTone> segment(const AudioBuffer& buf, std::size_t from,
                                  const ModemConfig& cfg, double noiseFloorRms = -1.0,
                                  std::vector<std::string>* warnings = nullptr);

DecodeResult decode(const AudioBuffer& buf, const ModemConfig& cfg,
                    const DecodeOptions& opts = {});

class StreamingDecoder {
  public:
    explicit StreamingDecoder(const ModemConfig& cfg, DecodeOptions opts = {});
    ~StreamingDecoder();
    StreamingDecoder(StreamingDecoder&&) noexcept;
    StreamingDecoder& operator=(StreamingDecoder&&) noexcept;

    void feed(std::span<const double> samples);
    void finish();

    // True once finish() ran or the silence timeout expired.
    bool finished() const;

    // Text decoded since the previous call; incremental interface.
    std::string takeNewText();

    // Progressively filled; final after finish().
    const DecodeResult& result() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vbmodem::detect
