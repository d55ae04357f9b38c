#include "vbmodem/detect.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vbmodem/errors.hpp"
#include "vbmodem/kernels.hpp"

namespace vbmodem::detect {
namespace {

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    return values[mid];
}

// Builds tone runs from per-hop activity. Single inactive hops inside a
// run are bridged (a stolen 20 ms frame must not split a tone); two in a
// row close the run at its last active hop.
class RunBuilder {
  public:
    struct Run {
        std::size_t firstHop = 0;
        std::size_t lastHop = 0;
        std::vector<double> peaks;
    };

    RunBuilder(double sustainRms, double onsetRms)
        : sustain_(sustainRms), onset_(onsetRms) {}

    bool open() const { return open_; }

    std::optional<Run> step(std::size_t hop, double rms,
                            const std::function<double()>& peakFreq) {
        std::optional<Run> closed;
        if (open_) {
            if (rms > sustain_) {
                lastActive_ = hop;
                run_.peaks.push_back(peakFreq());
            } else if (hop - lastActive_ >= 2) {
                run_.lastHop = lastActive_;
                closed = std::move(run_);
                open_ = false;
                run_ = {};
            }
        }
        if (!open_ && rms > onset_) {
            open_ = true;
            lastActive_ = hop;
            run_ = {hop, hop, {peakFreq()}};
        }
        return closed;
    }

    std::optional<Run> flush() {
        if (!open_) return std::nullopt;
        run_.lastHop = lastActive_;
        open_ = false;
        return std::move(run_);
    }

  private:
    double sustain_;
    double onset_;
    bool open_ = false;
    std::size_t lastActive_ = 0;
    Run run_;
};

struct ClassifiedRun {
    std::optional<DetectedTone> tone;
    std::optional<std::string> warning;
};

// Minimum-duration gate, then frequency classification of the run median.
ClassifiedRun classifyRun(const RunBuilder::Run& run, long long prevEndHop,
                          const ModemConfig& cfg, std::size_t hopSamples,
                          std::size_t baseSample) {
    ClassifiedRun out;
    const int durationMs = static_cast<int>(run.lastHop - run.firstHop + 1) * kHopMs;
    if (durationMs * 2 < cfg.frameMs) return out;  // sub-symbol debris

    const double freq = median(run.peaks);
    morse::ToneClass cls;
    if (std::fabs(freq - cfg.dotFreq) <= cfg.toleranceHz) {
        cls = morse::ToneClass::Dot;
    } else if (std::fabs(freq - cfg.dashFreq) <= cfg.toleranceHz) {
        cls = morse::ToneClass::Dash;
    } else {
        out.warning = "tone run at " + std::to_string(freq) +
                      " Hz matches no symbol frequency; dropped";
        return out;
    }

    DetectedTone tone;
    tone.cls = cls;
    tone.startSample = baseSample + run.firstHop * hopSamples;
    tone.gapBeforeMs =
        static_cast<double>(static_cast<long long>(run.firstHop) - prevEndHop - 1) * kHopMs;
    out.tone = tone;
    return out;
}

}  // namespace

struct StreamingDecoder::Impl {
    ModemConfig cfg;
    DecodeOptions opts;

    std::size_t hopSamples = 0;
    std::size_t windowSamples = 0;
    std::size_t halfWindow = 0;
    std::size_t hailNeedHops = 0;
    dsp::FftPlan plan;
    std::vector<double> window;
    std::vector<double> fir;
    std::size_t firMid = 0;

    // padded raw input (firMid leading zeros; firMid trailing zeros appended
    // at finish) and the low-pass result, both grown incrementally.
    std::vector<double> padded;
    std::vector<double> filtered;
    std::size_t rawCount = 0;
    bool inputDone = false;

    struct Hop {
        double rms = 0.0;
        double peakFreq = -1.0;  // < 0: window not analyzed yet
    };
    std::vector<Hop> hops;
    std::size_t nextHop = 0;

    enum class Phase { HailSearch, Segmenting, Done };
    Phase phase = Phase::HailSearch;

    // hail cluster under construction
    bool clusterActive = false;
    std::size_t clusterFirst = 0;
    std::size_t clusterLast = 0;
    std::vector<double> clusterRms;

    // segmentation
    double sustainRms = 0.0;
    double onsetRms = 0.0;
    RunBuilder runs{0.0, 0.0};
    long long prevEndHop = -1;
    std::size_t lastActivityHop = 0;

    std::vector<morse::Element> pendingElements;
    DecodeResult result;
    std::size_t textTaken = 0;
    bool finishedFlag = false;

    static const ModemConfig& validated(const ModemConfig& c) {
        c.validate();
        return c;
    }

    explicit Impl(const ModemConfig& modemCfg, DecodeOptions options)
        : cfg(validated(modemCfg)),
          opts(options),
          plan(modemCfg.fftSize),
          window(dsp::hannWindow(modemCfg.frameSamples())) {
        hopSamples = static_cast<std::size_t>(kHopMs) * cfg.sampleRate / 1000;
        windowSamples = static_cast<std::size_t>(cfg.frameSamples());
        halfWindow = windowSamples / 2;
        hailNeedHops = static_cast<std::size_t>((cfg.hailMs + 2 * kHopMs - 1) / (2 * kHopMs));
        fir = dsp::designLowpassFir(dsp::kLowpassTaps, dsp::kDecoderLowpassHz, cfg.sampleRate);
        firMid = fir.size() / 2;
        padded.assign(firMid, 0.0);
    }

    void feed(std::span<const double> samples) {
        if (inputDone || phase == Phase::Done) return;
        padded.insert(padded.end(), samples.begin(), samples.end());
        rawCount += samples.size();
        advance();
    }

    void finish() {
        if (finishedFlag) return;
        if (!inputDone) {
            inputDone = true;
            padded.insert(padded.end(), firMid, 0.0);
        }
        advance();
        if (phase == Phase::HailSearch) {
            concludeCluster();
        }
        if (phase == Phase::Segmenting) {
            if (auto run = runs.flush()) handleRun(*run);
            closeChar();
        }
        phase = Phase::Done;
        if (!result.hailAt && opts.strict) {
            finishedFlag = true;
            throw NoHailFound("no hail tone found in input");
        }
        finishedFlag = true;
    }

    void extendFiltered() {
        std::size_t producible =
            padded.size() >= fir.size() ? padded.size() - fir.size() + 1 : 0;
        producible = std::min(producible, rawCount);
        while (filtered.size() < producible) {
            filtered.push_back(
                kernels::dot(fir.data(), padded.data() + filtered.size(), fir.size()));
        }
    }

    bool hopReady(std::size_t k) const {
        if (inputDone) return k * hopSamples < rawCount;
        std::size_t winEnd = k * hopSamples + hopSamples / 2 + halfWindow;
        std::size_t need = std::max((k + 1) * hopSamples, winEnd);
        return filtered.size() >= need;
    }

    double hopRms(std::size_t k) const {
        std::size_t start = k * hopSamples;
        std::size_t len = std::min(hopSamples, filtered.size() - start);
        if (len == 0) return 0.0;
        return std::sqrt(kernels::sumSquares(filtered.data() + start, len) / len);
    }

    // Frame-length window centered on hop k, zero-padded at the edges.
    std::vector<double> hopWindowSamples(std::size_t k) const {
        std::vector<double> out(windowSamples, 0.0);
        long long center = static_cast<long long>(k * hopSamples + hopSamples / 2);
        long long start = center - static_cast<long long>(halfWindow);
        for (std::size_t i = 0; i < windowSamples; ++i) {
            long long idx = start + static_cast<long long>(i);
            if (idx >= 0 && idx < static_cast<long long>(filtered.size())) {
                out[i] = filtered[idx];
            }
        }
        return out;
    }

    double hopPeak(std::size_t k) {
        if (hops[k].peakFreq < 0.0) {
            dsp::FrameSpectrum spec =
                dsp::analyzeFramePrefiltered(hopWindowSamples(k), cfg, plan, window);
            hops[k].peakFreq = spec.peakFreq;
        }
        return hops[k].peakFreq;
    }

    void advance() {
        extendFiltered();
        while (phase != Phase::Done && hopReady(nextHop)) {
            std::size_t k = nextHop++;
            hops.push_back({hopRms(k), -1.0});
            processHop(k);
        }
    }

    void processHop(std::size_t k) {
        if (phase == Phase::HailSearch) {
            hailStep(k);
        } else if (phase == Phase::Segmenting) {
            segStep(k);
        }
    }

    void hailStep(std::size_t k) {
        bool match = hops[k].rms > kHailRmsFloor &&
                     std::fabs(hopPeak(k) - cfg.hailFreq) <= cfg.toleranceHz;
        if (match) {
            if (!clusterActive || k - clusterLast > kHailGapHops + 1) {
                clusterActive = true;
                clusterFirst = k;
                clusterRms.clear();
            }
            clusterLast = k;
            clusterRms.push_back(hops[k].rms);
        } else if (clusterActive && k - clusterLast > kHailGapHops) {
            std::size_t replayFrom = concludeCluster();
            for (std::size_t h = replayFrom; h <= k && phase == Phase::Segmenting; ++h) {
                segStep(h);
            }
        }
    }

    // Closes the cluster under construction. Returns the first hop the
    // segmentation phase must replay when the cluster qualified as a hail.
    std::size_t concludeCluster() {
        if (!clusterActive) return 0;
        clusterActive = false;
        if (clusterRms.size() < hailNeedHops) return 0;

        result.hailAt = clusterFirst * hopSamples;
        const double hailRms = median(clusterRms);
        sustainRms = kSustainFraction * hailRms;
        onsetRms = kOnsetFraction * hailRms;
        runs = RunBuilder(sustainRms, onsetRms);
        prevEndHop = static_cast<long long>(clusterLast);
        lastActivityHop = clusterLast;
        phase = Phase::Segmenting;
        return clusterLast + 1;
    }

    void segStep(std::size_t k) {
        if (hops[k].rms > sustainRms) lastActivityHop = k;
        auto closed = runs.step(k, hops[k].rms, [&] { return hopPeak(k); });
        if (closed) handleRun(*closed);

        if (opts.silenceTimeoutMs > 0 && !runs.open()) {
            long long silentMs =
                (static_cast<long long>(k) - static_cast<long long>(lastActivityHop)) * kHopMs;
            if (silentMs > opts.silenceTimeoutMs) {
                closeChar();
                phase = Phase::Done;
            }
        }
    }

    void handleRun(const RunBuilder::Run& run) {
        ClassifiedRun classified = classifyRun(run, prevEndHop, cfg, hopSamples, 0);
        if (classified.warning) result.warnings.push_back(*classified.warning);
        if (!classified.tone) return;

        result.symbols.push_back(*classified.tone);
        if (opts.keepFrameDiagnostics) {
            std::size_t centerHop = (run.firstHop + run.lastHop) / 2;
            result.frames.push_back(
                dsp::analyzeFramePrefiltered(hopWindowSamples(centerHop), cfg, plan, window));
        }
        prevEndHop = static_cast<long long>(run.lastHop);
        assemble(*classified.tone);
    }

    void assemble(const DetectedTone& tone) {
        if (tone.gapBeforeMs >= cfg.wordGapThresholdMs()) {
            closeChar();
            if (!result.text.empty() && result.text.back() != ' ') result.text.push_back(' ');
        } else if (tone.gapBeforeMs >= cfg.charGapThresholdMs()) {
            closeChar();
        }
        pendingElements.push_back(tone.cls == morse::ToneClass::Dot ? morse::Element::Dot
                                                                    : morse::Element::Dash);
    }

    void closeChar() {
        if (pendingElements.empty()) return;
        try {
            result.text.push_back(morse::morseToChar(pendingElements));
        } catch (const UnknownCode& e) {
            if (opts.strict) {
                pendingElements.clear();
                throw;
            }
            result.text.push_back('?');
            result.warnings.emplace_back(e.what());
        }
        pendingElements.clear();
    }
};

StreamingDecoder::StreamingDecoder(const ModemConfig& cfg, DecodeOptions opts)
    : impl_(std::make_unique<Impl>(cfg, opts)) {}

StreamingDecoder::~StreamingDecoder() = default;
StreamingDecoder::StreamingDecoder(StreamingDecoder&&) noexcept = default;
StreamingDecoder& StreamingDecoder::operator=(StreamingDecoder&&) noexcept = default;

void StreamingDecoder::feed(std::span<const double> samples) { impl_->feed(samples); }

void StreamingDecoder::finish() { impl_->finish(); }

bool StreamingDecoder::finished() const {
    return impl_->finishedFlag || impl_->phase == Impl::Phase::Done;
}

std::string StreamingDecoder::takeNewText() {
    std::string fresh = impl_->result.text.substr(impl_->textTaken);
    impl_->textTaken = impl_->result.text.size();
    return fresh;
}

const DecodeResult& StreamingDecoder::result() const { return impl_->result; }

DecodeResult decode(const AudioBuffer& buf, const ModemConfig& cfg, const DecodeOptions& opts) {
    if (buf.empty()) throw EmptyPayload("cannot decode an empty buffer");
    if (buf.sampleRate != cfg.sampleRate) {
        throw InvalidConfig("buffer sample rate differs from the modem configuration");
    }
    StreamingDecoder decoder(cfg, opts);
    decoder.feed(buf.samples);
    decoder.finish();
    return decoder.result();
}

std::optional<std::size_t> findHail(const AudioBuffer& buf, const ModemConfig& cfg) {
    if (buf.empty()) return std::nullopt;
    DecodeOptions opts;
    opts.keepFrameDiagnostics = false;
    return decode(buf, cfg, opts).hailAt;
}

std::vector<DetectedTone> segment(const AudioBuffer& buf, std::size_t from,
                                  const ModemConfig& cfg, double noiseFloorRms,
                                  std::vector<std::string>* warnings) {
    cfg.validate();
    if (from >= buf.size()) return {};

    const std::size_t hopSamples = static_cast<std::size_t>(kHopMs) * cfg.sampleRate / 1000;
    const std::size_t windowSamples = static_cast<std::size_t>(cfg.frameSamples());
    const std::size_t halfWindow = windowSamples / 2;

    AudioBuffer tail{std::vector<double>(buf.samples.begin() + from, buf.samples.end()),
                     buf.sampleRate};
    AudioBuffer filtered = dsp::lowPass(tail, dsp::kDecoderLowpassHz);

    const std::size_t hopCount = (filtered.size() + hopSamples - 1) / hopSamples;
    std::vector<double> rms(hopCount, 0.0);
    for (std::size_t k = 0; k < hopCount; ++k) {
        std::size_t start = k * hopSamples;
        std::size_t len = std::min(hopSamples, filtered.size() - start);
        rms[k] = std::sqrt(kernels::sumSquares(filtered.samples.data() + start, len) / len);
    }

    double sustain = noiseFloorRms;
    if (sustain < 0.0) {
        // No hail reference: scale the floor from the loudest hop instead.
        sustain = kSustainFraction * kernels::maxValue(rms.data(), rms.size());
    }
    const double onset = sustain * (kOnsetFraction / kSustainFraction);

    dsp::FftPlan plan(cfg.fftSize);
    std::vector<double> window = dsp::hannWindow(static_cast<int>(windowSamples));
    auto windowPeak = [&](std::size_t k) {
        std::vector<double> frame(windowSamples, 0.0);
        long long center = static_cast<long long>(k * hopSamples + hopSamples / 2);
        long long start = center - static_cast<long long>(halfWindow);
        for (std::size_t i = 0; i < windowSamples; ++i) {
            long long idx = start + static_cast<long long>(i);
            if (idx >= 0 && idx < static_cast<long long>(filtered.size())) {
                frame[i] = filtered.samples[idx];
            }
        }
        return dsp::analyzeFramePrefiltered(frame, cfg, plan, window).peakFreq;
    };

    std::vector<DetectedTone> symbols;
    long long prevEndHop = -1;
    RunBuilder runs(sustain, onset);
    auto emit = [&](const RunBuilder::Run& run) {
        ClassifiedRun classified = classifyRun(run, prevEndHop, cfg, hopSamples, from);
        if (classified.warning && warnings) warnings->push_back(*classified.warning);
        if (classified.tone) {
            symbols.push_back(*classified.tone);
            prevEndHop = static_cast<long long>(run.lastHop);
        }
    };
    for (std::size_t k = 0; k < hopCount; ++k) {
        if (auto run = runs.step(k, rms[k], [&] { return windowPeak(k); })) emit(*run);
    }
    if (auto run = runs.flush()) emit(*run);
    return symbols;
}

}  // namespace vbmodem::detect
