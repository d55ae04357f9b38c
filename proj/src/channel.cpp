#include "vbmodem/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vbmodem/dsp.hpp"
#include "vbmodem/errors.hpp"
#include "vbmodem/kernels.hpp"

namespace vbmodem::channel {
namespace {

constexpr double kMu = 255.0;
constexpr int kMuLevels = 127;  // 7-bit magnitude plus sign

double frameRms(std::span<const double> frame) {
    if (frame.empty()) return 0.0;
    return std::sqrt(kernels::sumSquares(frame.data(), frame.size()) / frame.size());
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

void ChannelConfig::validate(int sampleRate) const {
    const double nyquist = sampleRate / 2.0;
    if (!(bandLowHz > 0.0 && bandLowHz < bandHighHz && bandHighHz < nyquist)) {
        throw InvalidBand("band edges must satisfy 0 < low < high < Nyquist");
    }
    if (!(frameDropProb >= 0.0 && frameDropProb <= 1.0)) {
        throw InvalidConfig("frameDropProb must lie in [0, 1]");
    }
    if (frameMs <= 0 || (frameMs * sampleRate) % 1000 != 0) {
        throw InvalidConfig("channel frameMs must give a whole number of samples");
    }
    if (gain <= 0.0) throw InvalidConfig("gain must be positive");
    if (std::isnan(snrDb) || (std::isinf(snrDb) && snrDb < 0.0)) {
        throw InvalidConfig("snrDb must be finite or +inf");
    }
}

std::string ChannelConfig::toKeyValues() const {
    std::ostringstream out;
    out << "band-low-hz=" << bandLowHz << "\n";
    out << "band-high-hz=" << bandHighHz << "\n";
    if (std::isinf(snrDb)) {
        out << "snr-db=inf\n";
    } else {
        out << "snr-db=" << snrDb << "\n";
    }
    out << "drop-prob=" << frameDropProb << "\n";
    out << "vad=" << (vadEnabled ? "true" : "false") << "\n";
    out << "vad-threshold-dbfs=" << vadThresholdDbfs << "\n";
    out << "codec=" << (codec == Codec::MuLaw ? "mulaw" : "none") << "\n";
    out << "gain=" << gain << "\n";
    out << "seed=" << seed << "\n";
    return out.str();
}

ChannelConfig ChannelConfig::fromKeyValues(const std::string& text) {
    ChannelConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("channel config line " + std::to_string(lineNo) +
                                " is not key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            if (key == "band-low-hz") {
                cfg.bandLowHz = std::stod(value);
            } else if (key == "band-high-hz") {
                cfg.bandHighHz = std::stod(value);
            } else if (key == "snr-db") {
                cfg.snrDb = (value == "inf") ? std::numeric_limits<double>::infinity()
                                             : std::stod(value);
            } else if (key == "drop-prob") {
                cfg.frameDropProb = std::stod(value);
            } else if (key == "vad") {
                if (value == "true" || value == "1" || value == "on") {
                    cfg.vadEnabled = true;
                } else if (value == "false" || value == "0" || value == "off") {
                    cfg.vadEnabled = false;
                } else {
                    throw InvalidConfig("vad must be true/false");
                }
            } else if (key == "vad-threshold-dbfs") {
                cfg.vadThresholdDbfs = std::stod(value);
            } else if (key == "codec") {
                if (value == "mulaw") {
                    cfg.codec = Codec::MuLaw;
                } else if (value == "none") {
                    cfg.codec = Codec::None;
                } else {
                    throw InvalidConfig("codec must be none or mulaw");
                }
            } else if (key == "gain") {
                cfg.gain = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else {
                throw InvalidConfig("unknown channel config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw InvalidConfig("bad value for channel config key '" + key + "'");
        }
    }
    return cfg;
}

double SeededRng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::gaussian() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    hasSpare_ = true;
    return r * std::cos(angle);
}

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stage) {
    std::uint64_t state = seed;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stage; ++i) out = splitmix64(state);
    return out;
}

std::uint8_t muLawEncode(double sample) {
    double x = std::clamp(sample, -1.0, 1.0);
    double mag = std::log1p(kMu * std::fabs(x)) / std::log1p(kMu);
    int quantized = static_cast<int>(std::lround(mag * kMuLevels));
    return static_cast<std::uint8_t>(x < 0.0 ? 0x80 | quantized : quantized);
}

double muLawDecode(std::uint8_t code) {
    int quantized = code & 0x7F;
    double mag = (std::pow(1.0 + kMu, static_cast<double>(quantized) / kMuLevels) - 1.0) / kMu;
    return (code & 0x80) ? -mag : mag;
}

AudioBuffer bandpass(const AudioBuffer& buf, double lowHz, double highHz) {
    return dsp::firFilter(buf,
                          dsp::designBandpassFir(dsp::kBandpassTaps, lowHz, highHz,
                                                 buf.sampleRate));
}

AudioBuffer companding(const AudioBuffer& buf) {
    AudioBuffer out;
    out.sampleRate = buf.sampleRate;
    out.samples.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.samples[i] = muLawDecode(muLawEncode(buf.samples[i]));
    }
    return out;
}

AudioBuffer addNoise(const AudioBuffer& buf, double snrDb, SeededRng& rng) {
    if (std::isinf(snrDb) && snrDb > 0.0) return buf;
    const double signalPower =
        buf.empty() ? 0.0 : kernels::sumSquares(buf.samples.data(), buf.size()) / buf.size();
    if (signalPower <= 0.0) {
        throw ZeroSignal("cannot scale noise against an all-zero signal");
    }
    const double noisePower = signalPower / std::pow(10.0, snrDb / 10.0);
    const double sigma = std::sqrt(noisePower);

    AudioBuffer out;
    out.sampleRate = buf.sampleRate;
    out.samples.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.samples[i] = std::clamp(buf.samples[i] + sigma * rng.gaussian(), -1.0, 1.0);
    }
    return out;
}

std::pair<AudioBuffer, std::vector<std::size_t>> vadSuppress(const AudioBuffer& buf,
                                                             const ChannelConfig& cfg) {
    const std::size_t frameLen = static_cast<std::size_t>(cfg.frameSamples(buf.sampleRate));
    const double rmsThreshold = std::pow(10.0, cfg.vadThresholdDbfs / 20.0);

    AudioBuffer out = buf;
    std::vector<std::size_t> suppressed;
    std::size_t frameIndex = 0;
    for (std::size_t start = 0; start < buf.size(); start += frameLen, ++frameIndex) {
        const std::size_t len = std::min(frameLen, buf.size() - start);
        if (frameRms(buf.view(start, len)) < rmsThreshold) {
            std::fill_n(out.samples.begin() + start, len, 0.0);
            suppressed.push_back(frameIndex);
        }
    }
    return {std::move(out), std::move(suppressed)};
}

std::pair<AudioBuffer, std::vector<std::size_t>> frameSteal(const AudioBuffer& buf,
                                                            const ChannelConfig& cfg,
                                                            SeededRng& rng) {
    const std::size_t frameLen = static_cast<std::size_t>(cfg.frameSamples(buf.sampleRate));

    AudioBuffer out = buf;
    std::vector<std::size_t> dropped;
    std::size_t frameIndex = 0;
    // One uniform draw per frame regardless of the probability, so the set
    // of dropped frames is nested across probabilities at a fixed seed.
    for (std::size_t start = 0; start < buf.size(); start += frameLen, ++frameIndex) {
        const std::size_t len = std::min(frameLen, buf.size() - start);
        if (rng.uniform01() < cfg.frameDropProb) {
            std::fill_n(out.samples.begin() + start, len, 0.0);
            dropped.push_back(frameIndex);
        }
    }
    return {std::move(out), std::move(dropped)};
}

std::pair<AudioBuffer, ChannelTrace> apply(const AudioBuffer& buf, const ChannelConfig& cfg) {
    cfg.validate(buf.sampleRate);

    AudioBuffer stage;
    stage.sampleRate = buf.sampleRate;
    stage.samples.resize(buf.size());
    kernels::scaleClip(stage.samples.data(), buf.samples.data(), cfg.gain, -1.0, 1.0,
                       buf.size());

    stage = bandpass(stage, cfg.bandLowHz, cfg.bandHighHz);
    if (cfg.codec == Codec::MuLaw) stage = companding(stage);

    ChannelTrace trace;
    trace.appliedSnrDb = cfg.snrDb;
    if (!std::isinf(cfg.snrDb)) {
        SeededRng noiseRng(deriveSeed(cfg.seed, 0));
        stage = addNoise(stage, cfg.snrDb, noiseRng);
    }
    if (cfg.vadEnabled) {
        auto [suppressedBuf, indices] = vadSuppress(stage, cfg);
        stage = std::move(suppressedBuf);
        trace.vadSuppressedFrames = std::move(indices);
    }
    SeededRng dropRng(deriveSeed(cfg.seed, 1));
    auto [stolenBuf, droppedIndices] = frameSteal(stage, cfg, dropRng);
    stage = std::move(stolenBuf);
    trace.droppedFrames = std::move(droppedIndices);

    return {std::move(stage), std::move(trace)};
}

}  // namespace vbmodem::channel
