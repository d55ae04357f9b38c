#include "vbmodem/bench.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "vbmodem/detect.hpp"
#include "vbmodem/errors.hpp"
#include "vbmodem/synth.hpp"

namespace vbmodem::bench {
namespace {

constexpr char kCharset[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ";
constexpr std::size_t kCharsetSize = sizeof(kCharset) - 1;

metrics::LinkReport runTrial(const BenchSpec& spec, int trial) {
    const std::uint64_t trialSeed = spec.baseSeed + static_cast<std::uint64_t>(trial);
    std::string corpus = makeCorpus(spec.corpusChars, trialSeed);

    AudioBuffer clean = synth::encodeText(corpus, spec.modem);
    channel::ChannelConfig chan = spec.channel;
    chan.seed = trialSeed;
    auto [received, trace] = channel::apply(clean, chan);

    detect::DecodeOptions opts;
    opts.keepFrameDiagnostics = false;
    detect::DecodeResult decoded = detect::decode(received, spec.modem, opts);
    return metrics::measureLink(corpus, decoded.text, clean.durationSec());
}

}  // namespace

std::string makeCorpus(int chars, std::uint64_t seed) {
    if (chars <= 0) throw InvalidConfig("corpus size must be positive");
    std::mt19937_64 rng(seed ^ 0xC0'5E'ED'00ULL);
    std::string out;
    out.reserve(chars);
    for (int i = 0; i < chars; ++i) {
        // rng() % n instead of a distribution: identical output everywhere.
        char c = kCharset[rng() % kCharsetSize];
        const bool spaceBanned = out.empty() || out.back() == ' ' || i == chars - 1;
        while (c == ' ' && spaceBanned) c = kCharset[rng() % (kCharsetSize - 1)];
        out.push_back(c);
    }
    return out;
}

BenchResult runBench(const BenchSpec& spec) {
    if (spec.trials <= 0) throw InvalidConfig("trial count must be positive");
    spec.modem.validate();
    spec.channel.validate(spec.modem.sampleRate);

    unsigned parallel = spec.maxParallelTrials > 0
                            ? static_cast<unsigned>(spec.maxParallelTrials)
                            : std::min(4u, std::max(1u, std::thread::hardware_concurrency()));

    BenchResult result;
    result.trials.resize(spec.trials);
    for (int base = 0; base < spec.trials; base += static_cast<int>(parallel)) {
        const int end = std::min(spec.trials, base + static_cast<int>(parallel));
        std::vector<std::future<metrics::LinkReport>> inflight;
        for (int t = base; t < end; ++t) {
            inflight.push_back(
                std::async(std::launch::async, [&spec, t] { return runTrial(spec, t); }));
        }
        for (int t = base; t < end; ++t) {
            result.trials[t] = inflight[t - base].get();
        }
    }

    Aggregate& agg = result.aggregate;
    agg.minBer = agg.minCer = agg.minThroughputBps = 1e300;
    agg.maxBer = agg.maxCer = agg.maxThroughputBps = -1e300;
    for (const metrics::LinkReport& r : result.trials) {
        agg.meanBer += r.ber;
        agg.meanCer += r.cer;
        agg.meanThroughputBps += r.throughputBps;
        agg.minBer = std::min(agg.minBer, r.ber);
        agg.maxBer = std::max(agg.maxBer, r.ber);
        agg.minCer = std::min(agg.minCer, r.cer);
        agg.maxCer = std::max(agg.maxCer, r.cer);
        agg.minThroughputBps = std::min(agg.minThroughputBps, r.throughputBps);
        agg.maxThroughputBps = std::max(agg.maxThroughputBps, r.throughputBps);
    }
    agg.meanBer /= spec.trials;
    agg.meanCer /= spec.trials;
    agg.meanThroughputBps /= spec.trials;
    return result;
}

std::string recordsToTsv(const BenchResult& result) {
    std::ostringstream out;
    out << metrics::reportHeaderTsv() << "\n";
    for (const metrics::LinkReport& r : result.trials) {
        out << metrics::reportToTsv(r) << "\n";
    }
    return out.str();
}

}  // namespace vbmodem::bench
