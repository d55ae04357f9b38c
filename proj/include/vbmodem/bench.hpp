// End-to-end benchmark harness: seeded random corpus -> encode -> channel
// -> decode -> link measurement, aggregated over trials.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbmodem/channel.hpp"
#include "vbmodem/metrics.hpp"
#include "vbmodem/modem_config.hpp"

namespace vbmodem::bench {

struct BenchSpec {
    int corpusChars = 200;
    int trials = 5;
    std::uint64_t baseSeed = 0;
    ModemConfig modem;
    channel::ChannelConfig channel;
    int maxParallelTrials = 0;  // 0 = pick from hardware concurrency
};

struct Aggregate {
    double meanBer = 0.0, minBer = 0.0, maxBer = 0.0;
    double meanCer = 0.0, minCer = 0.0, maxCer = 0.0;
    double meanThroughputBps = 0.0, minThroughputBps = 0.0, maxThroughputBps = 0.0;
};

struct BenchResult {
    std::vector<metrics::LinkReport> trials;
    Aggregate aggregate;
};

// Random charset text (A-Z, 0-9, space) with no leading/trailing/double
// spaces, so text normalization is the identity on it. Deterministic in
// the seed and independent of the standard library's distributions.
std::string makeCorpus(int chars, std::uint64_t seed);

// Trial i uses channel seed baseSeed + i and a corpus derived from the
// same value. Deterministic given the spec; trials may run in parallel.
BenchResult runBench(const BenchSpec& spec);

// One line per trial in LinkReport field order, '#'-prefixed header.
std::string recordsToTsv(const BenchResult& result);

}  // namespace vbmodem::bench
