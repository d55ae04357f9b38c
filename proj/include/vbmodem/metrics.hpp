// Link-quality measurement: bit error rate, character error rate and
// throughput of one end-to-end transmission.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vbmodem::metrics {

struct AlignmentScore {
    long long bitErrors = 0;
    long long bitsTotal = 0;
    int charErrors = 0;
    std::vector<std::string> warnings;
};

struct LinkReport {
    int sentChars = 0;
    int receivedChars = 0;
    long long bitErrors = 0;
    long long bitsTotal = 0;
    double ber = 0.0;
    int charErrors = 0;
    double cer = 0.0;
    double audioDurationSec = 0.0;
    double throughputBps = 0.0;
    std::vector<std::string> warnings;
};

// Optimal character-level alignment (minimum edit distance, unit costs;
// ties broken toward fewer bit errors). Substitutions cost the Hamming
// distance of the 8-bit character codes; insertions and deletions cost 8
// bits each. bitsTotal is 8 * |sent|; bitErrors above that are clamped
// with a warning.
AlignmentScore alignAndScore(std::string_view sent, std::string_view received);

LinkReport measureLink(std::string_view sent, std::string_view received,
                       double audioDurationSec);

// One trial per line, LinkReport field order, tab-separated.
std::string reportHeaderTsv();
std::string reportToTsv(const LinkReport& report);

}  // namespace vbmodem::metrics
