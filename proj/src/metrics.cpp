#include "vbmodem/metrics.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "vbmodem/errors.hpp"

namespace vbmodem::metrics {
namespace {

constexpr long long kInsDelBits = 8;

int hammingBits(char a, char b) {
    return std::popcount(static_cast<unsigned>(static_cast<unsigned char>(a) ^
                                               static_cast<unsigned char>(b)));
}

struct Cost {
    long long edits = 0;
    long long bits = 0;

    bool operator<(const Cost& other) const {
        return edits != other.edits ? edits < other.edits : bits < other.bits;
    }
    Cost plus(long long e, long long b) const { return {edits + e, bits + b}; }
};

}  // namespace

AlignmentScore alignAndScore(std::string_view sent, std::string_view received) {
    if (sent.empty()) throw EmptyReference("sent string must be nonempty");

    const std::size_t n = sent.size();
    const std::size_t m = received.size();

    // Lexicographic (editDistance, bitErrors) DP; among the minimum-edit
    // alignments this picks the one with the fewest bit errors, which is
    // what the exhaustive oracle computes.
    std::vector<Cost> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        prev[j] = {static_cast<long long>(j), static_cast<long long>(j) * kInsDelBits};
    }
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = {static_cast<long long>(i), static_cast<long long>(i) * kInsDelBits};
        for (std::size_t j = 1; j <= m; ++j) {
            const bool same = sent[i - 1] == received[j - 1];
            Cost sub = prev[j - 1].plus(same ? 0 : 1,
                                        hammingBits(sent[i - 1], received[j - 1]));
            Cost del = prev[j].plus(1, kInsDelBits);
            Cost ins = cur[j - 1].plus(1, kInsDelBits);
            cur[j] = std::min(sub, std::min(del, ins));
        }
        std::swap(prev, cur);
    }

    AlignmentScore score;
    score.charErrors = static_cast<int>(prev[m].edits);
    score.bitErrors = prev[m].bits;
    score.bitsTotal = static_cast<long long>(n) * 8;
    if (score.bitErrors > score.bitsTotal) {
        score.warnings.push_back("bit errors exceed reference bits; clamped");
        score.bitErrors = score.bitsTotal;
    }
    return score;
}

LinkReport measureLink(std::string_view sent, std::string_view received,
                       double audioDurationSec) {
    if (audioDurationSec <= 0.0) throw InvalidConfig("audio duration must be positive");
    AlignmentScore score = alignAndScore(sent, received);

    LinkReport report;
    report.sentChars = static_cast<int>(sent.size());
    report.receivedChars = static_cast<int>(received.size());
    report.bitErrors = score.bitErrors;
    report.bitsTotal = score.bitsTotal;
    report.ber = static_cast<double>(score.bitErrors) / static_cast<double>(score.bitsTotal);
    report.charErrors = score.charErrors;
    report.cer = std::min(1.0, static_cast<double>(score.charErrors) / report.sentChars);
    report.audioDurationSec = audioDurationSec;
    report.throughputBps = 8.0 * report.sentChars * (1.0 - report.cer) / audioDurationSec;
    report.warnings = std::move(score.warnings);
    return report;
}

std::string reportHeaderTsv() {
    return "# sentChars\treceivedChars\tbitErrors\tbitsTotal\tber\tcharErrors\tcer\t"
           "audioDurationSec\tthroughputBps";
}

std::string reportToTsv(const LinkReport& r) {
    std::ostringstream out;
    out.precision(9);
    out << r.sentChars << '\t' << r.receivedChars << '\t' << r.bitErrors << '\t'
        << r.bitsTotal << '\t' << r.ber << '\t' << r.charErrors << '\t' << r.cer << '\t'
        << r.audioDurationSec << '\t' << r.throughputBps;
    return out.str();
}

}  // namespace vbmodem::metrics
