#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>
#include <string>

#include "vbmodem/errors.hpp"
#include "vbmodem/metrics.hpp"

using namespace vbmodem;

namespace {

struct OracleCost {
    long long edits;
    long long bits;
    bool operator<(const OracleCost& o) const {
        return edits != o.edits ? edits < o.edits : bits < o.bits;
    }
};

// Brute force over every alignment, lexicographic (edits, bits) minimum.
OracleCost bruteForce(std::string_view sent, std::string_view received) {
    if (sent.empty() && received.empty()) return {0, 0};
    OracleCost best = {1 << 20, 1 << 20};
    if (!sent.empty() && !received.empty()) {
        OracleCost sub = bruteForce(sent.substr(1), received.substr(1));
        sub.edits += sent[0] == received[0] ? 0 : 1;
        sub.bits += std::popcount(static_cast<unsigned>(
            static_cast<unsigned char>(sent[0]) ^ static_cast<unsigned char>(received[0])));
        best = std::min(best, sub);
    }
    if (!sent.empty()) {
        OracleCost del = bruteForce(sent.substr(1), received);
        del.edits += 1;
        del.bits += 8;
        best = std::min(best, del);
    }
    if (!received.empty()) {
        OracleCost ins = bruteForce(sent, received.substr(1));
        ins.edits += 1;
        ins.bits += 8;
        best = std::min(best, ins);
    }
    return best;
}

}  // namespace

TEST_CASE("alignAndScore examples") {
    metrics::AlignmentScore identity = metrics::alignAndScore("AB", "AB");
    CHECK(identity.bitErrors == 0);
    CHECK(identity.bitsTotal == 16);
    CHECK(identity.charErrors == 0);

    // 'A' = 0x41, 'C' = 0x43: one differing bit
    metrics::AlignmentScore sub = metrics::alignAndScore("A", "C");
    CHECK(sub.bitErrors == 1);
    CHECK(sub.bitsTotal == 8);
    CHECK(sub.charErrors == 1);

    metrics::AlignmentScore del = metrics::alignAndScore("AB", "A");
    CHECK(del.bitErrors == 8);
    CHECK(del.bitsTotal == 16);
    CHECK(del.charErrors == 1);

    CHECK_THROWS_AS(metrics::alignAndScore("", "X"), EmptyReference);
}

TEST_CASE("alignAndScore agrees with the exhaustive oracle") {
    const std::string alphabet = "ABC";

    auto checkPair = [](const std::string& sent, const std::string& received) {
        OracleCost expected = bruteForce(sent, received);
        metrics::AlignmentScore got = metrics::alignAndScore(sent, received);
        CAPTURE(sent);
        CAPTURE(received);
        CHECK(got.charErrors == expected.edits);
        long long clamped = std::min(expected.bits, static_cast<long long>(8 * sent.size()));
        CHECK(got.bitErrors == clamped);
    };

    SUBCASE("every pair of strings up to length 3") {
        std::vector<std::string> all = {""};
        for (int len = 0; len < 3; ++len) {
            std::vector<std::string> next;
            for (const std::string& s : all) {
                if (s.size() == static_cast<std::size_t>(len)) {
                    for (char c : alphabet) next.push_back(s + c);
                }
            }
            all.insert(all.end(), next.begin(), next.end());
        }
        for (const std::string& sent : all) {
            if (sent.empty()) continue;
            for (const std::string& received : all) checkPair(sent, received);
        }
    }

    SUBCASE("random pairs up to length 6") {
        std::mt19937_64 rng(31337);
        for (int iter = 0; iter < 400; ++iter) {
            std::string sent, received;
            std::size_t ns = 1 + rng() % 6;
            std::size_t nr = rng() % 7;
            for (std::size_t i = 0; i < ns; ++i) sent.push_back(alphabet[rng() % 3]);
            for (std::size_t i = 0; i < nr; ++i) received.push_back(alphabet[rng() % 3]);
            checkPair(sent, received);
        }
    }
}

TEST_CASE("measureLink examples") {
    metrics::LinkReport clean = metrics::measureLink("SOS", "SOS", 3.0);
    CHECK(clean.ber == 0.0);
    CHECK(clean.cer == 0.0);
    CHECK(clean.throughputBps == doctest::Approx(8.0));

    metrics::LinkReport oneSub = metrics::measureLink("SOS", "SOO", 3.0);
    CHECK(oneSub.cer == doctest::Approx(1.0 / 3.0));
    CHECK(oneSub.throughputBps == doctest::Approx(16.0 / 3.0));
    // 'S' = 0x53 vs 'O' = 0x4F: 0x1C -> 3 bits
    CHECK(oneSub.bitErrors == 3);

    metrics::LinkReport lost = metrics::measureLink("X", "", 1.0);
    CHECK(lost.ber == 1.0);
    CHECK(lost.throughputBps == 0.0);

    CHECK_THROWS_AS(metrics::measureLink("X", "X", 0.0), InvalidConfig);
}

TEST_CASE("measureLink invariants") {
    std::mt19937_64 rng(555);
    const std::string alphabet = "AB01 ";
    for (int iter = 0; iter < 300; ++iter) {
        std::string sent, received;
        std::size_t ns = 1 + rng() % 10;
        std::size_t nr = rng() % 14;
        for (std::size_t i = 0; i < ns; ++i) sent.push_back(alphabet[rng() % 5]);
        for (std::size_t i = 0; i < nr; ++i) received.push_back(alphabet[rng() % 5]);

        metrics::LinkReport report = metrics::measureLink(sent, received, 2.5);
        CHECK(report.ber >= 0.0);
        CHECK(report.ber <= 1.0);
        CHECK(report.cer >= 0.0);
        CHECK(report.cer <= 1.0);
        CHECK(report.throughputBps >= 0.0);
        CHECK(report.bitErrors <= report.bitsTotal);

        metrics::LinkReport self = metrics::measureLink(sent, sent, 2.5);
        CHECK(self.ber == 0.0);
        CHECK(self.cer == 0.0);
    }
}

TEST_CASE("bit errors beyond the reference length clamp with a warning") {
    metrics::LinkReport report = metrics::measureLink("X", "XYZW", 1.0);
    CHECK(report.ber == 1.0);
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("tsv record format") {
    metrics::LinkReport report = metrics::measureLink("SOS", "SOS", 3.0);
    std::string header = metrics::reportHeaderTsv();
    CHECK(header.front() == '#');
    CHECK(std::count(header.begin(), header.end(), '\t') == 8);
    std::string row = metrics::reportToTsv(report);
    CHECK(std::count(row.begin(), row.end(), '\t') == 8);
}
