// AudioBuffer - normalized mono sample sequence, the unit of every DSP op.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vbmodem {

struct AudioBuffer {
    std::vector<double> samples;  // values in [-1, 1]
    int sampleRate = 8000;

    AudioBuffer() = default;
    AudioBuffer(std::vector<double> s, int rate) : samples(std::move(s)), sampleRate(rate) {}

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double durationSec() const {
        return sampleRate > 0 ? static_cast<double>(samples.size()) / sampleRate : 0.0;
    }

    std::span<const double> view(std::size_t offset, std::size_t count) const {
        return std::span<const double>(samples).subspan(offset, count);
    }
};

}  // namespace vbmodem
