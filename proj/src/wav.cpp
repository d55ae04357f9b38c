#include "vbmodem/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vbmodem/errors.hpp"

namespace vbmodem::wavio {
namespace {

std::uint32_t readU32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t readU16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void putU32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void putU16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioBuffer readWav(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    if (file.bad()) throw IoFailure("read error on " + path);

    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < 12 || std::memcmp(bytes, "RIFF", 4) != 0 ||
        std::memcmp(bytes + 8, "WAVE", 4) != 0) {
        throw FormatMismatch(path + " is not a RIFF/WAVE file");
    }

    bool haveFmt = false;
    std::uint16_t format = 0, channels = 0, bitsPerSample = 0;
    std::uint32_t sampleRate = 0;
    const unsigned char* sampleData = nullptr;
    std::uint32_t sampleBytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const unsigned char* chunk = bytes + pos;
        std::uint32_t chunkSize = readU32(chunk + 4);
        if (pos + 8 + chunkSize > data.size()) throw IoFailure(path + " is truncated");
        const unsigned char* body = chunk + 8;

        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunkSize < 16) throw FormatMismatch("fmt chunk too small in " + path);
            format = readU16(body);
            channels = readU16(body + 2);
            sampleRate = readU32(body + 4);
            bitsPerSample = readU16(body + 14);
            haveFmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            sampleData = body;
            sampleBytes = chunkSize;
        }
        pos += 8 + chunkSize + (chunkSize & 1);  // chunks are word-aligned
    }

    if (!haveFmt || !sampleData) throw FormatMismatch(path + " lacks fmt/data chunks");
    if (format != 1) throw FormatMismatch(path + " is not integer PCM");
    if (channels != 1) throw FormatMismatch(path + " must be mono");
    if (bitsPerSample != 16) throw FormatMismatch(path + " must be 16-bit");
    if (sampleRate != kRequiredSampleRate) {
        throw FormatMismatch(path + " must be sampled at 8000 Hz");
    }

    AudioBuffer buf;
    buf.sampleRate = static_cast<int>(sampleRate);
    const std::size_t count = sampleBytes / 2;
    buf.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::int16_t v = static_cast<std::int16_t>(readU16(sampleData + 2 * i));
        buf.samples[i] = static_cast<double>(v) / 32768.0;
    }
    return buf;
}

void writeWav(const std::string& path, const AudioBuffer& buf) {
    const std::uint32_t dataBytes = static_cast<std::uint32_t>(buf.size() * 2);

    std::string out;
    out.reserve(44 + dataBytes);
    out += "RIFF";
    putU32(out, 36 + dataBytes);
    out += "WAVE";
    out += "fmt ";
    putU32(out, 16);
    putU16(out, 1);  // PCM
    putU16(out, 1);  // mono
    putU32(out, static_cast<std::uint32_t>(buf.sampleRate));
    putU32(out, static_cast<std::uint32_t>(buf.sampleRate * 2));  // byte rate
    putU16(out, 2);   // block align
    putU16(out, 16);  // bits per sample
    out += "data";
    putU32(out, dataBytes);

    for (double s : buf.samples) {
        long v = std::lround(s * 32768.0);
        v = std::clamp(v, -32768L, 32767L);
        putU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoFailure("cannot open " + path + " for writing");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoFailure("write error on " + path);
}

}  // namespace vbmodem::wavio
