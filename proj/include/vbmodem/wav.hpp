// WAV file I/O, restricted to the modem's wire format: PCM signed 16-bit
// little-endian, mono, 8000 Hz.

#pragma once

#include <string>

#include "vbmodem/audio.hpp"

namespace vbmodem::wavio {

inline constexpr int kRequiredSampleRate = 8000;

// Throws FormatMismatch for anything but 16-bit mono 8000 Hz PCM and
// IoFailure for unreadable or truncated files.
AudioBuffer readWav(const std::string& path);

void writeWav(const std::string& path, const AudioBuffer& buf);

}  // namespace vbmodem::wavio
