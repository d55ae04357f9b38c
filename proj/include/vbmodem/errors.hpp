// Error types shared across the library. Each maps to one failure mode of
// the public API; all derive from Error so callers can catch coarsely.

#pragma once

#include <stdexcept>
#include <string>

namespace vbmodem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

struct UnsupportedCharacter : Error {
    explicit UnsupportedCharacter(char c)
        : Error(std::string("unsupported character: '") + c + "'"), character(c) {}
    char character;
};

struct UnknownCode : Error {
    using Error::Error;
};

struct EmptyPayload : Error {
    using Error::Error;
};

struct InvalidCutoff : Error {
    using Error::Error;
};

struct InvalidSize : Error {
    using Error::Error;
};

struct InvalidBand : Error {
    using Error::Error;
};

struct ZeroSignal : Error {
    using Error::Error;
};

struct NoHailFound : Error {
    using Error::Error;
};

struct EmptyReference : Error {
    using Error::Error;
};

struct FormatMismatch : Error {
    using Error::Error;
};

struct IoFailure : Error {
    using Error::Error;
};

}  // namespace vbmodem
