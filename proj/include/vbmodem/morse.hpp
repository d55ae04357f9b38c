// Text <-> Morse element mapping and the timed symbol timeline that is the
// modem's wire format. Characters map to dot/dash sequences; the framer
// schedules them into tone/silence slots (hail first, equal-length payload
// tones, gap silences in the 1:3:7 element/char/word ratio).

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbmodem/modem_config.hpp"

namespace vbmodem::morse {

enum class Element { Dot, Dash };

enum class ToneClass { Dot, Dash, Hail };

struct CharCode {
    char character;
    std::vector<Element> elements;  // 1..6 entries
};

struct Slot {
    enum class Kind { Tone, Silence };
    Kind kind;
    ToneClass tone = ToneClass::Dot;  // meaningful for Kind::Tone only
    int durationMs = 0;

    static Slot makeTone(ToneClass cls, int ms) { return {Kind::Tone, cls, ms}; }
    static Slot makeSilence(int ms) { return {Kind::Silence, ToneClass::Dot, ms}; }
    bool isTone() const { return kind == Kind::Tone; }
};

struct SymbolTimeline {
    std::vector<Slot> slots;

    int totalDurationMs() const;
    // Checks the structural invariants: leading hail tone, positive
    // durations, merged gaps, frame-length payload tones.
    void validate(const ModemConfig& cfg) const;
};

// One detected payload tone plus the silence preceding it; the decoder-side
// view of the wire format (hail excluded).
struct DetectedSymbol {
    ToneClass cls;
    double gapBeforeMs = 0.0;
};

struct TextResult {
    std::string text;
    std::vector<std::string> warnings;
};

// True for the 36 charset symbols (A-Z, 0-9) plus '?', the lenient-mode
// substitution marker. Space is a word gap, not a code.
bool isEncodable(char c);

CharCode charToMorse(char c);                           // throws UnsupportedCharacter
char morseToChar(std::span<const Element> elements);    // throws UnknownCode

// Uppercases, collapses whitespace runs to single spaces, trims. Strict
// mode throws UnsupportedCharacter on anything outside the charset;
// lenient mode substitutes '?'.
std::string normalizeText(std::string_view text, bool strict);

SymbolTimeline buildTimeline(std::string_view text, const ModemConfig& cfg, bool strict = true);

// Inverse framing: classifies the gaps between detected symbols into
// element/character/word boundaries and maps the element groups back to
// text. Strict mode throws UnknownCode on unmapped groups; lenient mode
// substitutes '?' and records a warning.
TextResult timelineToText(std::span<const DetectedSymbol> symbols, const ModemConfig& cfg,
                          bool strict = false);

// The idealized decoder input for a timeline: its payload tones with
// accumulated preceding silence (hail skipped, its gap folded into the
// first symbol).
std::vector<DetectedSymbol> idealSymbolStream(const SymbolTimeline& tl);

}  // namespace vbmodem::morse
