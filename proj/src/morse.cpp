#include "vbmodem/morse.hpp"

#include <algorithm>
#include <cctype>

#include "vbmodem/errors.hpp"

namespace vbmodem::morse {
namespace {

struct TableEntry {
    char character;
    const char* code;  // '.' = dot, '-' = dash
};

// ITU international Morse, letters and digits, plus '?' which the lenient
// paths use as a substitution marker.
constexpr TableEntry kTable[] = {
    {'A', ".-"},     {'B', "-..."},   {'C', "-.-."},   {'D', "-.."},    {'E', "."},
    {'F', "..-."},   {'G', "--."},    {'H', "...."},   {'I', ".."},     {'J', ".---"},
    {'K', "-.-"},    {'L', ".-.."},   {'M', "--"},     {'N', "-."},     {'O', "---"},
    {'P', ".--."},   {'Q', "--.-"},   {'R', ".-."},    {'S', "..."},    {'T', "-"},
    {'U', "..-"},    {'V', "...-"},   {'W', ".--"},    {'X', "-..-"},   {'Y', "-.--"},
    {'Z', "--.."},   {'0', "-----"},  {'1', ".----"},  {'2', "..---"},  {'3', "...--"},
    {'4', "....-"},  {'5', "....."},  {'6', "-...."},  {'7', "--..."},  {'8', "---.."},
    {'9', "----."},  {'?', "..--.."},
};

const TableEntry* findEntry(char c) {
    for (const TableEntry& e : kTable) {
        if (e.character == c) return &e;
    }
    return nullptr;
}

std::vector<Element> codeToElements(const char* code) {
    std::vector<Element> out;
    for (const char* p = code; *p; ++p) {
        out.push_back(*p == '.' ? Element::Dot : Element::Dash);
    }
    return out;
}

std::string elementsToCode(std::span<const Element> elements) {
    std::string s;
    for (Element e : elements) s.push_back(e == Element::Dot ? '.' : '-');
    return s;
}

}  // namespace

bool isEncodable(char c) { return findEntry(c) != nullptr; }

CharCode charToMorse(char c) {
    const TableEntry* e = findEntry(c);
    if (!e) throw UnsupportedCharacter(c);
    return {e->character, codeToElements(e->code)};
}

char morseToChar(std::span<const Element> elements) {
    if (elements.empty()) throw UnknownCode("empty element sequence");
    std::string code = elementsToCode(elements);
    for (const TableEntry& e : kTable) {
        if (code == e.code) return e.character;
    }
    throw UnknownCode("no character for code \"" + code + "\"");
}

std::string normalizeText(std::string_view text, bool strict) {
    std::string out;
    out.reserve(text.size());
    for (char raw : text) {
        if (std::isspace(static_cast<unsigned char>(raw))) {
            if (!out.empty() && out.back() != ' ') out.push_back(' ');
            continue;
        }
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
        if (!isEncodable(c)) {
            if (strict) throw UnsupportedCharacter(raw);
            c = '?';
        }
        out.push_back(c);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

int SymbolTimeline::totalDurationMs() const {
    int total = 0;
    for (const Slot& s : slots) total += s.durationMs;
    return total;
}

void SymbolTimeline::validate(const ModemConfig& cfg) const {
    if (slots.empty() || !slots.front().isTone() || slots.front().tone != ToneClass::Hail) {
        throw InvalidConfig("timeline must start with a hail tone");
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Slot& s = slots[i];
        if (s.durationMs <= 0) throw InvalidConfig("timeline slot with non-positive duration");
        if (!s.isTone() && i > 0 && !slots[i - 1].isTone()) {
            throw InvalidConfig("consecutive silence slots must be merged");
        }
        if (s.isTone() && s.tone != ToneClass::Hail && s.durationMs != cfg.frameMs) {
            throw InvalidConfig("payload tone duration differs from frameMs");
        }
    }
}

SymbolTimeline buildTimeline(std::string_view text, const ModemConfig& cfg, bool strict) {
    cfg.validate();
    std::string normalized = normalizeText(text, strict);
    if (normalized.empty()) throw EmptyPayload("nothing to encode after normalization");

    SymbolTimeline tl;
    tl.slots.push_back(Slot::makeTone(ToneClass::Hail, cfg.hailMs));
    tl.slots.push_back(Slot::makeSilence(cfg.postHailGapMs));

    bool firstChar = true;
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        char c = normalized[i];
        if (c == ' ') {
            tl.slots.push_back(Slot::makeSilence(cfg.wordGapMs));
            firstChar = true;
            continue;
        }
        if (!firstChar) tl.slots.push_back(Slot::makeSilence(cfg.charGapMs));
        firstChar = false;

        CharCode code = charToMorse(c);
        for (std::size_t k = 0; k < code.elements.size(); ++k) {
            if (k > 0) tl.slots.push_back(Slot::makeSilence(cfg.elementGapMs));
            ToneClass cls =
                code.elements[k] == Element::Dot ? ToneClass::Dot : ToneClass::Dash;
            tl.slots.push_back(Slot::makeTone(cls, cfg.frameMs));
        }
    }
    return tl;
}

TextResult timelineToText(std::span<const DetectedSymbol> symbols, const ModemConfig& cfg,
                          bool strict) {
    const double charThreshold = cfg.charGapThresholdMs();
    const double wordThreshold = cfg.wordGapThresholdMs();

    TextResult result;
    std::vector<Element> pending;

    auto closeChar = [&]() {
        if (pending.empty()) return;
        try {
            result.text.push_back(morseToChar(pending));
        } catch (const UnknownCode& e) {
            if (strict) throw;
            result.text.push_back('?');
            result.warnings.emplace_back(e.what());
        }
        pending.clear();
    };

    for (const DetectedSymbol& sym : symbols) {
        if (sym.cls == ToneClass::Hail) {
            result.warnings.emplace_back("hail tone in payload symbol stream ignored");
            continue;
        }
        if (sym.gapBeforeMs >= wordThreshold) {
            closeChar();
            if (!result.text.empty() && result.text.back() != ' ') result.text.push_back(' ');
        } else if (sym.gapBeforeMs >= charThreshold) {
            closeChar();
        }
        pending.push_back(sym.cls == ToneClass::Dot ? Element::Dot : Element::Dash);
    }
    closeChar();
    while (!result.text.empty() && result.text.back() == ' ') result.text.pop_back();
    return result;
}

std::vector<DetectedSymbol> idealSymbolStream(const SymbolTimeline& tl) {
    std::vector<DetectedSymbol> out;
    double gap = 0.0;
    for (const Slot& s : tl.slots) {
        if (!s.isTone()) {
            gap += s.durationMs;
            continue;
        }
        if (s.tone == ToneClass::Hail) {
            gap = 0.0;
            continue;
        }
        out.push_back({s.tone, gap});
        gap = 0.0;
    }
    return out;
}

}  // namespace vbmodem::morse
