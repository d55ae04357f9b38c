// vbmodem - voiceband FSK/Morse data modem CLI.
//
// Subcommands: encode (text -> wav), decode (wav -> text), channel (wav ->
// impaired wav), bench (end-to-end BER/throughput trials), scenario
// (call-gate state machine replay). Every command is deterministic given
// its full flag set; seeds are explicit flags. Each subcommand accepts
// --config FILE with key=value lines matching the long flag names; command
// line flags override the file, the file overrides built-in defaults.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "vbmodem/bench.hpp"
#include "vbmodem/channel.hpp"
#include "vbmodem/detect.hpp"
#include "vbmodem/errors.hpp"
#include "vbmodem/metrics.hpp"
#include "vbmodem/morse.hpp"
#include "vbmodem/session.hpp"
#include "vbmodem/synth.hpp"
#include "vbmodem/wav.hpp"

using json = nlohmann::json;
using namespace vbmodem;

namespace {

struct ModemFlags {
    ModemConfig cfg;
    void install(CLI::App* cmd) {
        cmd->add_option("--dot-freq", cfg.dotFreq, "dot tone frequency, Hz");
        cmd->add_option("--dash-freq", cfg.dashFreq, "dash tone frequency, Hz");
        cmd->add_option("--hail-freq", cfg.hailFreq, "hail tone frequency, Hz");
        cmd->add_option("--hail-ms", cfg.hailMs, "hail tone duration, ms");
        cmd->add_option("--frame-ms", cfg.frameMs, "payload tone duration, ms");
        cmd->add_option("--element-gap-ms", cfg.elementGapMs, "gap between elements, ms");
        cmd->add_option("--char-gap-ms", cfg.charGapMs, "gap between characters, ms");
        cmd->add_option("--word-gap-ms", cfg.wordGapMs, "gap between words, ms");
        cmd->add_option("--post-hail-gap-ms", cfg.postHailGapMs, "gap after the hail, ms");
        cmd->add_option("--amplitude", cfg.amplitude, "tone amplitude in (0,1]");
        cmd->add_option("--tolerance-hz", cfg.toleranceHz, "frequency match tolerance, Hz");
        cmd->add_option("--fft-size", cfg.fftSize, "decoder FFT size, power of two");
    }
};

struct ChannelFlags {
    channel::ChannelConfig cfg;
    std::string snrText = "inf";
    std::string codecText = "none";

    void install(CLI::App* cmd, bool withSeed = true) {
        cmd->add_option("--snr-db", snrText, "signal-to-noise ratio in dB, or 'inf'");
        cmd->add_option("--drop-prob", cfg.frameDropProb, "frame stealing probability");
        cmd->add_flag("--vad,!--no-vad", cfg.vadEnabled, "voice activity detection gate");
        cmd->add_option("--vad-threshold-dbfs", cfg.vadThresholdDbfs, "VAD threshold, dBFS");
        cmd->add_option("--codec", codecText, "companding codec")
            ->check(CLI::IsMember({"none", "mulaw"}));
        cmd->add_option("--band-low-hz", cfg.bandLowHz, "voice band lower edge, Hz");
        cmd->add_option("--band-high-hz", cfg.bandHighHz, "voice band upper edge, Hz");
        cmd->add_option("--gain", cfg.gain, "input gain");
        if (withSeed) cmd->add_option("--seed", cfg.seed, "channel random seed");
    }

    channel::ChannelConfig resolve() {
        cfg.snrDb = snrText == "inf" ? std::numeric_limits<double>::infinity()
                                     : std::stod(snrText);
        cfg.codec = codecText == "mulaw" ? channel::Codec::MuLaw : channel::Codec::None;
        return cfg;
    }
};

std::string readTextFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeTextFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoFailure("write error on " + path);
}

std::string joinIndices(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += std::to_string(v[i]);
    }
    return out;
}

json snrToJson(double snrDb) {
    if (std::isinf(snrDb)) return "inf";
    return snrDb;
}

const char* toneClassName(morse::ToneClass cls) {
    switch (cls) {
        case morse::ToneClass::Dot: return "dot";
        case morse::ToneClass::Dash: return "dash";
        case morse::ToneClass::Hail: return "hail";
    }
    return "?";
}

int runEncode(const std::string& text, const std::string& inFile, const std::string& outFile,
              const ModemConfig& cfg, bool lenient, bool asJson) {
    std::string payload = text;
    if (!inFile.empty()) payload = readTextFile(inFile);

    morse::SymbolTimeline tl = morse::buildTimeline(payload, cfg, !lenient);
    AudioBuffer buf = synth::renderTimeline(tl, cfg);
    wavio::writeWav(outFile, buf);

    if (asJson) {
        json out = {
            {"out", outFile},
            {"text", morse::normalizeText(payload, !lenient)},
            {"slots", tl.slots.size()},
            {"samples", buf.size()},
            {"durationSec", buf.durationSec()},
        };
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "wrote " << outFile << "\n"
                  << "duration-sec: " << buf.durationSec() << "\n"
                  << "timeline-slots: " << tl.slots.size() << "\n";
    }
    return 0;
}

int runDecode(const std::string& inFile, const ModemConfig& cfg, bool strict, bool asJson) {
    AudioBuffer buf = wavio::readWav(inFile);
    detect::DecodeOptions opts;
    opts.strict = strict;
    detect::DecodeResult result = detect::decode(buf, cfg, opts);

    if (asJson) {
        json symbols = json::array();
        for (std::size_t i = 0; i < result.symbols.size(); ++i) {
            const detect::DetectedTone& s = result.symbols[i];
            json entry = {
                {"class", toneClassName(s.cls)},
                {"startSample", s.startSample},
                {"gapBeforeMs", s.gapBeforeMs},
            };
            if (i < result.frames.size()) {
                entry["peakFreq"] = result.frames[i].peakFreq;
                entry["rms"] = result.frames[i].rms;
            }
            symbols.push_back(entry);
        }
        json out = {
            {"text", result.text},
            {"hailAtSample",
             result.hailAt ? json(*result.hailAt) : json(nullptr)},
            {"symbols", symbols},
            {"warnings", result.warnings},
        };
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "text: " << result.text << "\n";
        if (result.hailAt) {
            std::cout << "hail-at-sample: " << *result.hailAt << "\n";
        } else {
            std::cout << "hail-at-sample: none\n";
        }
        std::cout << "symbols: " << result.symbols.size() << "\n";
        for (const std::string& w : result.warnings) std::cout << "warning: " << w << "\n";
    }
    return 0;
}

int runChannel(const std::string& inFile, const std::string& outFile,
               const std::string& traceFile, const channel::ChannelConfig& cfg, bool asJson) {
    AudioBuffer buf = wavio::readWav(inFile);
    auto [out, trace] = channel::apply(buf, cfg);
    wavio::writeWav(outFile, out);

    if (!traceFile.empty()) {
        std::ostringstream text;
        text << "applied-snr-db="
             << (std::isinf(trace.appliedSnrDb) ? "inf" : std::to_string(trace.appliedSnrDb))
             << "\n";
        text << "dropped-frames=" << joinIndices(trace.droppedFrames) << "\n";
        text << "vad-suppressed-frames=" << joinIndices(trace.vadSuppressedFrames) << "\n";
        writeTextFile(traceFile, text.str());
    }

    if (asJson) {
        json report = {
            {"out", outFile},
            {"appliedSnrDb", snrToJson(trace.appliedSnrDb)},
            {"droppedFrames", trace.droppedFrames},
            {"vadSuppressedFrames", trace.vadSuppressedFrames},
        };
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "wrote " << outFile << "\n"
                  << "dropped-frames: " << trace.droppedFrames.size() << "\n"
                  << "vad-suppressed-frames: " << trace.vadSuppressedFrames.size() << "\n";
    }
    return 0;
}

json reportToJson(const metrics::LinkReport& r) {
    return {
        {"sentChars", r.sentChars},
        {"receivedChars", r.receivedChars},
        {"bitErrors", r.bitErrors},
        {"bitsTotal", r.bitsTotal},
        {"ber", r.ber},
        {"charErrors", r.charErrors},
        {"cer", r.cer},
        {"audioDurationSec", r.audioDurationSec},
        {"throughputBps", r.throughputBps},
    };
}

int runBench(const bench::BenchSpec& spec, const std::string& recordsFile, bool asJson) {
    bench::BenchResult result = bench::runBench(spec);
    if (!recordsFile.empty()) writeTextFile(recordsFile, bench::recordsToTsv(result));

    const bench::Aggregate& agg = result.aggregate;
    if (asJson) {
        json trials = json::array();
        for (const metrics::LinkReport& r : result.trials) trials.push_back(reportToJson(r));
        json out = {
            {"chars", spec.corpusChars},
            {"trials", spec.trials},
            {"baseSeed", spec.baseSeed},
            {"aggregate",
             {{"ber", {{"mean", agg.meanBer}, {"min", agg.minBer}, {"max", agg.maxBer}}},
              {"cer", {{"mean", agg.meanCer}, {"min", agg.minCer}, {"max", agg.maxCer}}},
              {"throughputBps",
               {{"mean", agg.meanThroughputBps},
                {"min", agg.minThroughputBps},
                {"max", agg.maxThroughputBps}}}}},
            {"trialReports", trials},
        };
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout.setf(std::ios::fixed);
        std::cout.precision(6);
        std::cout << "trials: " << spec.trials << "  chars-per-trial: " << spec.corpusChars
                  << "  base-seed: " << spec.baseSeed << "\n";
        std::cout << "ber:            mean " << agg.meanBer << "  min " << agg.minBer
                  << "  max " << agg.maxBer << "\n";
        std::cout << "cer:            mean " << agg.meanCer << "  min " << agg.minCer
                  << "  max " << agg.maxCer << "\n";
        std::cout << "throughput-bps: mean " << agg.meanThroughputBps << "  min "
                  << agg.minThroughputBps << "  max " << agg.maxThroughputBps << "\n";
    }
    return 0;
}

int runScenario(const std::string& eventsFile, const std::string& trigger,
                const std::string& deviceFile, bool asJson) {
    std::ifstream in(eventsFile);
    if (!in) throw IoFailure("cannot open " + eventsFile);
    std::vector<session::CallEvent> events = session::parseEventTrace(in);

    session::DeviceState device;
    if (!deviceFile.empty()) {
        device = session::DeviceState::fromKeyValues(readTextFile(deviceFile));
    }

    session::ScenarioResult result = session::runScenario(events, trigger, device);

    if (asJson) {
        json transcript = json::array();
        for (const session::ScenarioStep& step : result.transcript) {
            json actions = json::array();
            for (const session::GateAction& a : step.actions) actions.push_back(a.toString());
            json outcomes = json::array();
            for (session::CommandOutcome o : step.outcomes) {
                outcomes.push_back(std::string(session::outcomeName(o)));
            }
            transcript.push_back({
                {"event", step.event.toLine()},
                {"mode",
                 step.stateAfter.mode == session::GateMode::Idle            ? "Idle"
                 : step.stateAfter.mode == session::GateMode::CovertSession ? "CovertSession"
                 : step.stateAfter.mode == session::GateMode::NormalRinging ? "NormalRinging"
                                                                            : "NormalCall"},
                {"actions", actions},
                {"outcomes", outcomes},
            });
        }
        json out = {
            {"transcript", transcript},
            {"device",
             {{"bluetooth", result.finalDevice.bluetoothOn},
              {"reboots", result.finalDevice.rebootCount},
              {"calllog", result.finalDevice.callLog}}},
        };
        std::cout << out.dump(2) << "\n";
    } else {
        for (const session::ScenarioStep& step : result.transcript) {
            std::cout << step.event.toLine() << " ->";
            if (step.actions.empty()) {
                std::cout << " (no actions)";
            } else {
                for (const session::GateAction& a : step.actions) {
                    std::cout << " " << a.toString();
                }
            }
            for (session::CommandOutcome o : step.outcomes) {
                std::cout << " => " << session::outcomeName(o);
            }
            std::cout << "\n";
        }
        std::cout << result.finalDevice.toKeyValues();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voiceband FSK/Morse data modem with a voice-channel simulator"};
    app.require_subcommand(1);

    // encode
    auto* enc = app.add_subcommand("encode", "encode text into a wav transmission");
    enc->set_config("--config");
    std::string encText, encIn, encOut;
    bool encLenient = false, encJson = false;
    auto* textOpt = enc->add_option("--text", encText, "text to encode");
    auto* inOpt = enc->add_option("--in", encIn, "read the text from a file");
    enc->add_option("--out", encOut, "output wav path")->required();
    enc->add_flag("--lenient", encLenient, "substitute '?' for unsupported characters");
    enc->add_flag("--json", encJson, "machine-readable output");
    textOpt->excludes(inOpt);
    ModemFlags encModem;
    encModem.install(enc);

    // decode
    auto* dec = app.add_subcommand("decode", "decode a wav transmission into text");
    dec->set_config("--config");
    std::string decIn;
    bool decStrict = false, decJson = false;
    dec->add_option("--in", decIn, "input wav path")->required();
    dec->add_flag("--strict", decStrict, "fail when no hail is found or a code is unknown");
    dec->add_flag("--json", decJson, "machine-readable output");
    ModemFlags decModem;
    decModem.install(dec);

    // channel
    auto* chan = app.add_subcommand("channel", "run a wav through the voice-channel simulator");
    chan->set_config("--config");
    std::string chanIn, chanOut, chanTrace;
    bool chanJson = false;
    chan->add_option("--in", chanIn, "input wav path")->required();
    chan->add_option("--out", chanOut, "output wav path")->required();
    chan->add_option("--trace", chanTrace, "write the frame-event trace to a file");
    chan->add_flag("--json", chanJson, "machine-readable output");
    ChannelFlags chanFlags;
    chanFlags.install(chan);

    // bench
    auto* ben = app.add_subcommand("bench", "measure BER/CER/throughput over seeded trials");
    ben->set_config("--config");
    bench::BenchSpec spec;
    std::string benRecords;
    bool benJson = false;
    ben->add_option("--chars", spec.corpusChars, "characters per trial");
    ben->add_option("--trials", spec.trials, "number of trials");
    ben->add_option("--seed", spec.baseSeed, "base seed; trial i uses seed + i");
    ben->add_option("--parallel", spec.maxParallelTrials, "max concurrent trials");
    ben->add_option("--records", benRecords, "write per-trial records (tsv) to a file");
    ben->add_flag("--json", benJson, "machine-readable output");
    ModemFlags benModem;
    benModem.install(ben);
    ChannelFlags benChannel;
    benChannel.install(ben, /*withSeed=*/false);  // --seed is the bench base seed

    // scenario
    auto* scen = app.add_subcommand("scenario", "replay a call-event trace through the gate");
    scen->set_config("--config");
    std::string scenEvents, scenTrigger, scenDevice;
    bool scenJson = false;
    scen->add_option("--events", scenEvents, "event trace file")->required();
    scen->add_option("--trigger", scenTrigger, "trigger caller id")->required();
    scen->add_option("--device", scenDevice, "initial device state file");
    scen->add_flag("--json", scenJson, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) {
            if (encText.empty() && encIn.empty()) {
                throw InvalidConfig("encode requires --text or --in");
            }
            return runEncode(encText, encIn, encOut, encModem.cfg, encLenient, encJson);
        }
        if (dec->parsed()) {
            return runDecode(decIn, decModem.cfg, decStrict, decJson);
        }
        if (chan->parsed()) {
            return runChannel(chanIn, chanOut, chanTrace, chanFlags.resolve(), chanJson);
        }
        if (ben->parsed()) {
            spec.modem = benModem.cfg;
            spec.channel = benChannel.resolve();
            return runBench(spec, benRecords, benJson);
        }
        if (scen->parsed()) {
            return runScenario(scenEvents, scenTrigger, scenDevice, scenJson);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
