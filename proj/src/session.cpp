#include "vbmodem/session.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

#include "vbmodem/errors.hpp"

namespace vbmodem::session {
namespace {

constexpr int kStarveMessages = 2;  // two messages at the front of the queue

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

GateAction makeAction(GateAction::Kind kind) { return {kind, 0, {}}; }

}  // namespace

CallEvent CallEvent::ringing(std::string callerId) {
    return {Kind::RingingConnection, std::move(callerId)};
}
CallEvent CallEvent::userAnswer() { return {Kind::UserAnswer, {}}; }
CallEvent CallEvent::userDial(std::string callee) { return {Kind::UserDial, std::move(callee)}; }
CallEvent CallEvent::remoteHangup() { return {Kind::RemoteHangup, {}}; }
CallEvent CallEvent::payload(std::string text) { return {Kind::PayloadText, std::move(text)}; }

std::string CallEvent::toLine() const {
    switch (kind) {
        case Kind::RingingConnection: return "RING " + party;
        case Kind::UserAnswer: return "ANSWER";
        case Kind::UserDial: return "DIAL " + party;
        case Kind::RemoteHangup: return "HANGUP";
        case Kind::PayloadText: return "PAYLOAD " + party;
    }
    return {};
}

CallEvent CallEvent::fromLine(std::string_view line) {
    auto space = line.find(' ');
    std::string_view verb = line.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? "" : line.substr(space + 1);

    if (verb == "RING") {
        if (rest.empty()) throw InvalidConfig("RING requires a caller id");
        return ringing(std::string(rest));
    }
    if (verb == "ANSWER") return userAnswer();
    if (verb == "DIAL") {
        if (rest.empty()) throw InvalidConfig("DIAL requires a callee");
        return userDial(std::string(rest));
    }
    if (verb == "HANGUP") return remoteHangup();
    if (verb == "PAYLOAD") {
        if (rest.empty()) throw InvalidConfig("PAYLOAD requires text");
        return payload(std::string(rest));
    }
    throw InvalidConfig("unknown event verb '" + std::string(verb) + "'");
}

std::string GateAction::toString() const {
    switch (kind) {
        case Kind::AnswerCovert: return "AnswerCovert";
        case Kind::StarveLooper: return "StarveLooper(" + std::to_string(messagesAtFront) + ")";
        case Kind::PassToPhoneApp: return "PassToPhoneApp";
        case Kind::NoResponse: return "NoResponse";
        case Kind::ReleaseLooper: return "ReleaseLooper";
        case Kind::ExecutePayload: return "ExecutePayload(" + payload + ")";
    }
    return {};
}

std::pair<GateState, std::vector<GateAction>> gateStep(const GateState& state,
                                                       const CallEvent& ev) {
    GateState next = state;
    std::vector<GateAction> actions;

    switch (state.mode) {
        case GateMode::Idle:
            if (ev.kind == CallEvent::Kind::RingingConnection) {
                if (ev.party == state.triggerNumber) {
                    next.mode = GateMode::CovertSession;
                    next.looperStarved = true;
                    actions.push_back(makeAction(GateAction::Kind::AnswerCovert));
                    actions.push_back({GateAction::Kind::StarveLooper, kStarveMessages, {}});
                } else {
                    next.mode = GateMode::NormalRinging;
                    actions.push_back(makeAction(GateAction::Kind::PassToPhoneApp));
                }
            }
            break;

        case GateMode::CovertSession:
            switch (ev.kind) {
                case CallEvent::Kind::UserDial:
                case CallEvent::Kind::RingingConnection:
                    actions.push_back(makeAction(GateAction::Kind::NoResponse));
                    break;
                case CallEvent::Kind::RemoteHangup:
                    next.mode = GateMode::Idle;
                    next.looperStarved = false;
                    actions.push_back(makeAction(GateAction::Kind::ReleaseLooper));
                    break;
                case CallEvent::Kind::PayloadText:
                    actions.push_back({GateAction::Kind::ExecutePayload, 0, ev.party});
                    break;
                case CallEvent::Kind::UserAnswer:
                    break;  // nothing for the user to answer; identity
            }
            break;

        case GateMode::NormalRinging:
            if (ev.kind == CallEvent::Kind::UserAnswer) {
                next.mode = GateMode::NormalCall;
            } else if (ev.kind == CallEvent::Kind::RemoteHangup) {
                next.mode = GateMode::Idle;
            }
            break;

        case GateMode::NormalCall:
            if (ev.kind == CallEvent::Kind::RemoteHangup) {
                next.mode = GateMode::Idle;
            }
            break;
    }
    return {std::move(next), std::move(actions)};
}

std::string DeviceState::toKeyValues() const {
    std::ostringstream out;
    out << "bluetooth=" << (bluetoothOn ? "true" : "false") << "\n";
    out << "reboots=" << rebootCount << "\n";
    out << "calllog=";
    for (std::size_t i = 0; i < callLog.size(); ++i) {
        if (i > 0) out << ';';
        out << callLog[i];
    }
    out << "\n";
    return out.str();
}

DeviceState DeviceState::fromKeyValues(const std::string& text) {
    DeviceState dev;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("device state line is not key=value: " + line);
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "bluetooth") {
            dev.bluetoothOn = (value == "true" || value == "1");
        } else if (key == "reboots") {
            try {
                dev.rebootCount = std::stoi(value);
            } catch (const std::exception&) {
                throw InvalidConfig("reboots must be an integer, got '" + value + "'");
            }
        } else if (key == "calllog") {
            dev.callLog.clear();
            std::istringstream entries(value);
            std::string entry;
            while (std::getline(entries, entry, ';')) {
                if (!entry.empty()) dev.callLog.push_back(entry);
            }
        } else {
            throw InvalidConfig("unknown device state key '" + key + "'");
        }
    }
    return dev;
}

std::string_view outcomeName(CommandOutcome outcome) {
    switch (outcome) {
        case CommandOutcome::Rebooted: return "Rebooted";
        case CommandOutcome::CallLogCleared: return "CallLogCleared";
        case CommandOutcome::BluetoothEnabled: return "BluetoothEnabled";
        case CommandOutcome::UnknownCommand: return "UnknownCommand";
    }
    return {};
}

std::pair<DeviceState, CommandOutcome> executeCommand(const DeviceState& dev,
                                                      std::string_view command) {
    DeviceState next = dev;
    std::string cmd = lowered(command);
    if (cmd == "reboot") {
        next.rebootCount += 1;
        return {std::move(next), CommandOutcome::Rebooted};
    }
    if (cmd == "clrlog") {
        next.callLog.clear();
        return {std::move(next), CommandOutcome::CallLogCleared};
    }
    if (cmd == "blueto") {
        next.bluetoothOn = true;
        return {std::move(next), CommandOutcome::BluetoothEnabled};
    }
    return {std::move(next), CommandOutcome::UnknownCommand};
}

ScenarioResult runScenario(std::span<const CallEvent> events, std::string_view trigger,
                           DeviceState dev) {
    ScenarioResult result;
    result.finalDevice = std::move(dev);

    GateState state;
    state.triggerNumber = std::string(trigger);
    for (const CallEvent& ev : events) {
        auto [nextState, actions] = gateStep(state, ev);
        state = nextState;

        ScenarioStep step;
        step.event = ev;
        step.stateAfter = state;
        step.actions = actions;
        for (const GateAction& action : actions) {
            if (action.kind == GateAction::Kind::ExecutePayload) {
                auto [nextDev, outcome] = executeCommand(result.finalDevice, action.payload);
                result.finalDevice = std::move(nextDev);
                step.outcomes.push_back(outcome);
            }
        }
        result.transcript.push_back(std::move(step));
    }
    return result;
}

std::vector<CallEvent> parseEventTrace(std::istream& in) {
    std::vector<CallEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        events.push_back(CallEvent::fromLine(line));
    }
    return events;
}

}  // namespace vbmodem::session
