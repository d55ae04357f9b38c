// Call-gating state machine and bot command dispatcher, driven against a
// simulated device state. Behavioral model only; no OS integration.
//
// An incoming ring from the trigger number is answered covertly and the
// UI message loop is starved with two front-of-queue messages; every other
// call passes through to the phone app. While the covert session is open
// the machine ignores user dials and further rings, executes payload text
// as bot commands, and releases the loop only on remote hangup.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vbmodem::session {

struct CallEvent {
    enum class Kind { RingingConnection, UserAnswer, UserDial, RemoteHangup, PayloadText };
    Kind kind = Kind::RemoteHangup;
    std::string party;  // callerId / callee / payload text, per kind

    static CallEvent ringing(std::string callerId);
    static CallEvent userAnswer();
    static CallEvent userDial(std::string callee);
    static CallEvent remoteHangup();
    static CallEvent payload(std::string text);

    std::string toLine() const;               // RING <id> / ANSWER / DIAL <n> / ...
    static CallEvent fromLine(std::string_view line);
};

enum class GateMode { Idle, CovertSession, NormalRinging, NormalCall };

struct GateState {
    GateMode mode = GateMode::Idle;
    std::string triggerNumber;  // fixed for the lifetime of the machine
    bool looperStarved = false; // true exactly while mode == CovertSession
};

struct GateAction {
    enum class Kind {
        AnswerCovert,
        StarveLooper,
        PassToPhoneApp,
        NoResponse,
        ReleaseLooper,
        ExecutePayload,
    };
    Kind kind;
    int messagesAtFront = 0;  // StarveLooper always carries 2
    std::string payload;      // ExecutePayload text

    std::string toString() const;
    bool operator==(const GateAction&) const = default;
};

std::pair<GateState, std::vector<GateAction>> gateStep(const GateState& state,
                                                       const CallEvent& ev);

struct DeviceState {
    bool bluetoothOn = false;
    std::vector<std::string> callLog;
    int rebootCount = 0;

    std::string toKeyValues() const;  // bluetooth= / reboots= / calllog=
    static DeviceState fromKeyValues(const std::string& text);
};

enum class CommandOutcome { Rebooted, CallLogCleared, BluetoothEnabled, UnknownCommand };

std::string_view outcomeName(CommandOutcome outcome);

// Case-insensitive dispatch of the bot command set (Reboot, Clrlog,
// Blueto); anything else is an UnknownCommand no-op.
std::pair<DeviceState, CommandOutcome> executeCommand(const DeviceState& dev,
                                                      std::string_view command);

struct ScenarioStep {
    CallEvent event;
    GateState stateAfter;
    std::vector<GateAction> actions;
    std::vector<CommandOutcome> outcomes;  // from ExecutePayload actions
};

struct ScenarioResult {
    std::vector<ScenarioStep> transcript;
    DeviceState finalDevice;
};

ScenarioResult runScenario(std::span<const CallEvent> events, std::string_view trigger,
                           DeviceState dev);

// One event per line; blank lines and '#' comments skipped.
std::vector<CallEvent> parseEventTrace(std::istream& in);

}  // namespace vbmodem::session
