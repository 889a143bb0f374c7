#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace navigator {

/// Newline-delimited JSON messages exchanged with an external proof engine
/// over its stdin/stdout.
///
///     {"ready":true,"engine":"leandojo"}                       handshake
///     {"id":1,"cmd":"enter","theorem":"theorem t ..."}          requests
///     {"id":2,"cmd":"apply","state_id":0,"tactic":"rw [h]"}
///     {"id":3,"cmd":"close"}
///     {"id":2,"ok":true,"result":"state","state_id":5,"pretty":"..."}
///     {"id":2,"ok":true,"result":"proof_finished"}              responses
///     {"id":2,"ok":false,"error":"..."}
///     {"id":3,"ok":true}

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Enter, Apply, Close };

struct EngineRequest {
    std::int64_t id = 0;
    Command cmd = Command::Enter;
    std::string theorem;        // enter
    std::int64_t state_id = 0;  // apply
    std::string tactic;         // apply

    friend bool operator==(const EngineRequest&, const EngineRequest&) = default;
};

enum class ResultKind { None, State, ProofFinished };

struct EngineResponse {
    std::int64_t id = 0;
    bool ok = false;
    ResultKind result = ResultKind::None;
    std::int64_t state_id = 0;  // result == State
    std::string pretty;         // result == State
    std::string error;          // !ok

    friend bool operator==(const EngineResponse&, const EngineResponse&) = default;
};

struct EngineHandshake {
    std::string engine;

    friend bool operator==(const EngineHandshake&, const EngineHandshake&) = default;
};

using EngineMessage = std::variant<EngineRequest, EngineResponse, EngineHandshake>;

/// One JSON object followed by '\n'. Fields irrelevant to the message shape
/// are omitted.
std::string encode_message(const EngineMessage& message);

/// Accepts one line with or without its trailing newline. Throws
/// ProtocolError on malformed JSON or a message of no known shape.
EngineMessage decode_message(std::string_view line);

}  // namespace navigator
