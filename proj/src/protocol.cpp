#include "navigator/protocol.hpp"

#include <json.hpp>

namespace navigator {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view command_name(Command c) {
    switch (c) {
        case Command::Enter: return "enter";
        case Command::Apply: return "apply";
        case Command::Close: return "close";
    }
    return "";
}

template <typename T>
T required(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ProtocolError(std::string("field '") + key + "' has the wrong type");
    }
}

std::int64_t required_int(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
    if (!it->is_number_integer()) throw ProtocolError(std::string("field '") + key + "' must be an integer");
    return it->get<std::int64_t>();
}

}  // namespace

std::string encode_message(const EngineMessage& message) {
    ordered_json j;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, EngineRequest>) {
                j["id"] = m.id;
                j["cmd"] = command_name(m.cmd);
                if (m.cmd == Command::Enter) {
                    j["theorem"] = m.theorem;
                } else if (m.cmd == Command::Apply) {
                    j["state_id"] = m.state_id;
                    j["tactic"] = m.tactic;
                }
            } else if constexpr (std::is_same_v<M, EngineResponse>) {
                j["id"] = m.id;
                j["ok"] = m.ok;
                if (!m.ok) {
                    j["error"] = m.error;
                } else if (m.result == ResultKind::State) {
                    j["result"] = "state";
                    j["state_id"] = m.state_id;
                    j["pretty"] = m.pretty;
                } else if (m.result == ResultKind::ProofFinished) {
                    j["result"] = "proof_finished";
                }
            } else {
                j["ready"] = true;
                j["engine"] = m.engine;
            }
        },
        message);
    // Invalid UTF-8 from a foreign engine is replaced rather than rejected.
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

EngineMessage decode_message(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("malformed message: ") + e.what());
    }
    if (!j.is_object()) throw ProtocolError("message is not a JSON object");

    if (j.contains("ready")) {
        if (!required<bool>(j, "ready")) throw ProtocolError("handshake with ready=false");
        return EngineHandshake{required<std::string>(j, "engine")};
    }
    if (j.contains("cmd")) {
        EngineRequest r;
        r.id = required_int(j, "id");
        const auto cmd = required<std::string>(j, "cmd");
        if (cmd == "enter") {
            r.cmd = Command::Enter;
            r.theorem = required<std::string>(j, "theorem");
        } else if (cmd == "apply") {
            r.cmd = Command::Apply;
            r.state_id = required_int(j, "state_id");
            r.tactic = required<std::string>(j, "tactic");
        } else if (cmd == "close") {
            r.cmd = Command::Close;
        } else {
            throw ProtocolError("unknown command '" + cmd + "'");
        }
        return r;
    }
    if (j.contains("ok")) {
        EngineResponse r;
        r.id = required_int(j, "id");
        r.ok = required<bool>(j, "ok");
        if (!r.ok) {
            r.error = required<std::string>(j, "error");
            return r;
        }
        if (!j.contains("result")) return r;
        const auto result = required<std::string>(j, "result");
        if (result == "state") {
            r.result = ResultKind::State;
            r.state_id = required_int(j, "state_id");
            r.pretty = required<std::string>(j, "pretty");
        } else if (result == "proof_finished") {
            r.result = ResultKind::ProofFinished;
        } else {
            throw ProtocolError("unknown result '" + result + "'");
        }
        return r;
    }
    throw ProtocolError("message has no recognizable shape");
}

}  // namespace navigator
