#include "navigator/engine.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <thread>

namespace navigator {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// ProofEngine

EnteredState ProofEngine::enter(std::string_view theorem_text) {
    if (entered()) throw EngineError("session already entered a theorem");
    std::string pretty = do_enter(theorem_text);
    pretty_.push_back(pretty);
    ids_.emplace(pretty_.back(), 0);
    return {0, std::move(pretty)};
}

StepResult ProofEngine::apply(std::int64_t state_id, std::string_view tactic) {
    if (state_id < 0 || static_cast<std::size_t>(state_id) >= pretty_.size())
        throw EngineError("unknown state id " + std::to_string(state_id));
    const auto start = Clock::now();
    StepResult result = do_apply(state_id, tactic);
    apply_seconds_ += std::chrono::duration<double>(Clock::now() - start).count();
    ++apply_count_;
    if (result.kind == StepKind::State) {
        const auto known = ids_.find(result.pretty);
        if (known != ids_.end()) {
            drop_last_state();
            result.state_id = known->second;
        } else {
            result.state_id = static_cast<std::int64_t>(pretty_.size());
            pretty_.push_back(result.pretty);
            ids_.emplace(pretty_.back(), result.state_id);
        }
    }
    return result;
}

const std::string& ProofEngine::pretty(std::int64_t state_id) const {
    if (state_id < 0 || static_cast<std::size_t>(state_id) >= pretty_.size())
        throw EngineError("unknown state id " + std::to_string(state_id));
    return pretty_[static_cast<std::size_t>(state_id)];
}

// ---------------------------------------------------------------------------
// BuiltinEngine

BuiltinEngine::BuiltinEngine(std::shared_ptr<const Theory> theory) : theory_(std::move(theory)) {
    if (!theory_) throw std::invalid_argument("null theory");
}

const ProofState& BuiltinEngine::state(std::int64_t state_id) const {
    if (state_id < 0 || static_cast<std::size_t>(state_id) >= states_.size())
        throw EngineError("unknown state id " + std::to_string(state_id));
    return states_[static_cast<std::size_t>(state_id)];
}

std::string BuiltinEngine::do_enter(std::string_view theorem_text) {
    try {
        TheoremHeader header = parse_theorem(theorem_text, theory_->signature());
        std::string pretty = print_state(header.state, theory_->signature());
        states_.push_back(std::move(header.state));
        return pretty;
    } catch (const ParseError& e) {
        throw EngineError(std::string("theorem parse failure: ") + e.what());
    }
}

StepResult BuiltinEngine::do_apply(std::int64_t state_id, std::string_view tactic) {
    TacticAst ast;
    try {
        ast = parse_tactic(tactic, *theory_);
    } catch (const ParseError& e) {
        return {StepKind::Failure, -1, {}, e.what()};
    }
    ApplyResult result = apply_tactic(states_[static_cast<std::size_t>(state_id)], ast, *theory_);
    if (auto* fresh = std::get_if<NewState>(&result)) {
        StepResult out{StepKind::State, -1, print_state(fresh->state, theory_->signature()), {}};
        states_.push_back(std::move(fresh->state));
        return out;
    }
    if (std::holds_alternative<ProofFinished>(result)) return {StepKind::ProofFinished, -1, {}, {}};
    return {StepKind::Failure, -1, {}, std::get<Failure>(result).reason};
}

void BuiltinEngine::drop_last_state() { states_.pop_back(); }

// ---------------------------------------------------------------------------
// ExternalEngine

/// A `/bin/sh -c` child with its stdin and stdout connected to pipes.
class ExternalEngine::Process {
public:
    explicit Process(const std::string& command) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0) throw EngineError(std::string("pipe: ") + std::strerror(errno));
        if (pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw EngineError(std::string("pipe: ") + std::strerror(errno));
        }
        pid_ = fork();
        if (pid_ < 0) throw EngineError(std::string("fork: ") + std::strerror(errno));
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
        fcntl(write_fd_, F_SETFD, FD_CLOEXEC);
        fcntl(read_fd_, F_SETFD, FD_CLOEXEC);
    }

    ~Process() {
        if (write_fd_ >= 0) ::close(write_fd_);
        if (read_fd_ >= 0) ::close(read_fd_);
        if (pid_ > 0) {
            // Give a well-behaved child a moment to exit on EOF.
            for (int i = 0; i < 20; ++i) {
                if (waitpid(pid_, nullptr, WNOHANG) == pid_) return;
                std::this_thread::sleep_for(std::chrono::milliseconds(5));
            }
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
        }
    }

    void write_line(const std::string& line) {
        std::size_t done = 0;
        while (done < line.size()) {
            const ssize_t n = ::write(write_fd_, line.data() + done, line.size() - done);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw EngineError(std::string("write to engine failed: ") + std::strerror(errno));
            }
            done += static_cast<std::size_t>(n);
        }
    }

    /// nullopt on timeout; throws EngineError on EOF.
    std::optional<std::string> read_line(Clock::time_point deadline) {
        while (true) {
            const std::size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
            if (remaining.count() <= 0) return std::nullopt;
            pollfd pfd{read_fd_, POLLIN, 0};
            const int rc = poll(&pfd, 1, static_cast<int>(std::min<std::int64_t>(remaining.count(), 1 << 30)));
            if (rc < 0) {
                if (errno == EINTR) continue;
                throw EngineError(std::string("poll failed: ") + std::strerror(errno));
            }
            if (rc == 0) return std::nullopt;
            char chunk[4096];
            const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw EngineError(std::string("read from engine failed: ") + std::strerror(errno));
            }
            if (n == 0) throw EngineError("engine process closed its output");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
    std::string buffer_;
};

ExternalEngine::ExternalEngine(ExternalEngineOptions options) : options_(std::move(options)) {
    if (options_.command.empty()) throw EngineError("empty engine command");
    // A child that dies early must not kill us on write.
    signal(SIGPIPE, SIG_IGN);
    process_ = std::make_unique<Process>(options_.command);
    const auto line = process_->read_line(Clock::now() + options_.startup_timeout);
    if (!line) throw EngineError("engine did not send its ready line in time");
    try {
        const EngineMessage m = decode_message(*line);
        const auto* hs = std::get_if<EngineHandshake>(&m);
        if (!hs) throw EngineError("engine's first line is not a handshake");
        engine_name_ = hs->engine;
    } catch (const ProtocolError& e) {
        throw EngineError(std::string("bad handshake: ") + e.what());
    }
}

ExternalEngine::~ExternalEngine() {
    try {
        close();
    } catch (...) {
    }
}

void ExternalEngine::close() {
    if (!process_) return;
    try {
        round_trip({next_request_id_++, Command::Close, {}, 0, {}}, std::chrono::milliseconds(500));
    } catch (const EngineError&) {
    }
    process_.reset();
}

std::optional<EngineResponse> ExternalEngine::round_trip(EngineRequest request, std::chrono::milliseconds timeout) {
    if (!process_) throw EngineError("engine session is closed");
    const std::int64_t id = request.id;
    process_->write_line(encode_message(request));
    const auto deadline = Clock::now() + timeout;
    while (true) {
        const auto line = process_->read_line(deadline);
        if (!line) return std::nullopt;
        EngineMessage m;
        try {
            m = decode_message(*line);
        } catch (const ProtocolError& e) {
            throw EngineError(std::string("protocol error: ") + e.what());
        }
        const auto* response = std::get_if<EngineResponse>(&m);
        if (!response) throw EngineError("unexpected non-response message from engine");
        if (response->id < id) continue;  // late answer to a request that timed out
        if (response->id != id) throw EngineError("response id " + std::to_string(response->id) +
                                                  " does not match request " + std::to_string(id));
        return *response;
    }
}

std::string ExternalEngine::do_enter(std::string_view theorem_text) {
    const auto response =
        round_trip({next_request_id_++, Command::Enter, std::string(theorem_text), 0, {}}, options_.request_timeout);
    if (!response) throw EngineError("enter timed out");
    if (!response->ok) throw EngineError("enter failed: " + response->error);
    if (response->result != ResultKind::State) throw EngineError("enter did not return a state");
    remote_ids_.push_back(response->state_id);
    return response->pretty;
}

StepResult ExternalEngine::do_apply(std::int64_t state_id, std::string_view tactic) {
    const auto response = round_trip(
        {next_request_id_++, Command::Apply, {}, remote_ids_[static_cast<std::size_t>(state_id)], std::string(tactic)},
        options_.request_timeout);
    if (!response) return {StepKind::Failure, -1, {}, "timeout"};
    if (!response->ok) return {StepKind::Failure, -1, {}, response->error};
    if (response->result == ResultKind::ProofFinished) return {StepKind::ProofFinished, -1, {}, {}};
    if (response->result != ResultKind::State) throw EngineError("apply response without a result");
    remote_ids_.push_back(response->state_id);
    return {StepKind::State, -1, response->pretty, {}};
}

// ---------------------------------------------------------------------------
// Serving

int serve_engine(std::istream& in, std::ostream& out, ProofEngine& engine, const ServeOptions& options) {
    out << encode_message(EngineHandshake{options.engine_name}) << std::flush;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EngineMessage m;
        try {
            m = decode_message(line);
        } catch (const ProtocolError& e) {
            std::cerr << "serve: " << e.what() << '\n';
            return 2;
        }
        const auto* request = std::get_if<EngineRequest>(&m);
        if (!request) {
            std::cerr << "serve: expected a request\n";
            return 2;
        }
        EngineResponse response;
        response.id = request->id;
        switch (request->cmd) {
            case Command::Enter:
                try {
                    const EnteredState s = engine.enter(request->theorem);
                    response.ok = true;
                    response.result = ResultKind::State;
                    response.state_id = s.state_id;
                    response.pretty = s.pretty;
                } catch (const EngineError& e) {
                    response.error = e.what();
                }
                break;
            case Command::Apply: {
                if (!options.hang_on.empty() && request->tactic.find(options.hang_on) != std::string::npos)
                    continue;
                if (!options.fail_on.empty() && request->tactic.find(options.fail_on) != std::string::npos) {
                    response.error = "injected failure";
                    break;
                }
                if (!options.slow_on.empty() && request->tactic.find(options.slow_on) != std::string::npos)
                    std::this_thread::sleep_for(options.slow_delay);
                try {
                    const StepResult r = engine.apply(request->state_id, request->tactic);
                    switch (r.kind) {
                        case StepKind::State:
                            response.ok = true;
                            response.result = ResultKind::State;
                            response.state_id = r.state_id;
                            response.pretty = r.pretty;
                            break;
                        case StepKind::ProofFinished:
                            response.ok = true;
                            response.result = ResultKind::ProofFinished;
                            break;
                        case StepKind::Failure:
                            response.error = r.error;
                            break;
                    }
                } catch (const EngineError& e) {
                    response.error = e.what();
                }
                break;
            }
            case Command::Close:
                response.ok = true;
                out << encode_message(response) << std::flush;
                return 0;
        }
        out << encode_message(response) << std::flush;
    }
    return 0;
}

}  // namespace navigator
