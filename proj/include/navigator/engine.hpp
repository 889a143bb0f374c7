#pragma once

#include <chrono>
#include <deque>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "navigator/protocol.hpp"
#include "navigator/rewrite.hpp"

namespace navigator {

/// Session-fatal engine failure: bad theorem, dead or misbehaving external
/// process, unknown state id.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StepKind { State, ProofFinished, Failure };

struct StepResult {
    StepKind kind = StepKind::Failure;
    std::int64_t state_id = -1;  // State only
    std::string pretty;          // State only
    std::string error;           // Failure only
};

struct EnteredState {
    std::int64_t state_id = 0;
    std::string pretty;
};

/// A proof session over one theorem. Every distinct state the engine reports
/// gets the next integer id (0 is the initial state); a state whose pretty
/// text was seen before gets its earlier id back. The pretty text of a state
/// is its identity.
///
/// A session is confined to one thread at a time.
class ProofEngine {
public:
    virtual ~ProofEngine() = default;

    EnteredState enter(std::string_view theorem_text);
    StepResult apply(std::int64_t state_id, std::string_view tactic);
    virtual void close() {}

    virtual std::string_view backend_name() const = 0;

    const std::string& pretty(std::int64_t state_id) const;
    std::size_t state_count() const { return pretty_.size(); }

    std::int64_t apply_count() const { return apply_count_; }
    double apply_seconds() const { return apply_seconds_; }
    double mean_apply_seconds() const { return apply_count_ ? apply_seconds_ / apply_count_ : 0.0; }

protected:
    /// Returns the initial state's pretty text.
    virtual std::string do_enter(std::string_view theorem_text) = 0;
    /// `state_id` is known to be registered. For a State result only `pretty`
    /// needs to be set; the id is assigned by the caller. Implementations
    /// append their per-state data for a State result and drop it again in
    /// drop_last_state() when the state turns out to be known.
    virtual StepResult do_apply(std::int64_t state_id, std::string_view tactic) = 0;
    virtual void drop_last_state() = 0;

    bool entered() const { return !pretty_.empty(); }

private:
    std::deque<std::string> pretty_;
    std::unordered_map<std::string_view, std::int64_t> ids_;
    std::int64_t apply_count_ = 0;
    double apply_seconds_ = 0.0;
};

using EngineFactory = std::function<std::unique_ptr<ProofEngine>()>;

/// The deterministic rewrite engine.
class BuiltinEngine final : public ProofEngine {
public:
    explicit BuiltinEngine(std::shared_ptr<const Theory> theory);

    std::string_view backend_name() const override { return "builtin"; }
    const Theory& theory() const { return *theory_; }
    const ProofState& state(std::int64_t state_id) const;

protected:
    std::string do_enter(std::string_view theorem_text) override;
    StepResult do_apply(std::int64_t state_id, std::string_view tactic) override;
    void drop_last_state() override;

private:
    std::shared_ptr<const Theory> theory_;
    std::vector<ProofState> states_;
};

struct ExternalEngineOptions {
    std::string command;
    std::chrono::milliseconds request_timeout{10000};
    /// Time allowed for the ready line after spawning.
    std::chrono::milliseconds startup_timeout{30000};
};

/// Drives a child process speaking the line protocol in protocol.hpp. A
/// request that times out yields a Failure; late responses are discarded by
/// id. Pretty text from the child is used verbatim as state identity.
class ExternalEngine final : public ProofEngine {
public:
    explicit ExternalEngine(ExternalEngineOptions options);
    ~ExternalEngine() override;
    ExternalEngine(const ExternalEngine&) = delete;
    ExternalEngine& operator=(const ExternalEngine&) = delete;

    std::string_view backend_name() const override { return engine_name_; }
    void close() override;

protected:
    std::string do_enter(std::string_view theorem_text) override;
    StepResult do_apply(std::int64_t state_id, std::string_view tactic) override;
    void drop_last_state() override { remote_ids_.pop_back(); }

private:
    class Process;

    /// Sends `request` and waits for its response; nullopt on timeout.
    std::optional<EngineResponse> round_trip(EngineRequest request, std::chrono::milliseconds timeout);

    ExternalEngineOptions options_;
    std::unique_ptr<Process> process_;
    std::string engine_name_;
    std::int64_t next_request_id_ = 1;
    std::vector<std::int64_t> remote_ids_;
};

/// The environment variable naming the external engine command.
inline constexpr const char* kEngineCommandEnv = "NAVIGATOR_ENGINE_CMD";

struct ServeOptions {
    std::string engine_name = "navigator-builtin";
    /// Fault injection for protocol tests: tactics containing this text
    /// never get a response.
    std::string hang_on;
    /// Tactics containing this text get an error response.
    std::string fail_on;
    /// Tactics containing this text are answered after `slow_delay`.
    std::string slow_on;
    std::chrono::milliseconds slow_delay{0};
};

/// Serves the line protocol on the given streams, backed by `engine`.
/// Returns 0 after `close` or end of input, 2 on an undecodable line.
int serve_engine(std::istream& in, std::ostream& out, ProofEngine& engine, const ServeOptions& options = {});

}  // namespace navigator
