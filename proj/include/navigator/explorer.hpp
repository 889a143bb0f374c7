#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "navigator/embedding.hpp"
#include "navigator/engine.hpp"

namespace navigator {

using NodeId = std::int64_t;
inline constexpr NodeId kProofFinished = -1;

struct ParentLink {
    NodeId parent;
    std::string tactic;
    /// Length of the tactic prefix from the initial state through `parent`.
    std::size_t prefix_length;
};

struct GraphNode {
    NodeId id;
    std::string pretty;
    /// Tactics on the discovery path from the initial state.
    std::size_t depth = 0;
    std::vector<ParentLink> parents;
};

struct GraphEdge {
    NodeId src;
    std::string tactic;
    NodeId dst;  // kProofFinished for the sink

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// States deduplicated by pretty text, tactic-labelled edges, one shared
/// ProofFinished sink. Node ids are insertion indexes; node 0 is the
/// initial state.
class StateGraph {
public:
    StateGraph() = default;
    StateGraph(std::string source, std::string theorem) : source_(std::move(source)), theorem_(std::move(theorem)) {}

    /// Returns the id of the node for `pretty`, adding it if new.
    std::pair<NodeId, bool> intern(const std::string& pretty, std::size_t depth);
    std::optional<NodeId> find(std::string_view pretty) const;
    void add_edge(NodeId src, std::string tactic, NodeId dst);

    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const GraphNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    std::size_t size() const { return nodes_.size(); }

    const std::string& source() const { return source_; }
    const std::string& theorem() const { return theorem_; }

    std::int64_t transitions_attempted = 0;
    std::int64_t transitions_succeeded = 0;
    /// Set when exploration stopped on an engine failure.
    bool truncated = false;

private:
    std::string source_;
    std::string theorem_;
    std::vector<GraphNode> nodes_;
    std::vector<GraphEdge> edges_;
    std::unordered_map<std::string, NodeId> by_key_;
};

struct ExploreBudget {
    std::int64_t max_transitions = 200000;
    double max_seconds = 1800.0;
    std::size_t k_neighbors = 100;
    std::size_t instantiation_cap = 200;
    /// Stop once the graph holds this many states; 0 for no limit. A memory
    /// guard for long time-only runs.
    std::size_t max_states = 0;
};

struct ExploreStats {
    std::int64_t transitions_attempted = 0;
    std::int64_t transitions_succeeded = 0;
    std::size_t distinct_states = 0;
    std::size_t proof_finished_hits = 0;
    double elapsed_seconds = 0.0;
    double states_per_minute = 0.0;
};

ExploreStats graph_stats(const StateGraph& graph, double elapsed_seconds);

/// Produces candidate tactics for one state at a time, lazily so that time
/// budgets cut generation off mid-stream.
class CandidateGenerator {
public:
    virtual ~CandidateGenerator() = default;
    virtual void begin(const std::string& pretty) = 0;
    virtual std::optional<std::string> next() = 0;
};

/// Embeds the state, takes the k nearest templates and instantiates each
/// in rank order.
class RetrievalGenerator final : public CandidateGenerator {
public:
    RetrievalGenerator(const TemplateIndex& index, std::size_t k_neighbors, std::size_t instantiation_cap)
        : index_(index), k_(k_neighbors), cap_(instantiation_cap) {}

    void begin(const std::string& pretty) override;
    std::optional<std::string> next() override;

private:
    const TemplateIndex& index_;
    std::size_t k_;
    std::size_t cap_;
    StateContext context_;
    std::vector<SearchHit> hits_;
    std::size_t hit_pos_ = 0;
    std::vector<std::string> pending_;
    std::size_t pending_pos_ = 0;
};

/// Breadth-first exploration of a theorem's state graph: a FIFO frontier
/// (a priority queue keyed by a monotone insertion counter), candidate
/// tactics per dequeued state, failures skipped, new states enqueued once,
/// ProofFinished recorded as an edge to the sink. Every apply attempt counts
/// as one transition. Self-loops are discarded. Stops when the frontier
/// empties or a budget is reached; the clock is checked before every apply.
///
/// Throws EngineError if the theorem cannot be entered. An engine failure
/// later on returns the graph so far with `truncated` set.
StateGraph explore(std::string_view theorem_text, std::string source, ProofEngine& engine,
                   CandidateGenerator& generator, const ExploreBudget& budget);

StateGraph explore(std::string_view theorem_text, std::string source, ProofEngine& engine,
                   const TemplateIndex& index, const ExploreBudget& budget);

/// Line-delimited snapshot: a header line
/// `{"graph":"…","theorem":"…","attempted":N,"succeeded":M,"truncated":false}`,
/// node lines `{"node":0,"state":"…","idx":0}` and edge lines
/// `{"src":0,"tactic":"…","dst":5}` (`"dst":"PF"` for the sink).
void write_graph(std::ostream& out, const StateGraph& graph);
void write_graph_file(const std::filesystem::path& path, const StateGraph& graph);
/// Throws std::runtime_error on malformed content.
StateGraph read_graph(std::istream& in);
StateGraph read_graph_file(const std::filesystem::path& path);

}  // namespace navigator
