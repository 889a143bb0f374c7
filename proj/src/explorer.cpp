#include "navigator/explorer.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>

#include <json.hpp>

#include "navigator/text.hpp"

namespace navigator {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// StateGraph

std::pair<NodeId, bool> StateGraph::intern(const std::string& pretty, std::size_t depth) {
    const auto [it, inserted] = by_key_.try_emplace(pretty, static_cast<NodeId>(nodes_.size()));
    if (inserted) nodes_.push_back({it->second, pretty, depth, {}});
    return {it->second, inserted};
}

std::optional<NodeId> StateGraph::find(std::string_view pretty) const {
    const auto it = by_key_.find(std::string(pretty));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

void StateGraph::add_edge(NodeId src, std::string tactic, NodeId dst) {
    if (src < 0 || static_cast<std::size_t>(src) >= nodes_.size()) throw std::out_of_range("edge source out of range");
    if (dst != kProofFinished) {
        if (dst < 0 || static_cast<std::size_t>(dst) >= nodes_.size())
            throw std::out_of_range("edge target out of range");
        nodes_[static_cast<std::size_t>(dst)].parents.push_back({src, tactic, node(src).depth + 1});
    }
    edges_.push_back({src, std::move(tactic), dst});
}

ExploreStats graph_stats(const StateGraph& graph, double elapsed_seconds) {
    ExploreStats s;
    s.transitions_attempted = graph.transitions_attempted;
    s.transitions_succeeded = graph.transitions_succeeded;
    s.distinct_states = graph.size();
    for (const auto& e : graph.edges())
        if (e.dst == kProofFinished) ++s.proof_finished_hits;
    s.elapsed_seconds = elapsed_seconds;
    s.states_per_minute = elapsed_seconds > 0 ? static_cast<double>(s.distinct_states) / (elapsed_seconds / 60.0) : 0.0;
    return s;
}

// ---------------------------------------------------------------------------
// Candidate generation

void RetrievalGenerator::begin(const std::string& pretty) {
    context_ = context_from_pretty(pretty);
    hits_ = index_.empty() ? std::vector<SearchHit>{} : index_.query(pretty, k_);
    hit_pos_ = 0;
    pending_.clear();
    pending_pos_ = 0;
}

std::optional<std::string> RetrievalGenerator::next() {
    while (pending_pos_ >= pending_.size()) {
        if (hit_pos_ >= hits_.size()) return std::nullopt;
        pending_ = instantiate(index_.entry(hits_[hit_pos_++].entry), context_, cap_);
        pending_pos_ = 0;
    }
    return std::move(pending_[pending_pos_++]);
}

// ---------------------------------------------------------------------------
// Exploration

StateGraph explore(std::string_view theorem_text, std::string source, ProofEngine& engine,
                   CandidateGenerator& generator, const ExploreBudget& budget) {
    StateGraph graph(std::move(source), std::string(theorem_text));
    const EnteredState initial = engine.enter(theorem_text);
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget.max_seconds));
    graph.intern(initial.pretty, 0);
    std::vector<std::int64_t> engine_ids{initial.state_id};

    using Entry = std::pair<std::int64_t, NodeId>;  // (priority, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    frontier.push({0, 0});
    std::int64_t next_priority = 1;

    while (!frontier.empty()) {
        const NodeId current = frontier.top().second;
        frontier.pop();
        if (graph.transitions_attempted >= budget.max_transitions || Clock::now() >= deadline) break;

        // Copy: interning may reallocate the node table.
        const std::string current_pretty = graph.node(current).pretty;
        generator.begin(current_pretty);
        while (auto tactic = generator.next()) {
            if (graph.transitions_attempted >= budget.max_transitions || Clock::now() >= deadline) return graph;
            ++graph.transitions_attempted;
            StepResult r;
            try {
                r = engine.apply(engine_ids[static_cast<std::size_t>(current)], *tactic);
            } catch (const EngineError&) {
                graph.truncated = true;
                return graph;
            }
            if (r.kind == StepKind::Failure) continue;
            ++graph.transitions_succeeded;
            if (r.kind == StepKind::ProofFinished) {
                graph.add_edge(current, std::move(*tactic), kProofFinished);
                continue;
            }
            if (r.pretty == current_pretty) continue;  // self-loop
            const auto [id, fresh] = graph.intern(r.pretty, graph.node(current).depth + 1);
            if (fresh) {
                engine_ids.push_back(r.state_id);
                frontier.push({next_priority++, id});
            }
            graph.add_edge(current, std::move(*tactic), id);
            if (budget.max_states != 0 && graph.size() >= budget.max_states) return graph;
        }
    }
    return graph;
}

StateGraph explore(std::string_view theorem_text, std::string source, ProofEngine& engine,
                   const TemplateIndex& index, const ExploreBudget& budget) {
    RetrievalGenerator generator(index, budget.k_neighbors, budget.instantiation_cap);
    return explore(theorem_text, std::move(source), engine, generator, budget);
}

// ---------------------------------------------------------------------------
// Snapshot files

void write_graph(std::ostream& out, const StateGraph& graph) {
    nlohmann::ordered_json header;
    header["graph"] = graph.source();
    header["theorem"] = graph.theorem();
    header["attempted"] = graph.transitions_attempted;
    header["succeeded"] = graph.transitions_succeeded;
    header["truncated"] = graph.truncated;
    out << header.dump() << '\n';
    for (const auto& n : graph.nodes()) {
        nlohmann::ordered_json j;
        j["node"] = n.id;
        j["state"] = n.pretty;
        j["idx"] = n.id;
        out << j.dump() << '\n';
    }
    for (const auto& e : graph.edges()) {
        nlohmann::ordered_json j;
        j["src"] = e.src;
        j["tactic"] = e.tactic;
        if (e.dst == kProofFinished) j["dst"] = "PF";
        else j["dst"] = e.dst;
        out << j.dump() << '\n';
    }
}

void write_graph_file(const std::filesystem::path& path, const StateGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph " + path.string());
    write_graph(out, graph);
    if (!out) throw std::runtime_error("failed writing graph " + path.string());
}

StateGraph read_graph(std::istream& in) {
    StateGraph graph;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<bool> depth_known;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (text::trim(line).empty()) continue;
            const auto j = nlohmann::json::parse(line);
            if (j.contains("graph")) {
                if (have_header) throw std::runtime_error("second header line");
                graph = StateGraph(j.at("graph").get<std::string>(), j.value("theorem", std::string{}));
                graph.transitions_attempted = j.value("attempted", std::int64_t{0});
                graph.transitions_succeeded = j.value("succeeded", std::int64_t{0});
                graph.truncated = j.value("truncated", false);
                have_header = true;
            } else if (j.contains("node")) {
                const NodeId id = j.at("node").get<NodeId>();
                if (id != static_cast<NodeId>(graph.size())) throw std::runtime_error("node ids out of order");
                const auto [got, fresh] = graph.intern(j.at("state").get<std::string>(), 0);
                if (!fresh) throw std::runtime_error("duplicate state");
                depth_known.push_back(got == 0);
            } else if (j.contains("src")) {
                const NodeId src = j.at("src").get<NodeId>();
                const auto& dst_json = j.at("dst");
                NodeId dst;
                if (dst_json.is_string()) {
                    if (dst_json.get<std::string>() != "PF") throw std::runtime_error("bad edge target");
                    dst = kProofFinished;
                } else {
                    dst = dst_json.get<NodeId>();
                }
                if (dst != kProofFinished && dst >= 0 && static_cast<std::size_t>(dst) < graph.size() &&
                    src >= 0 && static_cast<std::size_t>(src) < graph.size() &&
                    !depth_known[static_cast<std::size_t>(dst)]) {
                    // Discovery depth: the first edge into a node is the one
                    // that created it.
                    const std::size_t d = graph.node(src).depth + 1;
                    const_cast<GraphNode&>(graph.node(dst)).depth = d;
                    depth_known[static_cast<std::size_t>(dst)] = true;
                }
                graph.add_edge(src, j.at("tactic").get<std::string>(), dst);
            } else {
                throw std::runtime_error("unrecognized record");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::out_of_range& e) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_header) throw std::runtime_error("graph file has no header line");
    if (graph.size() == 0) throw std::runtime_error("graph file has no nodes");
    return graph;
}

StateGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph " + path.string());
    try {
        return read_graph(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace navigator
