#include "navigator/extraction.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "navigator/text.hpp"
#include "navigator/utf8.hpp"

namespace navigator {

std::size_t ProofPath::total_chars() const {
    std::size_t n = 0;
    for (const auto& t : tactics) n += utf8::length(t);
    return n;
}

bool proof_less(const ProofPath& a, const ProofPath& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    const std::size_t ca = a.total_chars(), cb = b.total_chars();
    if (ca != cb) return ca < cb;
    return a.tactics < b.tactics;
}

DistanceMap distances_to_proof(const StateGraph& graph) {
    DistanceMap dist(graph.size());
    std::vector<std::vector<NodeId>> reverse(graph.size());
    std::deque<NodeId> queue;
    for (const auto& e : graph.edges()) {
        if (e.dst == kProofFinished) {
            auto& d = dist[static_cast<std::size_t>(e.src)];
            if (!d) {
                d = 1;
                queue.push_back(e.src);
            }
        } else {
            reverse[static_cast<std::size_t>(e.dst)].push_back(e.src);
        }
    }
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        const std::size_t du = *dist[static_cast<std::size_t>(u)];
        for (NodeId p : reverse[static_cast<std::size_t>(u)]) {
            auto& d = dist[static_cast<std::size_t>(p)];
            if (!d) {
                d = du + 1;
                queue.push_back(p);
            }
        }
    }
    return dist;
}

namespace {

constexpr std::size_t kNoEdge = static_cast<std::size_t>(-1);

/// Per node the first edge of its least proof and that proof's character
/// count. A least proof's suffix is the least proof of the next node, so the
/// choices chain.
struct Choices {
    std::vector<std::size_t> edge;
    std::vector<std::size_t> chars;
};

/// Lexicographic comparison of the proofs starting with edges `a` and `b`.
int compare_chains(const StateGraph& graph, const Choices& ch, std::size_t a, std::size_t b) {
    while (true) {
        const auto& ea = graph.edges()[a];
        const auto& eb = graph.edges()[b];
        if (const int c = ea.tactic.compare(eb.tactic); c != 0) return c < 0 ? -1 : 1;
        if (ea.dst == kProofFinished || eb.dst == kProofFinished) return 0;  // equal lengths end together
        if (ea.dst == eb.dst) return 0;
        a = ch.edge[static_cast<std::size_t>(ea.dst)];
        b = ch.edge[static_cast<std::size_t>(eb.dst)];
    }
}

Choices choose(const StateGraph& graph, const DistanceMap& dist, std::size_t max_depth) {
    const std::size_t n = graph.size();
    Choices ch{std::vector<std::size_t>(n, kNoEdge), std::vector<std::size_t>(n, 0)};
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const auto& e = graph.edges()[i];
        out[static_cast<std::size_t>(e.src)].push_back(i);
    }
    // Nodes by increasing distance so successors are settled first.
    std::vector<NodeId> order;
    for (std::size_t v = 0; v < n; ++v)
        if (dist[v] && *dist[v] <= max_depth) order.push_back(static_cast<NodeId>(v));
    std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
        return *dist[static_cast<std::size_t>(x)] < *dist[static_cast<std::size_t>(y)];
    });
    for (NodeId v : order) {
        const std::size_t dv = *dist[static_cast<std::size_t>(v)];
        std::size_t best = kNoEdge;
        std::size_t best_chars = 0;
        for (std::size_t ei : out[static_cast<std::size_t>(v)]) {
            const auto& e = graph.edges()[ei];
            std::size_t chars = utf8::length(e.tactic);
            if (e.dst == kProofFinished) {
                if (dv != 1) continue;
            } else {
                const auto& dd = dist[static_cast<std::size_t>(e.dst)];
                if (!dd || *dd + 1 != dv) continue;
                chars += ch.chars[static_cast<std::size_t>(e.dst)];
            }
            if (best == kNoEdge || chars < best_chars ||
                (chars == best_chars && compare_chains(graph, ch, ei, best) < 0)) {
                best = ei;
                best_chars = chars;
            }
        }
        ch.edge[static_cast<std::size_t>(v)] = best;
        ch.chars[static_cast<std::size_t>(v)] = best_chars;
    }
    return ch;
}

ProofPath follow(const StateGraph& graph, const Choices& ch, NodeId v) {
    ProofPath p;
    while (v != kProofFinished) {
        const auto& e = graph.edges()[ch.edge[static_cast<std::size_t>(v)]];
        p.tactics.push_back(e.tactic);
        v = e.dst;
    }
    return p;
}

}  // namespace

ProofPath shortest_proof(const StateGraph& graph, NodeId node) {
    if (node < 0 || static_cast<std::size_t>(node) >= graph.size()) throw std::invalid_argument("no such node");
    const DistanceMap dist = distances_to_proof(graph);
    const auto& d = dist[static_cast<std::size_t>(node)];
    if (!d) throw std::invalid_argument("node " + std::to_string(node) + " is not provable");
    return follow(graph, choose(graph, dist, *d), node);
}

std::vector<std::optional<ProofPath>> shortest_proofs(const StateGraph& graph, const DistanceMap& distances,
                                                      std::size_t max_depth) {
    const Choices ch = choose(graph, distances, max_depth);
    std::vector<std::optional<ProofPath>> out(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v)
        if (ch.edge[v] != kNoEdge) out[v] = follow(graph, ch, static_cast<NodeId>(v));
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_theorem(const ProofState& state, std::string_view name, const Signature& sig) {
    std::string out = "theorem ";
    out += name;
    if (!state.variables.empty()) {
        out += " (";
        for (std::size_t i = 0; i < state.variables.size(); ++i) {
            if (i) out += ' ';
            out += state.variables[i];
        }
        out += " : " + state.sort + ")";
    }
    for (const auto& h : state.hypotheses) out += " (" + h.name + " : " + print_equation({h.lhs, h.rhs}, sig) + ")";
    out += " : " + print_equation(state.goal, sig) + " := by";
    return out;
}

std::optional<std::string> render_theorem_text(std::string_view pretty, std::string_view name) {
    std::string binders;
    std::optional<std::string_view> goal;
    for (std::string_view line : text::split_lines(pretty)) {
        line = text::trim(line);
        if (line.empty()) continue;
        if (goal) return std::nullopt;  // several goals
        if (text::starts_with(line, "⊢")) {
            goal = text::trim(line.substr(std::string_view("⊢").size()));
            continue;
        }
        const std::size_t colon = line.find(" : ");
        if (colon == std::string_view::npos || colon == 0) return std::nullopt;
        binders += " (";
        binders += line;
        binders += ')';
    }
    if (!goal || goal->empty()) return std::nullopt;
    std::string out = "theorem ";
    out += name;
    out += binders;
    out += " : ";
    out += *goal;
    out += " := by";
    return out;
}

std::string render_proof_block(std::string_view header, const ProofPath& proof) {
    std::string out(header);
    for (const auto& t : proof.tactics) {
        out += "\n  ";
        out += t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Records

std::string record_id(std::string_view source, NodeId node) {
    char digits[24];
    std::snprintf(digits, sizeof digits, "%04lld", static_cast<long long>(node));
    return std::string(source) + "_" + digits;
}

std::vector<TheoremRecord> extract_dataset(const StateGraph& graph, std::size_t max_depth, std::string_view source) {
    std::vector<TheoremRecord> out;
    if (max_depth == 0) return out;
    const DistanceMap dist = distances_to_proof(graph);
    const auto proofs = shortest_proofs(graph, dist, max_depth);
    for (std::size_t v = 0; v < graph.size(); ++v) {
        if (!proofs[v]) continue;
        TheoremRecord r;
        r.id = record_id(source, static_cast<NodeId>(v));
        r.state_pretty = graph.node(static_cast<NodeId>(v)).pretty;
        if (auto header = render_theorem_text(r.state_pretty, r.id)) {
            r.theorem_text = std::move(*header);
        } else {
            r.theorem_text = r.state_pretty;
            r.raw = true;
        }
        r.proof = *proofs[v];
        r.source = std::string(source);
        r.depth = *dist[v];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TheoremRecord> dedupe_by_state(std::vector<TheoremRecord> records) {
    std::unordered_set<std::string> seen;
    std::vector<TheoremRecord> out;
    out.reserve(records.size());
    for (auto& r : records)
        if (seen.insert(r.state_pretty).second) out.push_back(std::move(r));
    return out;
}

std::string encode_record(const TheoremRecord& record) {
    nlohmann::ordered_json j;
    j["id"] = record.id;
    j["theorem"] = record.theorem_text;
    j["proof"] = record.proof.tactics;
    j["source"] = record.source;
    j["depth"] = record.depth;
    j["state"] = record.state_pretty;
    if (record.raw) j["raw"] = true;
    return j.dump();
}

TheoremRecord decode_record(std::string_view line) {
    const auto j = nlohmann::json::parse(line);
    TheoremRecord r;
    r.id = j.at("id").get<std::string>();
    r.theorem_text = j.at("theorem").get<std::string>();
    r.proof.tactics = j.at("proof").get<std::vector<std::string>>();
    r.source = j.at("source").get<std::string>();
    r.depth = j.at("depth").get<std::size_t>();
    r.state_pretty = j.at("state").get<std::string>();
    r.raw = j.value("raw", false);
    return r;
}

void write_dataset(std::ostream& out, const std::vector<TheoremRecord>& records) {
    for (const auto& r : records) out << encode_record(r) << '\n';
}

std::vector<TheoremRecord> read_dataset_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset " + path.string());
    std::vector<TheoremRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(decode_record(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

ReplayOutcome replay_proof(ProofEngine& engine, std::string_view theorem_text, const std::vector<std::string>& tactics) {
    ReplayOutcome out;
    std::int64_t id;
    try {
        id = engine.enter(theorem_text).state_id;
    } catch (const EngineError& e) {
        out.error = e.what();
        return out;
    }
    for (const auto& t : tactics) {
        StepResult r;
        try {
            r = engine.apply(id, t);
        } catch (const EngineError& e) {
            out.error = e.what();
            return out;
        }
        ++out.steps;
        if (r.kind == StepKind::Failure) {
            out.error = "step " + std::to_string(out.steps) + " failed: " + r.error;
            return out;
        }
        if (r.kind == StepKind::ProofFinished) {
            out.finished = true;
            return out;
        }
        id = r.state_id;
    }
    out.error = "proof incomplete";
    return out;
}

}  // namespace navigator
