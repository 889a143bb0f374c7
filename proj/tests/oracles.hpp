#pragma once

// Reference implementations shared by the unit tests and the acceptance run.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "navigator/embedding.hpp"
#include "navigator/extraction.hpp"
#include "navigator/kernels.hpp"

namespace oracles {

using namespace navigator;

/// Nodes `n0…`, up to `max_out` random edges each, a fifth of them to the
/// sink; short labels so equal-length proofs tie on characters often.
inline StateGraph random_graph(std::mt19937& rng, std::size_t n, std::size_t max_out) {
    static const char* labels[] = {"a", "b", "ab", "ba", "abc", "c", "bb", "ca"};
    StateGraph g("rand", "t");
    for (std::size_t i = 0; i < n; ++i) g.intern("n" + std::to_string(i), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t out = rng() % (max_out + 1);
        for (std::size_t k = 0; k < out; ++k) {
            const NodeId dst = rng() % 5 == 0 ? kProofFinished : static_cast<NodeId>(rng() % n);
            if (dst == static_cast<NodeId>(i)) continue;
            g.add_edge(static_cast<NodeId>(i), labels[rng() % std::size(labels)], dst);
        }
    }
    return g;
}

/// Bellman-Ford with unit weights towards the sink.
inline DistanceMap bellman_ford(const StateGraph& g) {
    DistanceMap d(g.size());
    for (std::size_t round = 0; round <= g.size(); ++round)
        for (const auto& e : g.edges()) {
            std::optional<std::size_t> via;
            if (e.dst == kProofFinished) via = 1;
            else if (d[static_cast<std::size_t>(e.dst)]) via = *d[static_cast<std::size_t>(e.dst)] + 1;
            auto& cur = d[static_cast<std::size_t>(e.src)];
            if (via && (!cur || *via < *cur)) cur = via;
        }
    return d;
}

/// Every path from `v` to the sink with at most `limit` edges; the least
/// under proof_less.
inline std::optional<ProofPath> brute_force_best(const StateGraph& g, NodeId v, std::size_t limit) {
    std::optional<ProofPath> best;
    ProofPath cur;
    std::function<void(NodeId)> go = [&](NodeId u) {
        for (const auto& e : g.edges()) {
            if (e.src != u) continue;
            cur.tactics.push_back(e.tactic);
            if (e.dst == kProofFinished) {
                if (!best || proof_less(cur, *best)) best = cur;
            } else if (cur.length() < limit) {
                go(e.dst);
            }
            cur.tactics.pop_back();
        }
    };
    go(v);
    return best;
}

/// Full scan with a stable sort: the reference ranking.
inline std::vector<SearchHit> scan(const TemplateIndex& index, std::span<const float> query, std::size_t k) {
    std::vector<float> q(query.begin(), query.end());
    normalize(q);
    std::vector<SearchHit> all;
    for (std::size_t i = 0; i < index.size(); ++i)
        all.push_back({i, kernels::dot_scalar(q.data(), index.vector(i).data(), index.dim())});
    std::stable_sort(all.begin(), all.end(), [](const SearchHit& a, const SearchHit& b) { return a.similarity > b.similarity; });
    all.resize(std::min(k, all.size()));
    return all;
}

/// `rw [<rule> tN]` for N < n.
inline std::vector<TacticTemplate> synthetic_templates(std::size_t n) {
    std::vector<TacticTemplate> out;
    const char* rules[] = {"mul_comm", "mul_assoc", "one_mul", "mul_one", "mul_left_inv", "inv_inv"};
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(TacticTemplate::from_text("rw [" + std::string(rules[i % 6]) + " t" + std::to_string(i) + "]"));
    return out;
}

}  // namespace oracles
