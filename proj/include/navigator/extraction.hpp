#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navigator/explorer.hpp"
#include "navigator/state.hpp"

namespace navigator {

struct ProofPath {
    std::vector<std::string> tactics;

    std::size_t length() const { return tactics.size(); }
    /// Sum of tactic lengths in code points.
    std::size_t total_chars() const;

    friend bool operator==(const ProofPath&, const ProofPath&) = default;
};

/// The order used to pick among proofs: fewer tactics, then fewer total
/// characters, then the tactic sequence compared lexicographically.
bool proof_less(const ProofPath& a, const ProofPath& b);

/// Edge-count distance to the ProofFinished sink, indexed by node id;
/// nullopt for nodes that cannot reach it.
using DistanceMap = std::vector<std::optional<std::size_t>>;

/// Reverse breadth-first search from the sink.
DistanceMap distances_to_proof(const StateGraph& graph);

/// The least proof of `node` under proof_less. Throws std::invalid_argument
/// if the node is not provable.
ProofPath shortest_proof(const StateGraph& graph, NodeId node);

/// Least proofs of every node within `max_depth` of the sink, indexed by
/// node id (nullopt elsewhere).
std::vector<std::optional<ProofPath>> shortest_proofs(const StateGraph& graph, const DistanceMap& distances,
                                                      std::size_t max_depth);

/// `theorem <name> (<vars> : <sort>) (<h> : <lhs> = <rhs>)… : <goal> := by`
std::string render_theorem(const ProofState& state, std::string_view name, const Signature& sig);

/// The same header built from pretty text in the usual layout (`names : T`
/// lines, then a `⊢` line). nullopt when the text does not follow it.
std::optional<std::string> render_theorem_text(std::string_view pretty, std::string_view name);

/// The header followed by the tactics, one per indented line.
std::string render_proof_block(std::string_view header, const ProofPath& proof);

struct TheoremRecord {
    std::string id;
    std::string theorem_text;
    ProofPath proof;
    std::string source;
    std::size_t depth = 0;
    std::string state_pretty;
    /// The state could not be rendered as a header; theorem_text carries the
    /// pretty text as-is.
    bool raw = false;

    friend bool operator==(const TheoremRecord&, const TheoremRecord&) = default;
};

/// `<source>_<index>` with the index zero-padded to four digits.
std::string record_id(std::string_view source, NodeId node);

/// One record per node within `max_depth` of the sink, in node order.
std::vector<TheoremRecord> extract_dataset(const StateGraph& graph, std::size_t max_depth, std::string_view source);

/// Drops records whose state text already appeared earlier in the list.
std::vector<TheoremRecord> dedupe_by_state(std::vector<TheoremRecord> records);

/// `{"id":…,"theorem":…,"proof":[…],"source":…,"depth":…,"state":…}`,
/// plus `"raw":true` for raw records.
std::string encode_record(const TheoremRecord& record);
TheoremRecord decode_record(std::string_view line);
void write_dataset(std::ostream& out, const std::vector<TheoremRecord>& records);
std::vector<TheoremRecord> read_dataset_file(const std::filesystem::path& path);

struct ReplayOutcome {
    bool finished = false;
    /// Tactics applied, including the one that finished the proof.
    std::size_t steps = 0;
    std::string error;
};

/// Enters `theorem_text` and applies the tactics in order. Finishing early
/// stops the replay with the remaining tactics unapplied.
ReplayOutcome replay_proof(ProofEngine& engine, std::string_view theorem_text,
                           const std::vector<std::string>& tactics);

}  // namespace navigator
