#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "navigator/explorer.hpp"
#include "navigator/extraction.hpp"

namespace navigator {

enum class TriesMode {
    /// Up to tries_per_state valid new successors per expansion; failed
    /// attempts are not counted.
    Valid,
    /// At most tries_per_state apply attempts per expansion.
    Attempts,
};

struct SearchBudget {
    double max_seconds = 120.0;
    std::size_t tries_per_state = 10;
    std::size_t k_neighbors = 100;
    std::size_t instantiation_cap = 200;
    TriesMode mode = TriesMode::Valid;
    /// Total apply attempts; 0 for no limit. The deterministic budget.
    std::int64_t max_transitions = 0;
    /// Longest tactic path explored; 0 for no limit. Without a limit the
    /// search can descend forever in graphs where terms keep growing.
    std::size_t max_depth = 8;
};

struct SearchOutcome {
    bool proved = false;
    ProofPath proof;
    /// For failures: "timeout", "transition budget", "exhausted" or the
    /// engine error.
    std::string reason;
    std::int64_t attempts = 0;
    std::size_t expanded = 0;
    double seconds = 0.0;
};

/// Depth-first search with backtracking. Expanding a state attempts its
/// candidates in generator order until the tries limit is met, collecting
/// successors not seen before anywhere in this search; ProofFinished ends the
/// search at once. The search descends into the first successor and tries
/// the rest in discovery order when that subtree fails. The clock is checked
/// before every apply.
SearchOutcome prove(std::string_view theorem_text, ProofEngine& engine, CandidateGenerator& generator,
                    const SearchBudget& budget);
SearchOutcome prove(std::string_view theorem_text, ProofEngine& engine, const TemplateIndex& index,
                    const SearchBudget& budget);

/// Theorem blocks separated by blank lines.
std::vector<std::string> read_theorem_file(const std::filesystem::path& path);
std::vector<std::string> split_theorem_blocks(std::string_view text);

/// The word after the `theorem`/`lemma`/`example` keyword; empty if absent.
std::string theorem_name(std::string_view theorem_text);

struct BenchEntry {
    std::string name;
    std::string theorem_text;
    SearchOutcome outcome;
};

struct BenchReport {
    std::vector<BenchEntry> entries;
    double wall_seconds = 0.0;

    std::size_t proved() const;
    std::size_t total() const { return entries.size(); }
    /// `proved/total`
    std::string summary() const;
};

/// One prove run per theorem with a fresh engine from `factory`, spread over
/// `workers` threads. Entries keep the input order.
BenchReport bench(const std::vector<std::string>& theorems, const EngineFactory& factory, const TemplateIndex& index,
                  const SearchBudget& budget, std::size_t workers = 1);

/// One line per theorem, then the summary line.
void write_bench_report(std::ostream& out, const BenchReport& report);

}  // namespace navigator
