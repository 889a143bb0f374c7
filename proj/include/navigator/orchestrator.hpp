#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "navigator/explorer.hpp"
#include "navigator/extraction.hpp"
#include "navigator/search.hpp"
#include "navigator/throughput.hpp"

namespace navigator {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitPartial = 3 };

/// Bad flags or flag combinations.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Missing or unreadable input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EngineKind { Builtin, External };

struct RunConfig {
    /// Empty for the bundled group theory.
    std::filesystem::path theory_path;
    std::filesystem::path theorems_path;
    std::filesystem::path templates_path;
    std::filesystem::path index_path;
    std::filesystem::path out_path;
    std::size_t workers = default_workers();
    ExploreBudget explore;
    SearchBudget search;
    std::size_t max_depth = 8;
    EngineKind engine = EngineKind::Builtin;
    std::string engine_command;
    std::chrono::milliseconds request_timeout{10000};

    static std::size_t default_workers();
    /// Throws UsageError on W = 0, non-positive budgets or clashing paths.
    void validate() const;
};

/// Resolves `--engine` and `--engine-cmd`: an explicit `builtin` with a
/// command is a usage error; a command alone selects the external engine;
/// `external` without a command falls back to NAVIGATOR_ENGINE_CMD.
void resolve_engine(RunConfig& config, const std::optional<std::string>& engine_flag,
                    const std::optional<std::string>& command_flag);

std::shared_ptr<const Theory> load_run_theory(const RunConfig& config);
EngineFactory make_engine_factory(const RunConfig& config, std::shared_ptr<const Theory> theory);

struct TemplatizeSummary {
    std::size_t pairs = 0;
    std::size_t templates = 0;
    std::size_t warnings = 0;
};

/// Reads `{"state":…,"tactic":…}` lines, skipping malformed ones with a
/// warning on `log`, and writes the deduplicated template corpus.
TemplatizeSummary cmd_templatize(const std::filesystem::path& corpus_path, const std::filesystem::path& out_path,
                                 const Theory& theory, std::ostream& log);

struct IndexSummary {
    std::size_t entries = 0;
    std::size_t dim = 0;
};

/// Builds and saves the index over a template corpus, with vectors from
/// `embeddings_path` when given.
IndexSummary cmd_index(const std::filesystem::path& templates_path, const std::filesystem::path& out_path,
                       const std::optional<std::filesystem::path>& embeddings_path = std::nullopt);

struct TheoremRun {
    std::string name;
    std::filesystem::path graph_file;
    ExploreStats stats;
    bool truncated = false;
    std::string error;  // non-empty when the theorem failed
};

struct ExploreSummary {
    std::vector<TheoremRun> runs;  // input order
    std::size_t failed() const;
    double average_states() const;
};

/// `<NNNN>_<name>.graph.jsonl` for theorem `index`.
std::string graph_file_name(std::size_t index, std::string_view name);

/// Explores every theorem in config.theorems_path on config.workers threads
/// and writes one graph file per theorem into config.out_path. Each file is
/// written under a temporary name and renamed when complete.
ExploreSummary cmd_explore(const RunConfig& config, std::ostream& log);

struct ExtractSummary {
    std::size_t graphs = 0;
    std::size_t skipped = 0;
    std::vector<std::size_t> per_graph;  // records per graph, before dedupe
    std::size_t records = 0;             // written
};

/// Extracts every `*.graph.jsonl` in `graph_dir` in file-name order,
/// drops repeated states and writes the dataset. Corrupt graph files are
/// skipped with a warning.
ExtractSummary cmd_extract(const std::filesystem::path& graph_dir, std::size_t max_depth,
                           const std::filesystem::path& out_path, std::ostream& log);

SearchOutcome cmd_prove(const RunConfig& config, std::string_view theorem_text);
BenchReport cmd_bench(const RunConfig& config);
CompareReport cmd_compare(const RunConfig& config, const CompareOptions& options);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace navigator
