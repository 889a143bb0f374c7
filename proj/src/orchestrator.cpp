#include "navigator/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "navigator/pool.hpp"
#include "navigator/text.hpp"

namespace navigator {

namespace fs = std::filesystem;

std::size_t RunConfig::default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

void RunConfig::validate() const {
    if (workers == 0) throw UsageError("--workers must be at least 1");
    if (explore.max_transitions < 0) throw UsageError("--max-transitions must not be negative");
    if (!(explore.max_seconds >= 0)) throw UsageError("--max-seconds must not be negative");
    if (explore.k_neighbors == 0 || search.k_neighbors == 0) throw UsageError("--k must be positive");
    if (explore.instantiation_cap == 0 || search.instantiation_cap == 0) throw UsageError("--cap must be positive");
    if (!(search.max_seconds >= 0)) throw UsageError("--budget-seconds must not be negative");
    if (search.tries_per_state == 0) throw UsageError("--tries-per-state must be positive");
    const fs::path* paths[] = {&theory_path, &theorems_path, &templates_path, &index_path, &out_path};
    for (std::size_t i = 0; i < std::size(paths); ++i)
        for (std::size_t j = i + 1; j < std::size(paths); ++j)
            if (!paths[i]->empty() && *paths[i] == *paths[j])
                throw UsageError("the same path is given for two roles: " + paths[i]->string());
    if (engine == EngineKind::External && engine_command.empty()) throw UsageError("external engine without a command");
}

void resolve_engine(RunConfig& config, const std::optional<std::string>& engine_flag,
                    const std::optional<std::string>& command_flag) {
    if (engine_flag && *engine_flag != "builtin" && *engine_flag != "external")
        throw UsageError("--engine must be 'builtin' or 'external'");
    if (engine_flag && *engine_flag == "builtin") {
        if (command_flag) throw UsageError("--engine builtin conflicts with --engine-cmd");
        config.engine = EngineKind::Builtin;
        return;
    }
    if (command_flag) {
        config.engine = EngineKind::External;
        config.engine_command = *command_flag;
        return;
    }
    if (engine_flag && *engine_flag == "external") {
        const char* env = std::getenv(kEngineCommandEnv);
        if (!env || !*env)
            throw UsageError(std::string("--engine external needs --engine-cmd or ") + kEngineCommandEnv);
        config.engine = EngineKind::External;
        config.engine_command = env;
        return;
    }
    config.engine = EngineKind::Builtin;
}

std::shared_ptr<const Theory> load_run_theory(const RunConfig& config) {
    if (config.theory_path.empty()) return std::make_shared<const Theory>(group_theory());
    try {
        return std::make_shared<const Theory>(load_theory(config.theory_path));
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

EngineFactory make_engine_factory(const RunConfig& config, std::shared_ptr<const Theory> theory) {
    if (config.engine == EngineKind::External) {
        ExternalEngineOptions options;
        options.command = config.engine_command;
        options.request_timeout = config.request_timeout;
        return [options]() -> std::unique_ptr<ProofEngine> { return std::make_unique<ExternalEngine>(options); };
    }
    return [theory]() -> std::unique_ptr<ProofEngine> { return std::make_unique<BuiltinEngine>(theory); };
}

void write_file_atomically(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::vector<std::string> load_theorems(const fs::path& path) {
    if (path.empty()) throw UsageError("--theorems is required");
    try {
        return read_theorem_file(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

TemplateIndex load_index(const fs::path& path) {
    if (path.empty()) throw UsageError("--index is required");
    try {
        return TemplateIndex::load(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

std::string sanitize(std::string_view name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        out += (std::isalnum(u) || c == '_' || c == '-' || c == '.' || u >= 0x80) ? c : '_';
    }
    return out.empty() ? "theorem" : out;
}

}  // namespace

// ---------------------------------------------------------------------------
// templatize / index

TemplatizeSummary cmd_templatize(const fs::path& corpus_path, const fs::path& out_path, const Theory& theory,
                                 std::ostream& log) {
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) throw InputError("cannot open proof corpus " + corpus_path.string());
    const TemplateVocabulary vocab = TemplateVocabulary::from_theory(theory);
    TemplatizeSummary summary;
    std::vector<CorpusPair> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            CorpusPair p{j.at("state").get<std::string>(), j.at("tactic").get<std::string>()};
            if (text::trim(p.tactic).empty()) throw std::invalid_argument("empty tactic");
            pairs.push_back(std::move(p));
        } catch (const std::exception& e) {
            ++summary.warnings;
            log << "warning: " << corpus_path.string() << ":" << lineno << ": skipped: " << e.what() << '\n';
        }
    }
    summary.pairs = pairs.size();
    const auto templates = build_template_corpus(pairs, vocab);
    summary.templates = templates.size();
    fs::path tmp = out_path;
    tmp += ".tmp";
    write_template_corpus(tmp, templates);
    fs::rename(tmp, out_path);
    return summary;
}

IndexSummary cmd_index(const fs::path& templates_path, const fs::path& out_path,
                       const std::optional<fs::path>& embeddings_path) {
    std::vector<TacticTemplate> templates;
    std::optional<EmbeddingTable> table;
    try {
        templates = read_template_corpus(templates_path);
        if (embeddings_path) table = read_embedding_table(*embeddings_path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    TemplateIndex index;
    try {
        index = TemplateIndex::build(std::move(templates), table ? &*table : nullptr);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    fs::path tmp = out_path;
    tmp += ".tmp";
    index.save(tmp);
    fs::rename(tmp, out_path);
    return {index.size(), index.dim()};
}

// ---------------------------------------------------------------------------
// explore

std::size_t ExploreSummary::failed() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const TheoremRun& r) { return !r.error.empty(); }));
}

double ExploreSummary::average_states() const {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : runs) {
        if (!r.error.empty()) continue;
        sum += static_cast<double>(r.stats.distinct_states);
        ++n;
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

std::string graph_file_name(std::size_t index, std::string_view name) {
    char digits[24];
    std::snprintf(digits, sizeof digits, "%04zu", index);
    return std::string(digits) + "_" + sanitize(name) + ".graph.jsonl";
}

ExploreSummary cmd_explore(const RunConfig& config, std::ostream& log) {
    config.validate();
    if (config.out_path.empty()) throw UsageError("--out is required");
    const auto theory = load_run_theory(config);
    const TemplateIndex index = load_index(config.index_path);
    const auto theorems = load_theorems(config.theorems_path);
    const EngineFactory factory = make_engine_factory(config, theory);
    fs::create_directories(config.out_path);

    ExploreSummary summary;
    summary.runs.resize(theorems.size());
    std::mutex log_mu;
    run_pool(theorems.size(), config.workers, [&](std::size_t i) {
        TheoremRun& run = summary.runs[i];
        run.name = theorem_name(theorems[i]);
        if (run.name.empty()) run.name = "theorem" + std::to_string(i);
        run.graph_file = config.out_path / graph_file_name(i, run.name);
        try {
            auto engine = factory();
            const auto start = std::chrono::steady_clock::now();
            const StateGraph graph = explore(theorems[i], run.name, *engine, index, config.explore);
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            engine->close();
            run.stats = graph_stats(graph, elapsed);
            run.truncated = graph.truncated;
            std::ostringstream out;
            write_graph(out, graph);
            write_file_atomically(run.graph_file, out.str());
        } catch (const std::exception& e) {
            run.error = e.what();
            std::lock_guard lock(log_mu);
            log << "error: " << run.name << ": " << e.what() << '\n';
        }
    });
    return summary;
}

// ---------------------------------------------------------------------------
// extract

ExtractSummary cmd_extract(const fs::path& graph_dir, std::size_t max_depth, const fs::path& out_path,
                           std::ostream& log) {
    if (!fs::is_directory(graph_dir)) throw InputError("not a directory: " + graph_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(graph_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 12 && name.ends_with(".graph.jsonl")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    ExtractSummary summary;
    std::vector<TheoremRecord> all;
    for (const auto& f : files) {
        StateGraph graph;
        try {
            graph = read_graph_file(f);
        } catch (const std::exception& e) {
            ++summary.skipped;
            log << "warning: skipped " << e.what() << '\n';
            continue;
        }
        ++summary.graphs;
        auto records = extract_dataset(graph, max_depth, graph.source());
        summary.per_graph.push_back(records.size());
        std::move(records.begin(), records.end(), std::back_inserter(all));
    }
    all = dedupe_by_state(std::move(all));
    summary.records = all.size();
    std::ostringstream out;
    write_dataset(out, all);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_file_atomically(out_path, out.str());
    return summary;
}

// ---------------------------------------------------------------------------
// prove / bench / compare

SearchOutcome cmd_prove(const RunConfig& config, std::string_view theorem_text) {
    config.validate();
    const auto theory = load_run_theory(config);
    const TemplateIndex index = load_index(config.index_path);
    auto engine = make_engine_factory(config, theory)();
    SearchOutcome outcome = prove(theorem_text, *engine, index, config.search);
    engine->close();
    return outcome;
}

BenchReport cmd_bench(const RunConfig& config) {
    config.validate();
    const auto theory = load_run_theory(config);
    const TemplateIndex index = load_index(config.index_path);
    const auto theorems = load_theorems(config.theorems_path);
    return bench(theorems, make_engine_factory(config, theory), index, config.search, config.workers);
}

CompareReport cmd_compare(const RunConfig& config, const CompareOptions& options) {
    config.validate();
    const auto theory = load_run_theory(config);
    const TemplateIndex index = load_index(config.index_path);
    const auto theorems = load_theorems(config.theorems_path);
    return compare(theorems, make_engine_factory(config, theory), index, options);
}

}  // namespace navigator
