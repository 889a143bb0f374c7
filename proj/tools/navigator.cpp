// navigator: command-line front end for dataset generation.

#include <csignal>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "navigator/orchestrator.hpp"

using namespace navigator;

namespace {

struct EngineFlags {
    std::string engine;
    std::string command;
    CLI::Option* engine_opt = nullptr;
    CLI::Option* command_opt = nullptr;
    int timeout_ms = 10000;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
    flags.engine_opt = cmd->add_option("--engine", flags.engine, "builtin or external")
                           ->check(CLI::IsMember({"builtin", "external"}));
    flags.command_opt = cmd->add_option("--engine-cmd", flags.command, "Command starting an external engine");
    cmd->add_option("--request-timeout-ms", flags.timeout_ms, "Per-request timeout for external engines")
        ->check(CLI::PositiveNumber);
}

void apply_engine_flags(RunConfig& config, const EngineFlags& flags) {
    resolve_engine(config, flags.engine_opt->count() ? std::optional(flags.engine) : std::nullopt,
                   flags.command_opt->count() ? std::optional(flags.command) : std::nullopt);
    config.request_timeout = std::chrono::milliseconds(flags.timeout_ms);
}

void add_search_flags(CLI::App* cmd, RunConfig& config, std::string& mode) {
    cmd->add_option("--budget-seconds", config.search.max_seconds, "Wall-clock budget per theorem");
    cmd->add_option("--tries-per-state", config.search.tries_per_state, "Tries per expanded state");
    cmd->add_option("--mode", mode, "ten-valid or ten-attempts")->check(CLI::IsMember({"ten-valid", "ten-attempts"}));
    cmd->add_option("--max-transitions", config.search.max_transitions, "Apply attempts per theorem (0: no limit)");
    cmd->add_option("--max-depth", config.search.max_depth, "Longest tactic path (0: no limit)");
    cmd->add_option("--k", config.search.k_neighbors, "Templates retrieved per state");
    cmd->add_option("--cap", config.search.instantiation_cap, "Instantiations per template");
}

void print_proof(const std::string& theorem_text, const SearchOutcome& outcome) {
    std::string header = theorem_text;
    if (const auto at = header.find(":="); at != std::string::npos) header.erase(at);
    while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
    std::cout << render_proof_block(header + " := by", outcome.proof) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGPIPE, SIG_IGN);
    CLI::App app{"Theorem dataset generation by state-graph exploration"};
    app.require_subcommand(1);

    RunConfig config;
    EngineFlags explore_engine, prove_engine, bench_engine, compare_engine;
    std::string mode = "ten-valid";

    // templatize
    std::string corpus_path, out_path, theory_path, templates_path, embeddings_path;
    auto* templatize = app.add_subcommand("templatize", "Turn (state, tactic) pairs into a template corpus");
    templatize->add_option("corpus", corpus_path, "Proof corpus (JSONL of state/tactic pairs)")->required();
    templatize->add_option("--out", out_path, "Template corpus to write")->required();
    templatize->add_option("--theory", theory_path, "Theory file (default: bundled group theory)");

    // index
    auto* index = app.add_subcommand("index", "Embed a template corpus into a search index");
    index->add_option("--templates", templates_path, "Template corpus")->required();
    index->add_option("--out", out_path, "Index file to write")->required();
    index->add_option("--embeddings", embeddings_path, "External vectors (JSONL of text/vector)");

    // explore
    auto* explore_cmd = app.add_subcommand("explore", "Explore the state graph of every theorem");
    explore_cmd->add_option("--theory", config.theory_path, "Theory file (default: bundled group theory)");
    explore_cmd->add_option("--theorems", config.theorems_path, "Theorem file")->required();
    explore_cmd->add_option("--index", config.index_path, "Template index")->required();
    explore_cmd->add_option("--out", config.out_path, "Directory for graph files")->required();
    explore_cmd->add_option("--workers", config.workers, "Theorems explored in parallel");
    explore_cmd->add_option("--max-transitions", config.explore.max_transitions, "Apply attempts per theorem");
    explore_cmd->add_option("--max-seconds", config.explore.max_seconds, "Wall-clock budget per theorem");
    explore_cmd->add_option("--max-states", config.explore.max_states, "Stop at this many states (0: no limit)");
    explore_cmd->add_option("--k", config.explore.k_neighbors, "Templates retrieved per state");
    explore_cmd->add_option("--cap", config.explore.instantiation_cap, "Instantiations per template");
    add_engine_flags(explore_cmd, explore_engine);

    // extract
    std::string graph_dir;
    std::size_t max_depth = 8;
    auto* extract = app.add_subcommand("extract", "Turn graph files into a theorem dataset");
    extract->add_option("graphs", graph_dir, "Directory of graph files")->required();
    extract->add_option("--max-depth", max_depth, "Largest proof length kept");
    extract->add_option("--out", out_path, "Dataset file to write")->required();

    // prove
    std::string theorem_text;
    auto* prove_cmd = app.add_subcommand("prove", "Search for a proof of one theorem");
    prove_cmd->add_option("--theorem", theorem_text, "Theorem header")->required();
    prove_cmd->add_option("--theory", config.theory_path, "Theory file (default: bundled group theory)");
    prove_cmd->add_option("--index", config.index_path, "Template index")->required();
    add_search_flags(prove_cmd, config, mode);
    add_engine_flags(prove_cmd, prove_engine);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Search for proofs of every theorem in a file");
    bench_cmd->add_option("--theorems", config.theorems_path, "Theorem file")->required();
    bench_cmd->add_option("--theory", config.theory_path, "Theory file (default: bundled group theory)");
    bench_cmd->add_option("--index", config.index_path, "Template index")->required();
    bench_cmd->add_option("--workers", config.workers, "Theorems searched in parallel");
    add_search_flags(bench_cmd, config, mode);
    add_engine_flags(bench_cmd, bench_engine);

    // compare
    CompareOptions compare_options;
    double per_char_ms = 20.0;
    auto* compare_cmd = app.add_subcommand("compare", "States reached by retrieval versus a slow baseline generator");
    compare_cmd->add_option("--theorems", config.theorems_path, "Theorem file")->required();
    compare_cmd->add_option("--theory", config.theory_path, "Theory file (default: bundled group theory)");
    compare_cmd->add_option("--index", config.index_path, "Template index")->required();
    compare_cmd->add_option("--window", compare_options.window_seconds, "Seconds per theorem and generator");
    compare_cmd->add_option("--baseline-ms-per-char", per_char_ms, "Baseline delay per generated character");
    compare_cmd->add_option("--max-states", compare_options.max_states, "Stop a run at this many states (0: no limit)");
    compare_cmd->add_option("--k", compare_options.k_neighbors, "Templates retrieved per state");
    compare_cmd->add_option("--cap", compare_options.instantiation_cap, "Instantiations per template");
    add_engine_flags(compare_cmd, compare_engine);

    // serve
    ServeOptions serve_options;
    auto* serve = app.add_subcommand("serve", "Serve the builtin engine over the line protocol on stdin/stdout");
    serve->add_option("--theory", theory_path, "Theory file (default: bundled group theory)");
    serve->add_option("--name", serve_options.engine_name, "Engine name in the ready line");
    serve->add_option("--hang-on", serve_options.hang_on, "Never answer tactics containing this text");
    serve->add_option("--fail-on", serve_options.fail_on, "Answer tactics containing this text with an error");
    int slow_ms = 0;
    serve->add_option("--slow-on", serve_options.slow_on, "Delay answers to tactics containing this text");
    serve->add_option("--slow-ms", slow_ms, "Delay for --slow-on");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*templatize) {
            RunConfig c;
            c.theory_path = theory_path;
            const auto theory = load_run_theory(c);
            const auto s = cmd_templatize(corpus_path, out_path, *theory, std::cerr);
            std::cout << s.templates << " templates from " << s.pairs << " pairs, " << s.warnings << " warnings\n";
            return kExitOk;
        }
        if (*index) {
            const auto s = cmd_index(templates_path, out_path,
                                     embeddings_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(embeddings_path));
            std::cout << s.entries << " templates indexed, dim " << s.dim << '\n';
            return kExitOk;
        }
        if (*explore_cmd) {
            apply_engine_flags(config, explore_engine);
            const auto summary = cmd_explore(config, std::cerr);
            for (const auto& r : summary.runs) {
                nlohmann::ordered_json j;
                j["theorem"] = r.name;
                if (!r.error.empty()) {
                    j["error"] = r.error;
                } else {
                    j["graph"] = r.graph_file.filename().string();
                    j["states"] = r.stats.distinct_states;
                    j["attempted"] = r.stats.transitions_attempted;
                    j["succeeded"] = r.stats.transitions_succeeded;
                    j["proof_finished"] = r.stats.proof_finished_hits;
                    j["seconds"] = r.stats.elapsed_seconds;
                    j["states_per_minute"] = r.stats.states_per_minute;
                    if (r.truncated) j["truncated"] = true;
                }
                std::cout << j.dump() << '\n';
            }
            nlohmann::ordered_json total;
            total["theorems"] = summary.runs.size();
            total["failed"] = summary.failed();
            total["avg_states"] = summary.average_states();
            std::cout << total.dump() << '\n';
            return summary.failed() ? kExitPartial : kExitOk;
        }
        if (*extract) {
            const auto s = cmd_extract(graph_dir, max_depth, out_path, std::cerr);
            std::cout << s.records << " records from " << s.graphs << " graphs";
            if (s.skipped) std::cout << ", " << s.skipped << " skipped";
            std::cout << '\n';
            return s.skipped ? kExitPartial : kExitOk;
        }
        if (*prove_cmd || *bench_cmd) {
            apply_engine_flags(config, *prove_cmd ? prove_engine : bench_engine);
            config.search.mode = mode == "ten-attempts" ? TriesMode::Attempts : TriesMode::Valid;
            if (*prove_cmd) {
                const auto outcome = cmd_prove(config, theorem_text);
                if (!outcome.proved) {
                    std::cout << "failed: " << outcome.reason << '\n';
                    return kExitPartial;
                }
                print_proof(theorem_text, outcome);
                return kExitOk;
            }
            const auto report = cmd_bench(config);
            write_bench_report(std::cout, report);
            return kExitOk;
        }
        if (*compare_cmd) {
            apply_engine_flags(config, compare_engine);
            compare_options.baseline_per_char = std::chrono::microseconds(static_cast<std::int64_t>(per_char_ms * 1000));
            write_compare_report(std::cout, cmd_compare(config, compare_options));
            return kExitOk;
        }
        if (*serve) {
            RunConfig c;
            c.theory_path = theory_path;
            serve_options.slow_delay = std::chrono::milliseconds(slow_ms);
            BuiltinEngine engine(load_run_theory(c));
            return serve_engine(std::cin, std::cout, engine, serve_options);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}
