#include "navigator/search.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "navigator/pool.hpp"
#include "navigator/text.hpp"

namespace navigator {

using Clock = std::chrono::steady_clock;

namespace {

struct Child {
    std::int64_t state_id;
    std::string tactic;
};

struct Frame {
    std::vector<Child> children;
    std::size_t next = 0;
};

enum class Expansion { Children, Finished, Stopped };

class Search {
public:
    Search(ProofEngine& engine, CandidateGenerator& generator, const SearchBudget& budget, SearchOutcome& outcome)
        : engine_(engine), generator_(generator), budget_(budget), out_(outcome), start_(Clock::now()),
          deadline_(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget.max_seconds))) {}

    void run(std::string_view theorem_text) {
        EnteredState root;
        try {
            root = engine_.enter(theorem_text);
        } catch (const EngineError& e) {
            out_.reason = e.what();
            return finish();
        }
        visited_.insert(root.pretty);
        std::vector<Frame> stack(1);
        std::vector<std::string> path;
        if (expand(root.state_id, root.pretty, stack.back(), path) != Expansion::Children) return finish();

        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.next >= top.children.size()) {
                stack.pop_back();
                if (!path.empty()) path.pop_back();
                continue;
            }
            Child child = top.children[top.next++];
            if (budget_.max_depth != 0 && stack.size() >= budget_.max_depth) continue;
            path.push_back(std::move(child.tactic));
            Frame frame;
            switch (expand(child.state_id, engine_.pretty(child.state_id), frame, path)) {
                case Expansion::Finished:
                case Expansion::Stopped:
                    return finish();
                case Expansion::Children:
                    stack.push_back(std::move(frame));
                    break;
            }
        }
        out_.reason = "exhausted";
        finish();
    }

private:
    Expansion expand(std::int64_t state_id, const std::string& pretty, Frame& frame, const std::vector<std::string>& path) {
        ++out_.expanded;
        generator_.begin(pretty);
        std::size_t valid = 0, attempts = 0;
        while (auto tactic = generator_.next()) {
            if (budget_.mode == TriesMode::Valid ? valid >= budget_.tries_per_state
                                                 : attempts >= budget_.tries_per_state)
                break;
            if (Clock::now() >= deadline_) {
                out_.reason = "timeout";
                return Expansion::Stopped;
            }
            if (budget_.max_transitions != 0 && out_.attempts >= budget_.max_transitions) {
                out_.reason = "transition budget";
                return Expansion::Stopped;
            }
            ++attempts;
            ++out_.attempts;
            StepResult r;
            try {
                r = engine_.apply(state_id, *tactic);
            } catch (const EngineError& e) {
                out_.reason = e.what();
                return Expansion::Stopped;
            }
            if (r.kind == StepKind::Failure) continue;
            if (r.kind == StepKind::ProofFinished) {
                out_.proved = true;
                out_.proof.tactics = path;
                out_.proof.tactics.push_back(std::move(*tactic));
                return Expansion::Finished;
            }
            if (!visited_.insert(r.pretty).second) continue;
            frame.children.push_back({r.state_id, std::move(*tactic)});
            ++valid;
        }
        return Expansion::Children;
    }

    void finish() { out_.seconds = std::chrono::duration<double>(Clock::now() - start_).count(); }

    ProofEngine& engine_;
    CandidateGenerator& generator_;
    const SearchBudget& budget_;
    SearchOutcome& out_;
    Clock::time_point start_;
    Clock::time_point deadline_;
    std::unordered_set<std::string> visited_;
};

}  // namespace

SearchOutcome prove(std::string_view theorem_text, ProofEngine& engine, CandidateGenerator& generator,
                    const SearchBudget& budget) {
    SearchOutcome out;
    Search(engine, generator, budget, out).run(theorem_text);
    return out;
}

SearchOutcome prove(std::string_view theorem_text, ProofEngine& engine, const TemplateIndex& index,
                    const SearchBudget& budget) {
    RetrievalGenerator generator(index, budget.k_neighbors, budget.instantiation_cap);
    return prove(theorem_text, engine, generator, budget);
}

// ---------------------------------------------------------------------------
// Theorem files

std::vector<std::string> split_theorem_blocks(std::string_view text) {
    std::vector<std::string> out;
    std::string block;
    for (std::string_view line : text::split_lines(text)) {
        if (text::trim(line).empty() || text::starts_with(text::trim(line), "#")) {
            if (text::trim(line).empty() && !block.empty()) out.push_back(std::exchange(block, {}));
            continue;
        }
        if (!block.empty()) block += '\n';
        block += line;
    }
    if (!block.empty()) out.push_back(std::move(block));
    return out;
}

std::vector<std::string> read_theorem_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open theorem file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return split_theorem_blocks(ss.str());
}

std::string theorem_name(std::string_view theorem_text) {
    const auto words = text::split_whitespace(theorem_text);
    if (words.size() < 2) return {};
    if (words[0] != "theorem" && words[0] != "lemma" && words[0] != "example") return {};
    std::string_view w = words[1];
    const std::size_t end = w.find_first_of("(:{[");
    return std::string(w.substr(0, end));
}

// ---------------------------------------------------------------------------
// Benchmark

std::size_t BenchReport::proved() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.outcome.proved ? 1 : 0;
    return n;
}

std::string BenchReport::summary() const { return std::to_string(proved()) + "/" + std::to_string(total()); }

BenchReport bench(const std::vector<std::string>& theorems, const EngineFactory& factory, const TemplateIndex& index,
                  const SearchBudget& budget, std::size_t workers) {
    BenchReport report;
    report.entries.resize(theorems.size());
    const auto start = Clock::now();
    run_pool(theorems.size(), workers, [&](std::size_t i) {
        BenchEntry& entry = report.entries[i];
        entry.theorem_text = theorems[i];
        entry.name = theorem_name(theorems[i]);
        try {
            auto engine = factory();
            entry.outcome = prove(theorems[i], *engine, index, budget);
            engine->close();
        } catch (const std::exception& e) {
            entry.outcome = {};
            entry.outcome.reason = e.what();
        }
    });
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

void write_bench_report(std::ostream& out, const BenchReport& report) {
    for (const auto& e : report.entries) {
        nlohmann::ordered_json j;
        j["theorem"] = e.name;
        j["proved"] = e.outcome.proved;
        if (e.outcome.proved) j["proof"] = e.outcome.proof.tactics;
        else j["reason"] = e.outcome.reason;
        j["attempts"] = e.outcome.attempts;
        j["seconds"] = e.outcome.seconds;
        out << j.dump() << '\n';
    }
    out << report.summary() << '\n';
}

}  // namespace navigator
