// One PASS/FAIL line per acceptance criterion. Exit status 0 when all pass.
//
//     acceptance [--window SECONDS]
//
// --window shortens the throughput window for quick local runs; the
// criterion itself is judged at 60 s.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "navigator/orchestrator.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace navigator;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass;
    std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// Applies `tactics` in order and compares every intermediate pretty text.
bool replay_exact(std::string_view theorem, const std::vector<std::string>& tactics,
                  const std::vector<std::string>& states, std::string& why) {
    BuiltinEngine e(testing_support::group());
    std::int64_t id = e.enter(theorem).state_id;
    for (std::size_t i = 0; i < tactics.size(); ++i) {
        const StepResult r = e.apply(id, tactics[i]);
        const std::string got = r.kind == StepKind::ProofFinished ? "PF" : r.kind == StepKind::State ? r.pretty : "fail: " + r.error;
        if (got != states[i]) {
            why = std::string(theorem) + " step " + std::to_string(i + 1) + " gave " + got;
            return false;
        }
        id = r.state_id;
    }
    return true;
}

Verdict worked_proof_replay() {
    const auto t0 = Clock::now();
    std::string why;
    bool ok = replay_exact("theorem mul_one (a : G) : a * 1 = a",
                           {"rw [← mul_left_inv a]", "rw [← mul_assoc]", "rw [mul_inv_cancel]", "rw [one_mul]"},
                           {"a : G\n⊢ a * (a⁻¹ * a) = a", "a : G\n⊢ a * a⁻¹ * a = a", "a : G\n⊢ 1 * a = a", "PF"}, why);
    ok = ok && replay_exact("theorem my_mul_comm_assoc (a b c : ℝ) : a * b * c = b * (a * c)",
                            {"rw [mul_comm a b]", "rw [mul_assoc]"},
                            {"a b c : ℝ\n⊢ b * a * c = b * (a * c)", "PF"}, why);
    ok = ok && replay_exact("theorem mul_inv_rev (a b : G) : (a * b)⁻¹ = b⁻¹ * a⁻¹",
                            {"rw[← one_mul (b⁻¹ * a⁻¹)]", "rw[← mul_left_inv (a * b)]"},
                            {"a b : G\n⊢ (a * b)⁻¹ = 1 * (b⁻¹ * a⁻¹)",
                             "a b : G\n⊢ (a * b)⁻¹ = (a * b)⁻¹ * (a * b) * (b⁻¹ * a⁻¹)"},
                            why);
    const double s = since(t0);
    if (!ok) return {false, why};
    return {s < 1.0, fmt("3 proofs, all states equal, %.3f s", s)};
}

Verdict dataset_soundness() {
    const auto t0 = Clock::now();
    std::size_t total = 0, replayed = 0, fewest = SIZE_MAX;
    std::string why;
    for (const auto& theorem : testing_support::fixtures()) {
        BuiltinEngine engine(testing_support::group());
        ExploreBudget b;
        b.max_transitions = 5000;
        const StateGraph g = explore(theorem, theorem_name(theorem), engine, testing_support::corpus_index(), b);
        const auto records = extract_dataset(g, 8, g.source());
        fewest = std::min(fewest, records.size());
        for (const auto& r : records) {
            ++total;
            BuiltinEngine fresh(testing_support::group());
            const ReplayOutcome out = replay_proof(fresh, r.theorem_text, r.proof.tactics);
            if (out.finished && out.steps == r.depth) ++replayed;
            else if (why.empty()) why = r.id + ": " + (out.error.empty() ? "wrong step count" : out.error);
        }
    }
    const double s = since(t0);
    const bool ok = total > 0 && replayed == total && fewest >= 1 && s < 120;
    return {ok, fmt("%zu/%zu records replay in exactly depth steps, min %zu per fixture, %.1f s", replayed, total,
                    fewest, s) + (why.empty() ? "" : "; first failure " + why)};
}

Verdict shortest_proof_oracle() {
    std::mt19937 rng(2024);
    int path_ok = 0, dist_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const StateGraph g = oracles::random_graph(rng, 1 + rng() % 12, 3);
        bool same = true;
        for (std::size_t v = 0; v < g.size() && same; ++v) {
            const auto want = oracles::brute_force_best(g, static_cast<NodeId>(v), g.size());
            std::optional<ProofPath> got;
            try {
                got = shortest_proof(g, static_cast<NodeId>(v));
            } catch (const std::invalid_argument&) {
            }
            same = got == want;
        }
        path_ok += same;
    }
    for (int trial = 0; trial < 200; ++trial) {
        const StateGraph g = oracles::random_graph(rng, 1 + rng() % 50, 4);
        dist_ok += distances_to_proof(g) == oracles::bellman_ford(g);
    }
    return {path_ok == 200 && dist_ok == 200,
            fmt("paths %d/200 match enumeration, distances %d/200 match relaxation", path_ok, dist_ok)};
}

Verdict retrieval_exactness() {
    std::mt19937 rng(77);
    std::normal_distribution<float> g(0.f, 1.f);
    int topk_ok = 0;
    std::size_t self_ok = 0, self_total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1000, dim = kDefaultEmbeddingDim;
        std::vector<float> rows(n * dim);
        for (auto& x : rows) x = g(rng);
        const TemplateIndex index = TemplateIndex::from_rows(oracles::synthetic_templates(n), rows, dim);
        std::vector<float> q(dim);
        for (auto& x : q) x = g(rng);
        const std::size_t k = 1 + rng() % 200;
        topk_ok += index.query_vector(q, k) == oracles::scan(index, q, k);
        for (int s = 0; s < 10; ++s) {
            const std::size_t i = rng() % n;
            const auto v = index.vector(i);
            ++self_total;
            self_ok += index.query_vector(std::vector<float>(v.begin(), v.end()), 1)[0].entry == i;
        }
    }
    const TemplateIndex& corpus = testing_support::corpus_index();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        ++self_total;
        self_ok += corpus.query(corpus.entry(i).text, 1)[0].entry == i;
    }
    return {topk_ok == 100 && self_ok == self_total,
            fmt("top-k %d/100 equal full scan, self rank 1 in %zu/%zu", topk_ok, self_ok, self_total)};
}

Verdict template_round_trip() {
    const auto vocab = TemplateVocabulary::from_theory(*testing_support::group());
    const auto pairs = testing_support::corpus_pairs();
    std::size_t exact = 0, over_cap = 0;
    for (const auto& p : pairs) {
        const StateContext ctx = context_from_pretty(p.state);
        const auto t = templatize(p.tactic, ctx, vocab);
        exact += instantiate_with(t.tmpl, t.binding) == p.tactic;
        // A wide context so large arities would overflow without the cap.
        StateContext wide = ctx;
        for (int i = 0; i < 12; ++i) wide.variables.push_back("w" + std::to_string(i));
        wide.hypotheses.push_back("hw");
        over_cap += instantiate(t.tmpl, wide).size() > 200;
    }
    StateContext many;
    for (int i = 0; i < 10; ++i) many.variables.push_back("v" + std::to_string(i));
    const std::size_t big = instantiate(TacticTemplate::from_text("rw [mul_assoc {var0} {var1} {var2}]"), many).size();
    over_cap += big > 200;
    return {exact == pairs.size() && over_cap == 0 && big == 200,
            fmt("%zu/%zu pairs byte-exact, 1000-way template capped at %zu", exact, pairs.size(), big)};
}

Verdict budget_compliance() {
    std::size_t ok = 0, runs = 0;
    std::string worst;
    for (const auto& theorem : testing_support::fixtures())
        for (std::int64_t n : {0, 1, 100, 5000}) {
            BuiltinEngine engine(testing_support::group());
            ExploreBudget b;
            b.max_transitions = n;
            const StateGraph g = explore(theorem, "b", engine, testing_support::corpus_index(), b);
            ++runs;
            const bool good = engine.apply_count() == g.transitions_attempted && g.transitions_attempted <= n;
            ok += good;
            if (!good && worst.empty()) worst = fmt("N=%lld made %lld applies", static_cast<long long>(n),
                                                    static_cast<long long>(engine.apply_count()));
        }
    return {ok == runs, fmt("%zu/%zu runs within N in {0,1,100,5000}", ok, runs) + (worst.empty() ? "" : "; " + worst)};
}

Verdict determinism() {
    testing_support::TempDir dir;
    std::ostringstream log;
    cmd_templatize(testing_support::data_dir() / "proof_corpus.jsonl", dir.path / "t.jsonl", *testing_support::group(), log);
    cmd_index(dir.path / "t.jsonl", dir.path / "i.bin");
    auto run = [&](std::size_t workers, const std::string& tag) {
        RunConfig c;
        c.theorems_path = testing_support::data_dir() / "fixtures.txt";
        c.index_path = dir.path / "i.bin";
        c.out_path = dir.path / ("g" + tag);
        c.workers = workers;
        c.explore.max_transitions = 5000;
        cmd_explore(c, log);
        cmd_extract(c.out_path, 8, dir.path / ("d" + tag + ".jsonl"), log);
        std::ifstream in(dir.path / ("d" + tag + ".jsonl"), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = run(1, "1"), b = run(4, "4");
    const auto lines = std::count(a.begin(), a.end(), '\n');
    return {!a.empty() && a == b, fmt("W=1 and W=4 datasets %s (%ld records, %zu bytes)",
                                      a == b ? "byte-identical" : "differ", static_cast<long>(lines), a.size())};
}

Verdict throughput(double window) {
    CompareOptions o;
    o.window_seconds = window;
    o.baseline_per_char = std::chrono::milliseconds(20);
    o.max_states = 250000;
    const auto r = compare(testing_support::fixtures(), testing_support::builtin_factory(), testing_support::corpus_index(), o);
    const double ratio = r.ratio();
    return {ratio >= 10.0 && r.retrieval.failed == 0,
            fmt("%.0f s window: retrieval %.1f vs baseline %.1f avg states, ratio %.1fx, %zu retrieval runs hit the "
                "250000-state guard",
                window, r.retrieval.average_states(), r.baseline.average_states(), ratio, r.retrieval.capped)};
}

}  // namespace

int main(int argc, char** argv) {
    double window = 60.0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--window") == 0 && i + 1 < argc) window = std::stod(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--window SECONDS]\n", argv[0]);
            return 2;
        }
    }
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"worked-proof replay", worked_proof_replay},
        {"dataset soundness", dataset_soundness},
        {"shortest-proof oracle", shortest_proof_oracle},
        {"retrieval exactness", retrieval_exactness},
        {"template round-trip", template_round_trip},
        {"budget compliance", budget_compliance},
        {"determinism", determinism},
        {"throughput", [window] { return throughput(window); }},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
