#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "navigator/search.hpp"
#include "support.hpp"

using namespace navigator;

namespace {

/// States and tactics named by strings; missing entries fail.
class MapEngine final : public ProofEngine {
public:
    explicit MapEngine(std::map<std::pair<std::string, std::string>, std::string> moves) : moves_(std::move(moves)) {}
    std::string_view backend_name() const override { return "map"; }
    std::map<std::string, int> applied_from;

protected:
    std::string do_enter(std::string_view) override {
        states_.push_back("s0");
        return "s0";
    }
    StepResult do_apply(std::int64_t id, std::string_view tactic) override {
        const std::string& s = states_[static_cast<std::size_t>(id)];
        ++applied_from[s];
        const auto it = moves_.find({s, std::string(tactic)});
        if (it == moves_.end()) return {StepKind::Failure, -1, {}, "no"};
        if (it->second == "PF") return {StepKind::ProofFinished, -1, {}, {}};
        states_.push_back(it->second);
        return {StepKind::State, -1, it->second, {}};
    }
    void drop_last_state() override { states_.pop_back(); }

private:
    std::map<std::pair<std::string, std::string>, std::string> moves_;
    std::vector<std::string> states_;
};

class ListGenerator final : public CandidateGenerator {
public:
    explicit ListGenerator(std::vector<std::string> t) : tactics_(std::move(t)) {}
    void begin(const std::string&) override { pos_ = 0; }
    std::optional<std::string> next() override {
        if (pos_ >= tactics_.size()) return std::nullopt;
        return tactics_[pos_++];
    }

private:
    std::vector<std::string> tactics_;
    std::size_t pos_ = 0;
};

SearchBudget deterministic() {
    SearchBudget b;
    b.max_seconds = 600;
    return b;
}

}  // namespace

TEST(Prove, CommAssocInTwoTactics) {
    BuiltinEngine engine(testing_support::group());
    const auto out = prove("theorem my_mul_comm_assoc (a b c : ℝ) : a * b * c = b * (a * c)", engine,
                           testing_support::corpus_index(), deterministic());
    ASSERT_TRUE(out.proved) << out.reason;
    EXPECT_LE(out.proof.length(), 2u);
    BuiltinEngine check(testing_support::group());
    EXPECT_TRUE(replay_proof(check, "theorem t (a b c : ℝ) : a * b * c = b * (a * c)", out.proof.tactics).finished);
}

TEST(Prove, TheoryWithoutRulesIsExhausted) {
    auto empty = std::make_shared<const Theory>(parse_theory("[signature]\nsort G\nbinop * 70 left\nconst 1\n[rules]\n"));
    BuiltinEngine engine(empty);
    const auto out = prove("theorem t (a : G) : a * 1 = a", engine, testing_support::corpus_index(), deterministic());
    EXPECT_FALSE(out.proved);
    EXPECT_EQ(out.reason, "exhausted");
    EXPECT_EQ(out.expanded, 1u);
}

TEST(Prove, SeenStatesAreNotExpandedTwice) {
    MapEngine engine({{{"s0", "go"}, "s1"}, {{"s0", "also"}, "s1"}, {{"s1", "back"}, "s0"}, {{"s1", "go"}, "s2"},
                      {{"s2", "back"}, "s1"}});
    ListGenerator gen({"go", "also", "back"});
    const auto out = prove("t", engine, gen, deterministic());
    EXPECT_FALSE(out.proved);
    EXPECT_EQ(out.reason, "exhausted");
    EXPECT_EQ(out.expanded, 3u);
    for (const auto& [state, n] : engine.applied_from) EXPECT_EQ(n, 3) << state;
}

TEST(Prove, BacktracksIntoSecondChild) {
    MapEngine engine({{{"s0", "a"}, "dead"}, {{"s0", "b"}, "s1"}, {{"s1", "a"}, "PF"}});
    ListGenerator gen({"a", "b"});
    const auto out = prove("t", engine, gen, deterministic());
    ASSERT_TRUE(out.proved);
    EXPECT_EQ(out.proof.tactics, (std::vector<std::string>{"b", "a"}));
}

TEST(Prove, TransitionBudgetAndDepthLimit) {
    MapEngine chain({{{"s0", "n"}, "s1"}, {{"s1", "n"}, "s2"}, {{"s2", "n"}, "s3"}, {{"s3", "n"}, "PF"}});
    ListGenerator gen({"n"});
    SearchBudget b = deterministic();
    b.max_transitions = 2;
    auto out = prove("t", chain, gen, b);
    EXPECT_FALSE(out.proved);
    EXPECT_EQ(out.reason, "transition budget");
    EXPECT_EQ(out.attempts, 2);

    MapEngine again({{{"s0", "n"}, "s1"}, {{"s1", "n"}, "s2"}, {{"s2", "n"}, "s3"}, {{"s3", "n"}, "PF"}});
    b = deterministic();
    b.max_depth = 3;
    out = prove("t", again, gen, b);
    EXPECT_FALSE(out.proved);
    EXPECT_EQ(out.reason, "exhausted");

    MapEngine deep({{{"s0", "n"}, "s1"}, {{"s1", "n"}, "s2"}, {{"s2", "n"}, "s3"}, {{"s3", "n"}, "PF"}});
    b.max_depth = 4;
    EXPECT_TRUE(prove("t", deep, gen, b).proved);
}

TEST(Prove, AttemptsModeCountsFailures) {
    MapEngine engine({{{"s0", "f5"}, "PF"}});
    ListGenerator gen({"f0", "f1", "f2", "f3", "f4", "f5"});
    SearchBudget b = deterministic();
    b.mode = TriesMode::Attempts;
    b.tries_per_state = 5;
    EXPECT_FALSE(prove("t", engine, gen, b).proved);
    MapEngine valid({{{"s0", "f5"}, "PF"}});
    b.mode = TriesMode::Valid;
    EXPECT_TRUE(prove("t", valid, gen, b).proved);
}

TEST(Bench, ProvesAllFixtures) {
    const auto report =
        bench(testing_support::fixtures(), testing_support::builtin_factory(), testing_support::corpus_index(), deterministic(), 3);
    EXPECT_EQ(report.summary(), "3/3");
    for (const auto& e : report.entries) {
        BuiltinEngine check(testing_support::group());
        EXPECT_TRUE(replay_proof(check, e.theorem_text, e.outcome.proof.tactics).finished) << e.name;
    }
    std::ostringstream out;
    write_bench_report(out, report);
    EXPECT_NE(out.str().find("\n3/3\n"), std::string::npos);
}

TEST(Bench, ZeroBudgetProvesNothing) {
    SearchBudget b;
    b.max_seconds = 0;
    const auto report = bench(testing_support::fixtures(), testing_support::builtin_factory(), testing_support::corpus_index(), b);
    EXPECT_EQ(report.summary(), "0/3");
    for (const auto& e : report.entries) EXPECT_EQ(e.outcome.reason, "timeout");
}

TEST(TheoremFile, BlocksAndNames) {
    const auto blocks = split_theorem_blocks("# comment\ntheorem a (x : G) :\n  x = x\n\n\nlemma b : 1 = 1\n");
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks[0], "theorem a (x : G) :\n  x = x");
    EXPECT_EQ(theorem_name(blocks[0]), "a");
    EXPECT_EQ(theorem_name(blocks[1]), "b");
    EXPECT_EQ(theorem_name("theorem foo(x : G) : x = x"), "foo");
    EXPECT_EQ(theorem_name("x = x"), "");
    EXPECT_EQ(testing_support::fixtures().size(), 3u);
}
