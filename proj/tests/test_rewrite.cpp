#include <gtest/gtest.h>

#include <map>
#include <random>

#include "navigator/engine.hpp"
#include "navigator/rewrite.hpp"
#include "support.hpp"

using namespace navigator;
using testing_support::group;

namespace {

const Signature& sig() { return group()->signature(); }

ProofState state(const std::string& text) { return parse_state(text, sig()); }

std::string step(const ProofState& st, const std::string& tactic) {
    const ApplyResult r = apply_tactic(st, parse_tactic(tactic, *group()), *group());
    if (std::holds_alternative<ProofFinished>(r)) return "PF";
    if (const auto* f = std::get_if<Failure>(&r)) return "fail: " + f->reason;
    return print_state(std::get<NewState>(r).state, sig());
}

// Independent matcher: walks the subject's subterms in pre-order and tries a
// plain recursive match with a std::map binding at each.
bool oracle_match(const Term& p, const Term& s, std::map<std::string, Term>& b) {
    switch (p.kind()) {
        case TermKind::PatternVar: {
            auto it = b.find(p.symbol());
            if (it == b.end()) {
                b.emplace(p.symbol(), s);
                return true;
            }
            return it->second == s;
        }
        case TermKind::Variable:
        case TermKind::Constant:
            return s.kind() == p.kind() && s.symbol() == p.symbol();
        case TermKind::Postfix:
            return s.kind() == TermKind::Postfix && s.symbol() == p.symbol() && oracle_match(p.operand(), s.operand(), b);
        case TermKind::Binary:
            return s.kind() == TermKind::Binary && s.symbol() == p.symbol() && oracle_match(p.lhs(), s.lhs(), b) &&
                   oracle_match(p.rhs(), s.rhs(), b);
    }
    return false;
}

void preorder(const Term& t, std::vector<Term>& out) {
    out.push_back(t);
    if (t.kind() == TermKind::Binary) {
        preorder(t.lhs(), out);
        preorder(t.rhs(), out);
    } else if (t.kind() == TermKind::Postfix) {
        preorder(t.operand(), out);
    }
}

std::optional<std::map<std::string, Term>> oracle_first_match(const Term& p, const Term& s) {
    std::vector<Term> subs;
    preorder(s, subs);
    for (const auto& sub : subs) {
        std::map<std::string, Term> b;
        if (oracle_match(p, sub, b)) return b;
    }
    return std::nullopt;
}

Term random_pattern(std::mt19937& rng, int depth) {
    const int r = depth <= 0 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 8);
    if (r == 0) return Term::constant("1");
    if (r <= 2) return Term::pattern_var(rng() % 2 ? "x" : "y");
    if (r == 3) return Term::postfix("⁻¹", random_pattern(rng, depth - 1));
    return Term::binary("*", random_pattern(rng, depth - 1), random_pattern(rng, depth - 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Worked proofs, intermediate states compared as strings.

TEST(Replay, MulOneFourSteps) {
    ProofState st = state("a : G\n⊢ a * 1 = a");
    const char* tactics[] = {"rw [← mul_left_inv a]", "rw [← mul_assoc]", "rw [mul_inv_cancel]", "rw [one_mul]"};
    const char* expected[] = {"a : G\n⊢ a * (a⁻¹ * a) = a", "a : G\n⊢ a * a⁻¹ * a = a", "a : G\n⊢ 1 * a = a", "PF"};
    for (int i = 0; i < 4; ++i) {
        const std::string got = step(st, tactics[i]);
        ASSERT_EQ(got, expected[i]) << tactics[i];
        if (got != "PF") st = state(got);
    }
}

TEST(Replay, CommAssoc) {
    const ProofState st = state("a b c : ℝ\n⊢ a * b * c = b * (a * c)");
    const std::string s1 = step(st, "rw [mul_comm a b]");
    EXPECT_EQ(s1, "a b c : ℝ\n⊢ b * a * c = b * (a * c)");
    EXPECT_EQ(step(state(s1), "rw [mul_assoc]"), "PF");
}

TEST(Replay, InverseOfProductStart) {
    const ProofState st = state("a b : G\n⊢ (a * b)⁻¹ = b⁻¹ * a⁻¹");
    const std::string s1 = step(st, "rw[← one_mul (b⁻¹ * a⁻¹)]");
    EXPECT_EQ(s1, "a b : G\n⊢ (a * b)⁻¹ = 1 * (b⁻¹ * a⁻¹)");
    EXPECT_EQ(step(state(s1), "rw[← mul_left_inv (a * b)]"),
              "a b : G\n⊢ (a * b)⁻¹ = (a * b)⁻¹ * (a * b) * (b⁻¹ * a⁻¹)");
}

TEST(Replay, ThroughTheEngineInterface) {
    BuiltinEngine engine(group());
    const auto root = engine.enter("theorem my_mul_comm_assoc (a b c : ℝ) : a * b * c = b * (a * c)");
    const auto r1 = engine.apply(root.state_id, "rw [mul_comm a b]");
    ASSERT_EQ(r1.kind, StepKind::State);
    EXPECT_EQ(r1.pretty, "a b c : ℝ\n⊢ b * a * c = b * (a * c)");
    EXPECT_EQ(engine.apply(r1.state_id, "rw [mul_assoc]").kind, StepKind::ProofFinished);
}

// ---------------------------------------------------------------------------
// Semantics

TEST(Rewrite, HypothesisAndReverse) {
    const ProofState st = state("a b c : G\nh : a = b * c\n⊢ a * 1 = b * c");
    EXPECT_EQ(step(st, "rw [h]"), "a b c : G\nh : a = b * c\n⊢ b * c * 1 = b * c");
    EXPECT_EQ(step(st, "rw [← h]"), "a b c : G\nh : a = b * c\n⊢ a * 1 = a");
    EXPECT_EQ(step(st, "rw [<- h]"), step(st, "rw [← h]"));
}

TEST(Rewrite, HypothesisShadowsRule) {
    const ProofState st = state("a b : G\nmul_one : a = b\n⊢ a * 1 = a");
    EXPECT_EQ(step(st, "rw [mul_one]"), "a b : G\nmul_one : a = b\n⊢ b * 1 = b");
}

TEST(Rewrite, ReplacesAllOccurrencesOfTheFirstInstance) {
    const ProofState st = state("a b : G\n⊢ a * 1 * (a * 1) = b * 1");
    EXPECT_EQ(step(st, "rw [mul_one]"), "a b : G\n⊢ a * a = b * 1");
}

TEST(Rewrite, Failures) {
    const ProofState st = state("a b : G\n⊢ a * b = b");
    EXPECT_EQ(step(st, "rw [no_such_rule]"), "fail: unknown target");
    EXPECT_EQ(step(st, "rw [mul_one]"), "fail: no match");
    EXPECT_EQ(step(st, "rw [mul_comm a z]"), "fail: unbound variable in args");
    EXPECT_EQ(step(st, "rw [mul_one a b]"), "fail: too many arguments");
    EXPECT_EQ(step(st, "rw [← mul_one]"), "a b : G\n⊢ a * b * 1 = b");
    EXPECT_EQ(step(state("a b : G\n⊢ a * 1 = b"), "rw [← mul_left_inv]"), "fail: unbound variable in rhs");
    EXPECT_EQ(step(state("a : G\n⊢ a * a = 1"), "rw [mul_comm]"), "fail: no change");
}

TEST(Rewrite, TautologyAfterRewriteFinishes) {
    EXPECT_EQ(step(state("a : G\n⊢ a * 1 = a"), "rw [mul_one]"), "PF");
}

TEST(Tactic, ParseErrors) {
    EXPECT_THROW(parse_tactic("simp", *group()), ParseError);
    EXPECT_THROW(parse_tactic("rw mul_one", *group()), ParseError);
    EXPECT_THROW(parse_tactic("rw [mul_one, mul_comm]", *group()), ParseError);
    EXPECT_THROW(parse_tactic("rw []", *group()), ParseError);
    EXPECT_THROW(parse_tactic("rw [mul_comm (a *]", *group()), ParseError);
    const TacticAst ast = parse_tactic("rw[← mul_left_inv (a * b)]", *group());
    EXPECT_TRUE(ast.reversed);
    EXPECT_EQ(ast.target, "mul_left_inv");
    ASSERT_EQ(ast.explicit_args.size(), 1u);
}

TEST(Theory, FileMatchesBundledCopy) {
    const Theory from_file = load_theory(testing_support::data_dir() / "group.theory");
    const Theory bundled = group_theory();
    ASSERT_EQ(from_file.rules().size(), bundled.rules().size());
    for (std::size_t i = 0; i < bundled.rules().size(); ++i) {
        EXPECT_EQ(from_file.rules()[i].name, bundled.rules()[i].name);
        EXPECT_EQ(from_file.rules()[i].lhs, bundled.rules()[i].lhs);
        EXPECT_EQ(from_file.rules()[i].rhs, bundled.rules()[i].rhs);
    }
}

TEST(Theory, ParseErrors) {
    EXPECT_THROW(parse_theory("[rules]\nbad line"), TheoryError);
    EXPECT_THROW(parse_theory("[signature]\nbinop * 70 left\n[rules]\nr : x * y = z"), std::exception);
    EXPECT_THROW(parse_theory("[signature]\nwhat\n"), TheoryError);
}

// ---------------------------------------------------------------------------
// Matching against the pre-order oracle

TEST(Property, FirstMatchAgreesWithPreorderOracle) {
    std::mt19937 rng(42);
    const std::vector<std::string> vars{"a", "b"};
    int matched = 0;
    for (int i = 0; i < 3000; ++i) {
        const Term p = random_pattern(rng, 2);
        const Term s = testing_support::random_term(rng, 4, vars);
        const auto got = match_pattern(p, s);
        const auto want = oracle_first_match(p, s);
        ASSERT_EQ(got.has_value(), want.has_value()) << print_term(p, sig()) << " in " << print_term(s, sig());
        if (!got) continue;
        ++matched;
        ASSERT_EQ(got->size(), want->size());
        for (const auto& [name, term] : *got) ASSERT_EQ(term, want->at(name));
    }
    EXPECT_GT(matched, 300);
}

TEST(Property, SubstituteInstantiatesTheMatchedSubterm) {
    std::mt19937 rng(5);
    const std::vector<std::string> vars{"a", "b", "c"};
    for (int i = 0; i < 2000; ++i) {
        const Term p = random_pattern(rng, 2);
        const Term s = testing_support::random_term(rng, 4, vars);
        const auto b = match_pattern(p, s);
        if (!b) continue;
        const Term inst = substitute(p, *b);
        std::vector<Term> subs;
        preorder(s, subs);
        ASSERT_TRUE(std::find(subs.begin(), subs.end(), inst) != subs.end());
    }
}
