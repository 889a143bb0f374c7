#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "navigator/term.hpp"

namespace navigator {

struct Hypothesis {
    std::string name;
    Term lhs;
    Term rhs;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// Variables of a single sort, named hypotheses and one goal equation.
struct ProofState {
    std::string sort;
    std::vector<std::string> variables;
    std::vector<Hypothesis> hypotheses;
    Equation goal;

    const Hypothesis* find_hypothesis(std::string_view name) const;
    bool declares_variable(std::string_view name) const;

    friend bool operator==(const ProofState&, const ProofState&) = default;
};

/// The printed form of a state; the identity of a node in the state graph.
struct CanonicalKey {
    std::string text;

    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

/// Throws std::invalid_argument when a free variable is undeclared, names
/// clash, or a pattern variable appears.
void validate_state(const ProofState& state);

/// Parses the state block layout:
///
///     a b c : ℝ
///     h : a = b + c
///     ⊢ a * a = b * b + 2 * b * c + c * c
///
/// Several variable lines are accepted when they share a sort; they print
/// back as one line. `⊢` may be written `|-`.
ProofState parse_state(std::string_view text, const Signature& sig);
std::string print_state(const ProofState& state, const Signature& sig);
CanonicalKey canonical_key(const ProofState& state, const Signature& sig);

struct TheoremHeader {
    std::string name;
    ProofState state;
};

/// Parses `theorem NAME (a b : G) (h : a = b) : lhs = rhs` with an optional
/// trailing `:= by ...` (everything from `:=` on is ignored). `lemma` and
/// `example` are accepted as keywords; the colon before the goal may be
/// omitted. Binder groups without a relation are variables and must all use
/// the same sort. Errors carry byte offsets into `text`.
TheoremHeader parse_theorem(std::string_view text, const Signature& sig);

}  // namespace navigator
