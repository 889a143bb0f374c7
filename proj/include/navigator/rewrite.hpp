#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "navigator/state.hpp"
#include "navigator/term.hpp"

namespace navigator {

/// A named oriented equation. `pattern_vars` lists the pattern variables of
/// `lhs` in first-occurrence order; explicit tactic arguments bind them
/// positionally.
struct RewriteRule {
    std::string name;
    Term lhs;
    Term rhs;
    std::vector<std::string> pattern_vars;
};

class TheoryError : public std::runtime_error {
public:
    TheoryError(const std::string& message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class Theory {
public:
    Theory() = default;
    explicit Theory(Signature sig) : sig_(std::move(sig)) {}

    /// Throws std::invalid_argument on a duplicate name or an rhs pattern
    /// variable missing from the lhs.
    void add_rule(RewriteRule rule);

    const Signature& signature() const { return sig_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const RewriteRule* find(std::string_view name) const;

private:
    Signature sig_;
    std::vector<RewriteRule> rules_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

/// Parses the line-oriented theory format:
///
///     [signature]
///     sort G
///     binop * 70 left
///     postfix ⁻¹
///     const 1
///     [rules]
///     mul_comm : x * y = y * x
///
/// Blank lines and lines starting with `#` or `--` are ignored. In rules,
/// identifiers that are not declared constants are pattern variables.
Theory parse_theory(std::string_view text);
Theory load_theory(const std::filesystem::path& path);

/// The bundled group theory (identical to data/group.theory).
Theory group_theory();

/// `rw [name args…]` or `rw [← name args…]`.
struct TacticAst {
    bool reversed = false;
    std::string target;
    std::vector<Term> explicit_args;

    friend bool operator==(const TacticAst&, const TacticAst&) = default;
};

/// Recognizes `rw [...]` with an optional `←` (or `<-`). The target name is
/// not resolved here. Throws ParseError on an unknown head or bad brackets.
TacticAst parse_tactic(std::string_view text, const Theory& theory);

using Binding = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Binding& binding, std::string_view name);

/// First subterm of `subject` in pre-order (root, left, right) that matches
/// `pattern` consistently with `partial`. Returns the extended binding.
std::optional<Binding> match_pattern(const Term& pattern, const Term& subject, const Binding& partial = {});

/// Replaces every pattern variable bound in `binding`; unbound ones are kept.
Term substitute(const Term& t, const Binding& binding);

struct NewState {
    ProofState state;
};
struct ProofFinished {};
struct Failure {
    std::string reason;
};

using ApplyResult = std::variant<NewState, ProofFinished, Failure>;

/// Failure reasons produced by apply_tactic.
namespace failure {
inline constexpr std::string_view kUnknownTarget = "unknown target";
inline constexpr std::string_view kUnboundArg = "unbound variable in args";
inline constexpr std::string_view kNoMatch = "no match";
inline constexpr std::string_view kTooManyArgs = "too many arguments";
inline constexpr std::string_view kUnboundRhs = "unbound variable in rhs";
inline constexpr std::string_view kNoChange = "no change";
}  // namespace failure

/// One `rw` step on the goal. The target resolves to a hypothesis of the
/// state (shadowing rules of the same name) or a theory rule; `←` swaps its
/// sides; explicit args bind leading pattern variables; the first pre-order
/// match in goal.lhs, then goal.rhs, fixes the instance; every occurrence of
/// that instance is replaced in one top-down pass. A goal whose sides are
/// then identical is ProofFinished.
ApplyResult apply_tactic(const ProofState& state, const TacticAst& tactic, const Theory& theory);

bool is_tautology(const Equation& goal);

}  // namespace navigator
