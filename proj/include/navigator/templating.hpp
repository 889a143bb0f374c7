#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navigator/rewrite.hpp"

namespace navigator {

/// A tactic with its variables, hypotheses and unrecognized tokens replaced
/// by `{varK}`, `{hypothesis}` and `{unknown}` placeholders.
struct TacticTemplate {
    std::string text;
    std::size_t var_arity = 0;
    std::size_t hyp_arity = 0;
    bool has_unknown = false;
    std::int64_t frequency = 1;

    /// Derives the arities from the placeholders in `text`. Throws
    /// std::invalid_argument if `{varK}` indices are not contiguous from 0 in
    /// first-occurrence order.
    static TacticTemplate from_text(std::string text, std::int64_t frequency = 1);

    friend bool operator==(const TacticTemplate&, const TacticTemplate&) = default;
};

/// The names a template can be instantiated with.
struct StateContext {
    std::vector<std::string> variables;
    std::vector<std::string> hypotheses;
};

/// Reads variable and hypothesis names from a state's pretty text. Lines
/// before the `⊢` line of the form `names : T` declare hypotheses when `T`
/// contains a relation symbol and variables otherwise. Works on any engine's
/// output that follows the usual layout; unrecognized lines are skipped.
StateContext context_from_pretty(std::string_view pretty);

/// Tokens that survive templatization unchanged.
struct TemplateVocabulary {
    std::set<std::string, std::less<>> tactic_heads{"rw"};
    std::set<std::string, std::less<>> rule_names;
    /// Operator symbols (split out of words) and constants.
    std::set<std::string, std::less<>> symbols;
    std::set<std::string, std::less<>> constants;

    static TemplateVocabulary from_theory(const Theory& theory);
};

/// The text each placeholder replaced, in placeholder order.
struct TemplateBinding {
    std::vector<std::string> vars;      // indexed by K of {varK}
    std::vector<std::string> hyps;      // one per {hypothesis} occurrence
    std::vector<std::string> unknowns;  // one per {unknown} occurrence

    friend bool operator==(const TemplateBinding&, const TemplateBinding&) = default;
};

struct Templatized {
    TacticTemplate tmpl;
    TemplateBinding binding;
};

/// Whitespace separates tokens; brackets, parentheses, commas, `←` and
/// vocabulary symbols are tokens of their own. Variable names become
/// `{varK}` (numbered by first occurrence), hypothesis names and inline
/// relations (`a = b`, `k > 1`) become `{hypothesis}`, and anything that is
/// not a tactic head, rule name, symbol, constant or numeral becomes
/// `{unknown}`. Spacing of the original is preserved. Throws
/// std::invalid_argument on empty input.
Templatized templatize(std::string_view tactic, const StateContext& context, const TemplateVocabulary& vocab);

/// All assignments of context variables to `{varK}` slots (repetition
/// allowed) crossed with context hypotheses to `{hypothesis}` slots, in
/// lexicographic order of slot-wise indices (var0 most significant, then
/// the hypothesis slots), truncated to `cap`. Empty for templates with
/// `{unknown}` or when a slot has no candidates.
std::vector<std::string> instantiate(const TacticTemplate& tmpl, const StateContext& context, std::size_t cap = 200);

/// Fills the placeholders from `binding`; the inverse of templatize.
std::string instantiate_with(const TacticTemplate& tmpl, const TemplateBinding& binding);

struct CorpusPair {
    std::string state;  // pretty text
    std::string tactic;
};

/// Deduplicated by text; frequency counts contributing pairs; ordered by
/// frequency descending, then text.
std::vector<TacticTemplate> build_template_corpus(std::span<const CorpusPair> pairs, const TemplateVocabulary& vocab);

/// `{"template":"…","var_arity":2,"hyp_arity":0,"frequency":17}` per line.
void write_template_corpus(const std::filesystem::path& path, std::span<const TacticTemplate> templates);
std::vector<TacticTemplate> read_template_corpus(const std::filesystem::path& path);

}  // namespace navigator
