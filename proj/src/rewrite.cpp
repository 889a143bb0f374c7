#include "navigator/rewrite.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "navigator/text.hpp"

namespace navigator {

// ---------------------------------------------------------------------------
// Theory

void Theory::add_rule(RewriteRule rule) {
    if (by_name_.count(rule.name)) throw std::invalid_argument("duplicate rule name '" + rule.name + "'");
    const auto lhs_vars = pattern_variables(rule.lhs);
    for (const auto& v : pattern_variables(rule.rhs))
        if (std::find(lhs_vars.begin(), lhs_vars.end(), v) == lhs_vars.end())
            throw std::invalid_argument("rule '" + rule.name + "': pattern variable '" + v + "' only on the right");
    if (!free_variables(rule.lhs).empty() || !free_variables(rule.rhs).empty())
        throw std::invalid_argument("rule '" + rule.name + "' contains ground variables");
    if (rule.pattern_vars.empty()) rule.pattern_vars = lhs_vars;
    by_name_.emplace(rule.name, rules_.size());
    rules_.push_back(std::move(rule));
}

const RewriteRule* Theory::find(std::string_view name) const {
    const auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &rules_[it->second];
}

Theory parse_theory(std::string_view text) {
    enum class Section { None, Signature, Rules } section = Section::None;
    Signature sig;
    struct PendingRule {
        std::string name;
        std::string equation;
        std::size_t line;
    };
    std::vector<PendingRule> pending;

    const auto lines = text::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = text::trim(lines[i]);
        if (line.empty() || line.front() == '#' || text::starts_with(line, "--")) continue;
        if (line == "[signature]") {
            section = Section::Signature;
            continue;
        }
        if (line == "[rules]") {
            section = Section::Rules;
            continue;
        }
        switch (section) {
            case Section::None:
                throw TheoryError("content before the first section", lineno);
            case Section::Signature: {
                const auto words = text::split_whitespace(line);
                try {
                    if (words[0] == "sort" && words.size() == 2) {
                        sig.set_sort(std::string(words[1]));
                    } else if (words[0] == "binop" && (words.size() == 3 || words.size() == 4)) {
                        int prec = 0;
                        const auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), prec);
                        if (ec != std::errc() || ptr != words[2].data() + words[2].size())
                            throw TheoryError("bad precedence '" + std::string(words[2]) + "'", lineno);
                        bool left = true;
                        if (words.size() == 4) {
                            if (words[3] == "right") left = false;
                            else if (words[3] != "left")
                                throw TheoryError("associativity must be 'left' or 'right'", lineno);
                        }
                        sig.add_binary(std::string(words[1]), prec, left);
                    } else if (words[0] == "postfix" && words.size() == 2) {
                        sig.add_postfix(std::string(words[1]));
                    } else if (words[0] == "const" && words.size() == 2) {
                        sig.add_constant(std::string(words[1]));
                    } else {
                        throw TheoryError("unrecognized signature line '" + std::string(line) + "'", lineno);
                    }
                } catch (const std::invalid_argument& e) {
                    throw TheoryError(e.what(), lineno);
                }
                break;
            }
            case Section::Rules: {
                const std::size_t colon = line.find(':');
                if (colon == std::string_view::npos) throw TheoryError("expected 'name : lhs = rhs'", lineno);
                const std::string_view name = text::trim(line.substr(0, colon));
                if (name.empty() || text::split_whitespace(name).size() != 1)
                    throw TheoryError("bad rule name", lineno);
                pending.push_back({std::string(name), std::string(line.substr(colon + 1)), lineno});
                break;
            }
        }
    }

    Theory theory(std::move(sig));
    for (const auto& p : pending) {
        try {
            const Equation eq = parse_equation(p.equation, theory.signature(), ParseMode::Pattern);
            theory.add_rule({p.name, eq.lhs, eq.rhs, {}});
        } catch (const ParseError& e) {
            throw TheoryError("rule '" + p.name + "': " + e.what(), p.line);
        } catch (const std::invalid_argument& e) {
            throw TheoryError(e.what(), p.line);
        }
    }
    return theory;
}

Theory load_theory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open theory file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_theory(ss.str());
}

Theory group_theory() {
    static constexpr std::string_view kGroupTheory = R"(
[signature]
sort G
binop * 70 left
postfix ⁻¹
const 1

[rules]
mul_comm : x * y = y * x
mul_assoc : x * y * z = x * (y * z)
one_mul : 1 * x = x
mul_one : x * 1 = x
mul_left_inv : x⁻¹ * x = 1
mul_right_inv : x * x⁻¹ = 1
mul_inv_cancel : x * x⁻¹ = 1
inv_inv : x⁻¹⁻¹ = x
mul_inv_rev : (x * y)⁻¹ = y⁻¹ * x⁻¹
)";
    return parse_theory(kGroupTheory);
}

// ---------------------------------------------------------------------------
// Tactic syntax

TacticAst parse_tactic(std::string_view text, const Theory& theory) {
    const std::string_view trimmed = text::trim(text);
    const std::size_t lead = static_cast<std::size_t>(trimmed.data() - text.data());
    if (trimmed.empty()) throw ParseError("empty tactic", 0);

    std::size_t head_end = 0;
    while (head_end < trimmed.size() && !text::is_space(trimmed[head_end]) && trimmed[head_end] != '[') ++head_end;
    if (trimmed.substr(0, head_end) != "rw")
        throw ParseError("unknown tactic '" + std::string(trimmed.substr(0, head_end)) + "'", lead);

    std::size_t pos = head_end;
    while (pos < trimmed.size() && text::is_space(trimmed[pos])) ++pos;
    if (pos >= trimmed.size() || trimmed[pos] != '[') throw ParseError("expected '['", lead + pos);
    const std::size_t open = pos;
    if (trimmed.back() != ']') throw ParseError("expected ']' at end of tactic", lead + trimmed.size());
    const std::size_t close = trimmed.size() - 1;
    std::string_view inner = trimmed.substr(open + 1, close - open - 1);
    std::size_t inner_at = lead + open + 1;
    if (inner.find_first_of("[]") != std::string_view::npos)
        throw ParseError("unbalanced brackets", inner_at + inner.find_first_of("[]"));
    if (inner.find(',') != std::string_view::npos)
        throw ParseError("only one rewrite target is supported", inner_at + inner.find(','));

    auto skip = [&] {
        while (!inner.empty() && text::is_space(inner.front())) {
            inner.remove_prefix(1);
            ++inner_at;
        }
    };
    skip();
    TacticAst ast;
    for (std::string_view arrow : {std::string_view("←"), std::string_view("<-")}) {
        if (text::starts_with(inner, arrow)) {
            ast.reversed = true;
            inner.remove_prefix(arrow.size());
            inner_at += arrow.size();
            skip();
            break;
        }
    }
    std::size_t name_end = 0;
    while (name_end < inner.size() && !text::is_space(inner[name_end]) && inner[name_end] != '(') ++name_end;
    if (name_end == 0) throw ParseError("missing rewrite target", inner_at);
    ast.target = std::string(inner.substr(0, name_end));
    try {
        ast.explicit_args = parse_term_sequence(inner.substr(name_end), theory.signature());
    } catch (const ParseError& e) {
        throw ParseError(e.detail(), inner_at + name_end + e.offset());
    }
    return ast;
}

// ---------------------------------------------------------------------------
// Matching and rewriting

const Term* lookup(const Binding& binding, std::string_view name) {
    for (const auto& [k, v] : binding)
        if (k == name) return &v;
    return nullptr;
}

namespace {

bool match_here(const Term& pattern, const Term& subject, Binding& binding) {
    switch (pattern.kind()) {
        case TermKind::PatternVar: {
            if (const Term* bound = lookup(binding, pattern.symbol())) return *bound == subject;
            binding.emplace_back(pattern.symbol(), subject);
            return true;
        }
        case TermKind::Variable:
        case TermKind::Constant:
            return subject.kind() == pattern.kind() && subject.symbol() == pattern.symbol();
        case TermKind::Binary:
            return subject.kind() == TermKind::Binary && subject.symbol() == pattern.symbol() &&
                   match_here(pattern.lhs(), subject.lhs(), binding) &&
                   match_here(pattern.rhs(), subject.rhs(), binding);
        case TermKind::Postfix:
            return subject.kind() == TermKind::Postfix && subject.symbol() == pattern.symbol() &&
                   match_here(pattern.operand(), subject.operand(), binding);
    }
    return false;
}

bool match_first(const Term& pattern, const Term& subject, Binding& binding) {
    const std::size_t mark = binding.size();
    if (match_here(pattern, subject, binding)) return true;
    binding.erase(binding.begin() + static_cast<std::ptrdiff_t>(mark), binding.end());
    if (subject.kind() == TermKind::Binary)
        return match_first(pattern, subject.lhs(), binding) || match_first(pattern, subject.rhs(), binding);
    if (subject.kind() == TermKind::Postfix) return match_first(pattern, subject.operand(), binding);
    return false;
}

Term replace_all(const Term& t, const Term& instance, const Term& replacement) {
    if (t.size() == instance.size() && t == instance) return replacement;
    if (t.size() <= instance.size()) return t;
    if (t.kind() == TermKind::Binary) {
        Term l = replace_all(t.lhs(), instance, replacement);
        Term r = replace_all(t.rhs(), instance, replacement);
        if (l.same_node(t.lhs()) && r.same_node(t.rhs())) return t;
        return Term::binary(t.symbol(), std::move(l), std::move(r));
    }
    if (t.kind() == TermKind::Postfix) {
        Term o = replace_all(t.operand(), instance, replacement);
        if (o.same_node(t.operand())) return t;
        return Term::postfix(t.symbol(), std::move(o));
    }
    return t;
}

}  // namespace

std::optional<Binding> match_pattern(const Term& pattern, const Term& subject, const Binding& partial) {
    Binding binding = partial;
    if (match_first(pattern, subject, binding)) return binding;
    return std::nullopt;
}

Term substitute(const Term& t, const Binding& binding) {
    switch (t.kind()) {
        case TermKind::PatternVar:
            if (const Term* bound = lookup(binding, t.symbol())) return *bound;
            return t;
        case TermKind::Binary: {
            Term l = substitute(t.lhs(), binding);
            Term r = substitute(t.rhs(), binding);
            if (l.same_node(t.lhs()) && r.same_node(t.rhs())) return t;
            return Term::binary(t.symbol(), std::move(l), std::move(r));
        }
        case TermKind::Postfix: {
            Term o = substitute(t.operand(), binding);
            if (o.same_node(t.operand())) return t;
            return Term::postfix(t.symbol(), std::move(o));
        }
        default:
            return t;
    }
}

ApplyResult apply_tactic(const ProofState& state, const TacticAst& tactic, const Theory& theory) {
    const Term* from = nullptr;
    const Term* to = nullptr;
    const std::vector<std::string>* pattern_vars = nullptr;
    static const std::vector<std::string> kNoVars;

    if (const Hypothesis* h = state.find_hypothesis(tactic.target)) {
        from = &h->lhs;
        to = &h->rhs;
        pattern_vars = &kNoVars;
    } else if (const RewriteRule* rule = theory.find(tactic.target)) {
        from = &rule->lhs;
        to = &rule->rhs;
        pattern_vars = &rule->pattern_vars;
    } else {
        return Failure{std::string(failure::kUnknownTarget)};
    }
    if (tactic.reversed) std::swap(from, to);

    if (tactic.explicit_args.size() > pattern_vars->size()) return Failure{std::string(failure::kTooManyArgs)};
    Binding binding;
    for (std::size_t i = 0; i < tactic.explicit_args.size(); ++i) {
        const Term& arg = tactic.explicit_args[i];
        for (const auto& v : free_variables(arg))
            if (!state.declares_variable(v)) return Failure{std::string(failure::kUnboundArg)};
        binding.emplace_back((*pattern_vars)[i], arg);
    }

    std::optional<Binding> found = match_pattern(*from, state.goal.lhs, binding);
    if (!found) found = match_pattern(*from, state.goal.rhs, binding);
    if (!found) return Failure{std::string(failure::kNoMatch)};

    const Term instance = substitute(*from, *found);
    const Term replacement = substitute(*to, *found);
    if (!pattern_variables(replacement).empty()) return Failure{std::string(failure::kUnboundRhs)};

    Equation goal{replace_all(state.goal.lhs, instance, replacement),
                  replace_all(state.goal.rhs, instance, replacement)};
    if (goal == state.goal) return Failure{std::string(failure::kNoChange)};
    if (is_tautology(goal)) return ProofFinished{};
    return NewState{ProofState{state.sort, state.variables, state.hypotheses, std::move(goal)}};
}

bool is_tautology(const Equation& goal) { return goal.lhs == goal.rhs; }

}  // namespace navigator
