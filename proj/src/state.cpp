#include "navigator/state.hpp"

#include <algorithm>
#include <set>

#include "navigator/text.hpp"

namespace navigator {

const Hypothesis* ProofState::find_hypothesis(std::string_view name) const {
    for (const auto& h : hypotheses)
        if (h.name == name) return &h;
    return nullptr;
}

bool ProofState::declares_variable(std::string_view name) const {
    return std::find(variables.begin(), variables.end(), name) != variables.end();
}

namespace {

void check_ground(const Term& t, const ProofState& state, std::string_view where) {
    if (!pattern_variables(t).empty())
        throw std::invalid_argument("pattern variable in " + std::string(where));
    for (const auto& v : free_variables(t))
        if (!state.declares_variable(v))
            throw std::invalid_argument("undeclared variable '" + v + "' in " + std::string(where));
}

bool has_relation(std::string_view text) {
    return text.find('=') != std::string_view::npos;
}

}  // namespace

void validate_state(const ProofState& state) {
    std::set<std::string_view> names;
    for (const auto& v : state.variables)
        if (!names.insert(v).second) throw std::invalid_argument("duplicate variable '" + v + "'");
    for (const auto& h : state.hypotheses) {
        if (!names.insert(h.name).second) throw std::invalid_argument("duplicate hypothesis name '" + h.name + "'");
        check_ground(h.lhs, state, "hypothesis " + h.name);
        check_ground(h.rhs, state, "hypothesis " + h.name);
    }
    check_ground(state.goal.lhs, state, "goal");
    check_ground(state.goal.rhs, state, "goal");
}

ProofState parse_state(std::string_view text, const Signature& sig) {
    std::string sort;
    std::vector<std::string> variables;
    std::vector<Hypothesis> hypotheses;
    std::optional<Equation> goal;

    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        const std::string_view raw = text.substr(line_start, line_end - line_start);
        const std::size_t base = line_start;
        line_start = line_end + 1;

        const std::string_view line = text::trim(raw);
        if (line.empty()) continue;
        const std::size_t line_offset = base + static_cast<std::size_t>(line.data() - raw.data());
        if (goal) throw ParseError("content after goal line", line_offset);

        std::size_t marker = 0;
        if (text::starts_with(line, "⊢")) marker = std::string_view("⊢").size();
        else if (text::starts_with(line, "|-")) marker = 2;
        if (marker) {
            try {
                goal = parse_equation(line.substr(marker), sig);
            } catch (const ParseError& e) {
                throw ParseError(e.detail(), line_offset + marker + e.offset());
            }
            continue;
        }

        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected ':' in state line", line_offset);
        const auto names = text::split_whitespace(line.substr(0, colon));
        if (names.empty()) throw ParseError("missing name before ':'", line_offset);
        const std::string_view rest = line.substr(colon + 1);
        if (has_relation(rest)) {
            Equation eq = [&] {
                try {
                    return parse_equation(rest, sig);
                } catch (const ParseError& e) {
                    throw ParseError(e.detail(), line_offset + colon + 1 + e.offset());
                }
            }();
            for (const auto& n : names) hypotheses.push_back({std::string(n), eq.lhs, eq.rhs});
        } else {
            const std::string_view this_sort = text::trim(rest);
            if (this_sort.empty()) throw ParseError("missing sort after ':'", line_offset + colon + 1);
            if (!sort.empty() && sort != this_sort)
                throw ParseError("variables of different sorts ('" + sort + "' and '" + std::string(this_sort) + "')",
                                 line_offset);
            if (!hypotheses.empty()) throw ParseError("variable line after hypotheses", line_offset);
            sort = std::string(this_sort);
            for (const auto& n : names) variables.emplace_back(n);
        }
    }
    if (!goal) throw ParseError("missing goal line", text.size());
    if (sort.empty()) sort = sig.sort_name();
    ProofState state{std::move(sort), std::move(variables), std::move(hypotheses), std::move(*goal)};
    try {
        validate_state(state);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
    return state;
}

std::string print_state(const ProofState& state, const Signature& sig) {
    std::string out;
    if (!state.variables.empty()) {
        for (const auto& v : state.variables) {
            out += v;
            out += ' ';
        }
        out += ": ";
        out += state.sort;
        out += '\n';
    }
    for (const auto& h : state.hypotheses) {
        out += h.name;
        out += " : ";
        out += print_equation({h.lhs, h.rhs}, sig);
        out += '\n';
    }
    out += "⊢ ";
    out += print_equation(state.goal, sig);
    return out;
}

CanonicalKey canonical_key(const ProofState& state, const Signature& sig) {
    return {print_state(state, sig)};
}

// ---------------------------------------------------------------------------
// Theorem headers

TheoremHeader parse_theorem(std::string_view text, const Signature& sig) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && text::is_space(text[pos])) ++pos;
    };
    auto read_word = [&] {
        const std::size_t start = pos;
        while (pos < text.size() && !text::is_space(text[pos]) && text[pos] != '(' && text[pos] != ':') ++pos;
        return text.substr(start, pos - start);
    };

    skip_ws();
    const std::size_t kw_at = pos;
    const std::string_view keyword = read_word();
    if (keyword != "theorem" && keyword != "lemma" && keyword != "example")
        throw ParseError("expected 'theorem'", kw_at);
    std::string name = "example";
    if (keyword != "example") {
        skip_ws();
        const std::size_t name_at = pos;
        name = std::string(read_word());
        if (name.empty()) throw ParseError("missing theorem name", name_at);
    }

    std::string sort;
    std::vector<std::string> variables;
    std::vector<Hypothesis> hypotheses;

    while (true) {
        skip_ws();
        if (pos >= text.size()) throw ParseError("missing goal", pos);
        const char c = text[pos];
        if (c == '{' || c == '[') throw ParseError("unsupported binder", pos);
        if (c != '(') break;
        // `(names : type)`; a group without a colon starts a colon-less goal.
        const std::size_t open = pos;
        int depth = 0;
        std::size_t close = std::string_view::npos;
        for (std::size_t i = pos; i < text.size(); ++i) {
            if (text[i] == '(') ++depth;
            else if (text[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close == std::string_view::npos) throw ParseError("unbalanced parentheses", open);
        const std::string_view inner = text.substr(open + 1, close - open - 1);
        const std::size_t colon = inner.find(':');
        if (colon == std::string_view::npos) break;  // not a binder: goal without a colon
        const auto names = text::split_whitespace(inner.substr(0, colon));
        if (names.empty()) throw ParseError("missing binder name", open + 1);
        const std::string_view type = inner.substr(colon + 1);
        const std::size_t type_at = open + 1 + colon + 1;
        if (has_relation(type)) {
            Equation eq = [&] {
                try {
                    return parse_equation(type, sig);
                } catch (const ParseError& e) {
                    throw ParseError(e.detail(), type_at + e.offset());
                }
            }();
            for (const auto& n : names) hypotheses.push_back({std::string(n), eq.lhs, eq.rhs});
        } else {
            const std::string_view this_sort = text::trim(type);
            if (this_sort.empty()) throw ParseError("missing sort", type_at);
            if (!sort.empty() && sort != this_sort) throw ParseError("binders of different sorts", open);
            sort = std::string(this_sort);
            for (const auto& n : names) variables.emplace_back(n);
        }
        pos = close + 1;
    }

    if (text.substr(pos, 2) != ":=" && pos < text.size() && text[pos] == ':') ++pos;
    std::size_t goal_end = text.find(":=", pos);
    if (goal_end == std::string_view::npos) goal_end = text.size();
    const std::string_view goal_text = text.substr(pos, goal_end - pos);
    if (text::trim(goal_text).empty()) throw ParseError("missing goal", pos);

    Equation goal = [&] {
        try {
            return parse_equation(goal_text, sig);
        } catch (const ParseError& e) {
            throw ParseError(e.detail(), pos + e.offset());
        }
    }();
    if (sort.empty()) sort = sig.sort_name();
    ProofState state{std::move(sort), std::move(variables), std::move(hypotheses), std::move(goal)};
    try {
        validate_state(state);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), pos);
    }
    return {std::move(name), std::move(state)};
}

}  // namespace navigator
