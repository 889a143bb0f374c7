#include "navigator/templating.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

#include "navigator/text.hpp"

namespace navigator {

namespace {

constexpr std::string_view kHypothesis = "{hypothesis}";
constexpr std::string_view kUnknown = "{unknown}";

enum class PieceKind { Literal, Var, Hyp, Unknown };

struct Piece {
    PieceKind kind;
    std::string_view literal;
    std::size_t index = 0;
};

std::vector<Piece> split_placeholders(std::string_view text) {
    std::vector<Piece> out;
    std::size_t lit_start = 0;
    std::size_t i = 0;
    auto flush = [&](std::size_t end) {
        if (end > lit_start) out.push_back({PieceKind::Literal, text.substr(lit_start, end - lit_start)});
    };
    while (i < text.size()) {
        if (text[i] != '{') {
            ++i;
            continue;
        }
        const std::string_view rest = text.substr(i);
        if (text::starts_with(rest, kHypothesis)) {
            flush(i);
            out.push_back({PieceKind::Hyp, {}, 0});
            i += kHypothesis.size();
            lit_start = i;
            continue;
        }
        if (text::starts_with(rest, kUnknown)) {
            flush(i);
            out.push_back({PieceKind::Unknown, {}, 0});
            i += kUnknown.size();
            lit_start = i;
            continue;
        }
        if (text::starts_with(rest, "{var")) {
            std::size_t j = 4;
            std::size_t index = 0;
            while (j < rest.size() && rest[j] >= '0' && rest[j] <= '9') {
                index = index * 10 + static_cast<std::size_t>(rest[j] - '0');
                ++j;
            }
            if (j > 4 && j < rest.size() && rest[j] == '}') {
                flush(i);
                out.push_back({PieceKind::Var, {}, index});
                i += j + 1;
                lit_start = i;
                continue;
            }
        }
        ++i;
    }
    flush(text.size());
    return out;
}

// ---------------------------------------------------------------------------
// Tactic tokenization

enum class TokKind { Delim, Arrow, Relation, Symbol, Word };

struct Tok {
    TokKind kind;
    std::size_t begin;
    std::size_t end;
};

constexpr std::string_view kArrows[] = {"←", "<-"};
constexpr std::string_view kRelations[] = {"≤", "≥", "≠", "=", "<", ">"};

bool is_delim(char c) { return c == '[' || c == ']' || c == '(' || c == ')' || c == ','; }

class TacticLexer {
public:
    TacticLexer(std::string_view text, const TemplateVocabulary& vocab) : text_(text) {
        symbols_.assign(vocab.symbols.begin(), vocab.symbols.end());
        std::stable_sort(symbols_.begin(), symbols_.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
    }

    std::vector<Tok> run() {
        std::vector<Tok> out;
        std::size_t i = 0;
        while (i < text_.size()) {
            if (text::is_space(text_[i])) {
                ++i;
                continue;
            }
            if (auto t = special_at(i)) {
                out.push_back(*t);
                i = t->end;
                continue;
            }
            const std::size_t start = i;
            while (i < text_.size() && !text::is_space(text_[i]) && !special_at(i)) ++i;
            out.push_back({TokKind::Word, start, i});
        }
        return out;
    }

private:
    std::optional<Tok> special_at(std::size_t i) const {
        const std::string_view rest = text_.substr(i);
        for (auto a : kArrows)
            if (text::starts_with(rest, a)) return Tok{TokKind::Arrow, i, i + a.size()};
        if (is_delim(text_[i])) return Tok{TokKind::Delim, i, i + 1};
        if (text::starts_with(rest, ":=")) return std::nullopt;
        for (const auto& s : symbols_)
            if (text::starts_with(rest, s)) return Tok{TokKind::Symbol, i, i + s.size()};
        for (auto r : kRelations)
            if (text::starts_with(rest, r)) return Tok{TokKind::Relation, i, i + r.size()};
        return std::nullopt;
    }

    std::string_view text_;
    std::vector<std::string> symbols_;
};

bool contains(const std::vector<std::string>& v, std::string_view s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TacticTemplate TacticTemplate::from_text(std::string text, std::int64_t frequency) {
    TacticTemplate t;
    std::vector<std::size_t> order;
    for (const auto& p : split_placeholders(text)) {
        switch (p.kind) {
            case PieceKind::Var:
                if (std::find(order.begin(), order.end(), p.index) == order.end()) {
                    if (p.index != order.size())
                        throw std::invalid_argument("template '" + text +
                                                    "': {varK} indices must appear in order from 0");
                    order.push_back(p.index);
                }
                break;
            case PieceKind::Hyp:
                ++t.hyp_arity;
                break;
            case PieceKind::Unknown:
                t.has_unknown = true;
                break;
            case PieceKind::Literal:
                break;
        }
    }
    if (frequency < 1) throw std::invalid_argument("template frequency must be at least 1");
    t.var_arity = order.size();
    t.frequency = frequency;
    t.text = std::move(text);
    return t;
}

StateContext context_from_pretty(std::string_view pretty) {
    StateContext ctx;
    for (const auto raw : text::split_lines(pretty)) {
        const std::string_view line = text::trim(raw);
        if (text::starts_with(line, "⊢") || text::starts_with(line, "|-")) break;
        const std::size_t colon = line.find(" : ");
        if (colon == std::string_view::npos) continue;
        const std::string_view type = line.substr(colon + 3);
        bool relation = false;
        for (auto r : kRelations) relation = relation || type.find(r) != std::string_view::npos;
        relation = relation || type.find("∣") != std::string_view::npos;
        auto& target = relation ? ctx.hypotheses : ctx.variables;
        for (const auto name : text::split_whitespace(line.substr(0, colon)))
            if (!contains(ctx.variables, name) && !contains(ctx.hypotheses, name)) target.emplace_back(name);
    }
    return ctx;
}

TemplateVocabulary TemplateVocabulary::from_theory(const Theory& theory) {
    TemplateVocabulary v;
    for (const auto& r : theory.rules()) v.rule_names.insert(r.name);
    for (const auto& s : theory.signature().operator_symbols()) v.symbols.insert(s);
    for (const auto& c : theory.signature().constants()) v.constants.insert(c);
    return v;
}

Templatized templatize(std::string_view tactic, const StateContext& context, const TemplateVocabulary& vocab) {
    if (text::trim(tactic).empty()) throw std::invalid_argument("empty tactic");
    const std::vector<Tok> toks = TacticLexer(tactic, vocab).run();

    // Inline relations: a maximal run of non-delimiter tokens containing a
    // relation becomes one {hypothesis}, absorbing enclosing parentheses and
    // excluding a leading tactic head or arrow.
    struct Span {
        std::size_t first;
        std::size_t last;  // inclusive token indices
    };
    std::vector<Span> hyp_spans;
    for (std::size_t i = 0; i < toks.size();) {
        if (toks[i].kind == TokKind::Delim) {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool relation = false;
        while (j < toks.size() && toks[j].kind != TokKind::Delim) {
            relation = relation || toks[j].kind == TokKind::Relation;
            ++j;
        }
        if (relation) {
            std::size_t first = i;
            if (first == 0 && toks[0].kind == TokKind::Word) ++first;
            while (first < j && toks[first].kind == TokKind::Arrow) ++first;
            std::size_t last = j - 1;
            if (first > 0 && j < toks.size() && first == i) {
                const char open = tactic[toks[first - 1].begin];
                const char close = tactic[toks[j].begin];
                if (open == '(' && close == ')') {
                    --first;
                    ++last;
                }
            }
            if (first <= last) hyp_spans.push_back({first, last});
        }
        i = j;
    }

    Templatized out;
    std::string text;
    std::size_t copied = 0;
    auto emit = [&](std::size_t begin, std::size_t end, std::string_view placeholder) {
        text.append(tactic.substr(copied, begin - copied));
        text.append(placeholder);
        copied = end;
    };

    std::size_t span_idx = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (span_idx < hyp_spans.size() && hyp_spans[span_idx].first == i) {
            const Span s = hyp_spans[span_idx++];
            const std::size_t begin = toks[s.first].begin;
            const std::size_t end = toks[s.last].end;
            out.binding.hyps.emplace_back(tactic.substr(begin, end - begin));
            emit(begin, end, kHypothesis);
            i = s.last;
            continue;
        }
        const Tok& t = toks[i];
        if (t.kind != TokKind::Word) continue;
        const std::string_view word = tactic.substr(t.begin, t.end - t.begin);
        if (i == 0 && vocab.tactic_heads.count(word)) continue;
        if (contains(context.variables, word)) {
            auto it = std::find(out.binding.vars.begin(), out.binding.vars.end(), word);
            const std::size_t k = static_cast<std::size_t>(it - out.binding.vars.begin());
            if (it == out.binding.vars.end()) out.binding.vars.emplace_back(word);
            emit(t.begin, t.end, "{var" + std::to_string(k) + "}");
            continue;
        }
        if (contains(context.hypotheses, word)) {
            out.binding.hyps.emplace_back(word);
            emit(t.begin, t.end, kHypothesis);
            continue;
        }
        if (vocab.tactic_heads.count(word) || vocab.rule_names.count(word) || vocab.constants.count(word) ||
            vocab.symbols.count(word) || is_numeral(word))
            continue;
        out.binding.unknowns.emplace_back(word);
        emit(t.begin, t.end, kUnknown);
    }
    text.append(tactic.substr(copied));
    out.tmpl = TacticTemplate::from_text(std::move(text));
    return out;
}

std::vector<std::string> instantiate(const TacticTemplate& tmpl, const StateContext& context, std::size_t cap) {
    std::vector<std::string> out;
    if (tmpl.has_unknown || cap == 0) return out;
    const std::size_t nv = context.variables.size();
    const std::size_t nh = context.hypotheses.size();
    if ((tmpl.var_arity > 0 && nv == 0) || (tmpl.hyp_arity > 0 && nh == 0)) return out;

    const auto pieces = split_placeholders(tmpl.text);
    const std::size_t slots = tmpl.var_arity + tmpl.hyp_arity;
    std::vector<std::size_t> digit(slots, 0);
    auto radix = [&](std::size_t slot) { return slot < tmpl.var_arity ? nv : nh; };

    while (out.size() < cap) {
        std::string s;
        std::size_t hyp_seen = 0;
        for (const auto& p : pieces) {
            switch (p.kind) {
                case PieceKind::Literal: s.append(p.literal); break;
                case PieceKind::Var: s.append(context.variables[digit[p.index]]); break;
                case PieceKind::Hyp: s.append(context.hypotheses[digit[tmpl.var_arity + hyp_seen++]]); break;
                case PieceKind::Unknown: break;
            }
        }
        out.push_back(std::move(s));
        // Odometer with slot 0 most significant.
        std::size_t k = slots;
        while (k > 0) {
            --k;
            if (++digit[k] < radix(k)) break;
            digit[k] = 0;
            if (k == 0) return out;
        }
        if (slots == 0) break;
    }
    return out;
}

std::string instantiate_with(const TacticTemplate& tmpl, const TemplateBinding& binding) {
    std::string s;
    std::size_t hyp_seen = 0;
    std::size_t unknown_seen = 0;
    for (const auto& p : split_placeholders(tmpl.text)) {
        switch (p.kind) {
            case PieceKind::Literal: s.append(p.literal); break;
            case PieceKind::Var: s.append(binding.vars.at(p.index)); break;
            case PieceKind::Hyp: s.append(binding.hyps.at(hyp_seen++)); break;
            case PieceKind::Unknown: s.append(binding.unknowns.at(unknown_seen++)); break;
        }
    }
    return s;
}

std::vector<TacticTemplate> build_template_corpus(std::span<const CorpusPair> pairs, const TemplateVocabulary& vocab) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& p : pairs) ++counts[templatize(p.tactic, context_from_pretty(p.state), vocab).tmpl.text];
    std::vector<TacticTemplate> out;
    out.reserve(counts.size());
    for (auto& [text, n] : counts) out.push_back(TacticTemplate::from_text(text, n));
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
    return out;
}

void write_template_corpus(const std::filesystem::path& path, std::span<const TacticTemplate> templates) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& t : templates) {
        nlohmann::ordered_json j;
        j["template"] = t.text;
        j["var_arity"] = t.var_arity;
        j["hyp_arity"] = t.hyp_arity;
        j["frequency"] = t.frequency;
        out << j.dump() << '\n';
    }
}

std::vector<TacticTemplate> read_template_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open template corpus " + path.string());
    std::vector<TacticTemplate> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            TacticTemplate t = TacticTemplate::from_text(j.at("template").get<std::string>(),
                                                         j.value("frequency", std::int64_t{1}));
            if (j.contains("var_arity") && j["var_arity"].get<std::size_t>() != t.var_arity)
                throw std::invalid_argument("var_arity disagrees with the template text");
            if (j.contains("hyp_arity") && j["hyp_arity"].get<std::size_t>() != t.hyp_arity)
                throw std::invalid_argument("hyp_arity disagrees with the template text");
            out.push_back(std::move(t));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace navigator
