#include "navigator/term.hpp"

#include <algorithm>
#include <cassert>

#include "navigator/utf8.hpp"

namespace navigator {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), detail_(message), offset_(offset) {}

// ---------------------------------------------------------------------------
// Signature

namespace {

constexpr std::string_view kInverse = "⁻¹";
constexpr std::string_view kInverseAlias = "^-1";

}  // namespace

void Signature::check_fresh(std::string_view symbol) const {
    if (symbol.empty()) throw std::invalid_argument("empty signature symbol");
    if (symbol == "=" || symbol == "(" || symbol == ")")
        throw std::invalid_argument("reserved symbol '" + std::string(symbol) + "'");
    if (find_binary(symbol) || is_postfix(symbol) ||
        std::find(constants_.begin(), constants_.end(), symbol) != constants_.end())
        throw std::invalid_argument("duplicate signature symbol '" + std::string(symbol) + "'");
}

void Signature::add_binary(std::string symbol, int precedence, bool left_assoc) {
    check_fresh(symbol);
    if (precedence <= 0) throw std::invalid_argument("precedence must be positive for '" + symbol + "'");
    for (const auto& op : binary_) {
        if (op.precedence == precedence && op.left_assoc != left_assoc)
            throw std::invalid_argument("operators '" + op.symbol + "' and '" + symbol +
                                        "' share a precedence but not an associativity");
    }
    binary_.push_back({std::move(symbol), precedence, left_assoc});
}

void Signature::add_postfix(std::string symbol) {
    check_fresh(symbol);
    postfix_.push_back(std::move(symbol));
}

void Signature::add_constant(std::string symbol) {
    check_fresh(symbol);
    constants_.push_back(std::move(symbol));
}

const BinaryOperator* Signature::find_binary(std::string_view symbol) const {
    for (const auto& op : binary_)
        if (op.symbol == symbol) return &op;
    return nullptr;
}

bool Signature::is_postfix(std::string_view symbol) const {
    return std::find(postfix_.begin(), postfix_.end(), symbol) != postfix_.end();
}

bool Signature::is_constant(std::string_view symbol) const {
    return is_numeral(symbol) || std::find(constants_.begin(), constants_.end(), symbol) != constants_.end();
}

std::vector<std::string> Signature::operator_symbols() const {
    std::vector<std::string> out;
    for (const auto& op : binary_) out.push_back(op.symbol);
    for (const auto& p : postfix_) out.push_back(p);
    if (is_postfix(kInverse)) out.emplace_back(kInverseAlias);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

Signature group_signature() {
    Signature sig;
    sig.set_sort("G");
    sig.add_binary("*", 70, true);
    sig.add_postfix(std::string(kInverse));
    sig.add_constant("1");
    return sig;
}

bool is_numeral(std::string_view text) {
    return !text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// ---------------------------------------------------------------------------
// Term

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Term Term::make(TermKind kind, std::string symbol, std::vector<Term> children) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(kind) ^ hash_string(symbol));
    std::size_t size = 1;
    for (const auto& c : children) {
        h = mix(h ^ c.hash());
        size += c.size();
    }
    return Term(std::make_shared<const Node>(Node{kind, std::move(symbol), std::move(children), h, size}));
}

Term Term::variable(std::string name) { return make(TermKind::Variable, std::move(name), {}); }
Term Term::constant(std::string symbol) { return make(TermKind::Constant, std::move(symbol), {}); }
Term Term::pattern_var(std::string name) { return make(TermKind::PatternVar, std::move(name), {}); }

Term Term::binary(std::string symbol, Term lhs, Term rhs) {
    return make(TermKind::Binary, std::move(symbol), {std::move(lhs), std::move(rhs)});
}

Term Term::postfix(std::string symbol, Term operand) {
    return make(TermKind::Postfix, std::move(symbol), {std::move(operand)});
}

const Term& Term::lhs() const {
    if (kind() != TermKind::Binary) throw std::logic_error("lhs() on non-binary term");
    return node_->children[0];
}

const Term& Term::rhs() const {
    if (kind() != TermKind::Binary) throw std::logic_error("rhs() on non-binary term");
    return node_->children[1];
}

const Term& Term::operand() const {
    if (kind() != TermKind::Postfix) throw std::logic_error("operand() on non-postfix term");
    return node_->children[0];
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind() || a.symbol() != b.symbol())
        return false;
    const auto& ca = a.node_->children;
    const auto& cb = b.node_->children;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (!(ca[i] == cb[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Number, LParen, RParen, Binary, Postfix, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

bool is_ident_start_ascii(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_continue_ascii(char c) {
    return is_ident_start_ascii(c) || (c >= '0' && c <= '9') || c == '\'' || c == '.';
}

class Lexer {
public:
    Lexer(std::string_view text, const Signature& sig) : text_(text), sig_(sig), symbols_(sig.operator_symbols()) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) break;
            out.push_back(next());
        }
        out.push_back({Tok::End, "", text_.size()});
        return out;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    std::optional<std::string_view> symbol_at(std::size_t at) const {
        for (const auto& s : symbols_)
            if (text_.substr(at, s.size()) == s) return std::string_view(s);
        return std::nullopt;
    }

    bool ident_char_at(std::size_t at, std::size_t& width) const {
        const char c = text_[at];
        if (static_cast<unsigned char>(c) < 0x80) {
            width = 1;
            return is_ident_continue_ascii(c);
        }
        if (symbol_at(at)) return false;
        const auto cp = utf8::decode(text_, at, width);
        return cp && utf8::is_identifier_letter(*cp);
    }

    Token next() {
        const std::size_t start = pos_;
        const char c = text_[pos_];
        if (c == '(') return {Tok::LParen, std::string(text_.substr(pos_++, 1)), start};
        if (c == ')') return {Tok::RParen, std::string(text_.substr(pos_++, 1)), start};
        if (auto sym = symbol_at(pos_)) {
            pos_ += sym->size();
            if (*sym == kInverseAlias) return {Tok::Postfix, std::string(kInverse), start};
            if (sig_.is_postfix(*sym)) return {Tok::Postfix, std::string(*sym), start};
            return {Tok::Binary, std::string(*sym), start};
        }
        if (c == '=') {
            ++pos_;
            return {Tok::Equals, "=", start};
        }
        if (c >= '0' && c <= '9') {
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            return {Tok::Number, std::string(text_.substr(start, pos_ - start)), start};
        }
        std::size_t width = 0;
        const bool ascii_start = is_ident_start_ascii(c);
        if (ascii_start || (static_cast<unsigned char>(c) >= 0x80 && ident_char_at(pos_, width))) {
            pos_ += ascii_start ? 1 : width;
            while (pos_ < text_.size() && ident_char_at(pos_, width)) pos_ += width;
            return {Tok::Ident, std::string(text_.substr(start, pos_ - start)), start};
        }
        std::size_t w = 1;
        const auto cp = utf8::decode(text_, pos_, w);
        const std::string shown = cp ? std::string(text_.substr(pos_, w)) : std::string("\\x") + std::to_string(+static_cast<unsigned char>(c));
        throw ParseError("unknown symbol '" + shown + "'", start);
    }

    std::string_view text_;
    const Signature& sig_;
    std::vector<std::string> symbols_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser (precedence climbing)

class Parser {
public:
    Parser(std::vector<Token> tokens, const Signature& sig, ParseMode mode)
        : toks_(std::move(tokens)), sig_(sig), mode_(mode) {}

    Term expression(int min_prec = 0) {
        Term lhs = postfix_expression();
        while (peek().kind == Tok::Binary) {
            const BinaryOperator* op = sig_.find_binary(peek().text);
            assert(op);
            if (op->precedence < min_prec) break;
            advance();
            const int next_min = op->left_assoc ? op->precedence + 1 : op->precedence;
            Term rhs = expression(next_min);
            lhs = Term::binary(op->symbol, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Term postfix_expression() {
        Term t = primary();
        while (peek().kind == Tok::Postfix) t = Term::postfix(advance().text, std::move(t));
        return t;
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    void expect_end() {
        if (peek().kind != Tok::End) throw ParseError("unexpected token '" + peek().text + "'", peek().offset);
    }

    void expect(Tok kind, std::string_view what) {
        if (peek().kind != kind) {
            if (peek().kind == Tok::End) throw ParseError("expected " + std::string(what) + " before end of input", peek().offset);
            throw ParseError("expected " + std::string(what) + ", found '" + peek().text + "'", peek().offset);
        }
        advance();
    }

private:
    Term primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Ident: {
                advance();
                if (sig_.is_constant(t.text)) return Term::constant(t.text);
                if (mode_ == ParseMode::Pattern) return Term::pattern_var(t.text);
                return Term::variable(t.text);
            }
            case Tok::Number:
                advance();
                return Term::constant(t.text);
            case Tok::LParen: {
                advance();
                Term inner = expression();
                if (peek().kind != Tok::RParen) throw ParseError("unbalanced parentheses", peek().offset);
                advance();
                return inner;
            }
            case Tok::RParen:
                throw ParseError("unbalanced parentheses", t.offset);
            case Tok::End:
                throw ParseError("expected operand before end of input", t.offset);
            default:
                throw ParseError("dangling operator '" + t.text + "'", t.offset);
        }
    }

    std::vector<Token> toks_;
    const Signature& sig_;
    ParseMode mode_;
    std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const Signature& sig, ParseMode mode) {
    Parser p(Lexer(text, sig).run(), sig, mode);
    if (p.peek().kind == Tok::End) throw ParseError("empty term", 0);
    Term t = p.expression();
    if (p.peek().kind == Tok::RParen) throw ParseError("unbalanced parentheses", p.peek().offset);
    p.expect_end();
    return t;
}

std::vector<Term> parse_term_sequence(std::string_view text, const Signature& sig) {
    Parser p(Lexer(text, sig).run(), sig, ParseMode::Ground);
    std::vector<Term> out;
    while (p.peek().kind != Tok::End) {
        if (p.peek().kind == Tok::Binary)
            throw ParseError("dangling operator '" + p.peek().text + "'", p.peek().offset);
        out.push_back(p.postfix_expression());
    }
    return out;
}

Equation parse_equation(std::string_view text, const Signature& sig, ParseMode mode) {
    Parser p(Lexer(text, sig).run(), sig, mode);
    if (p.peek().kind == Tok::End) throw ParseError("empty equation", 0);
    Term lhs = p.expression();
    p.expect(Tok::Equals, "'='");
    Term rhs = p.expression();
    if (p.peek().kind == Tok::RParen) throw ParseError("unbalanced parentheses", p.peek().offset);
    p.expect_end();
    return {std::move(lhs), std::move(rhs)};
}

// ---------------------------------------------------------------------------
// Printer

namespace {

const BinaryOperator& require_binary(const Signature& sig, const std::string& symbol) {
    const BinaryOperator* op = sig.find_binary(symbol);
    if (!op) throw std::invalid_argument("operator '" + symbol + "' not in signature");
    return *op;
}

void print_into(const Term& t, const Signature& sig, std::string& out) {
    switch (t.kind()) {
        case TermKind::Variable:
        case TermKind::Constant:
        case TermKind::PatternVar:
            out += t.symbol();
            return;
        case TermKind::Postfix: {
            const bool paren = t.operand().kind() == TermKind::Binary;
            if (paren) out += '(';
            print_into(t.operand(), sig, out);
            if (paren) out += ')';
            out += t.symbol();
            return;
        }
        case TermKind::Binary: {
            const BinaryOperator& op = require_binary(sig, t.symbol());
            auto needs_paren = [&](const Term& child, bool is_left) {
                if (child.kind() != TermKind::Binary) return false;
                const int p = require_binary(sig, child.symbol()).precedence;
                if (p != op.precedence) return p < op.precedence;
                return is_left ? !op.left_assoc : op.left_assoc;
            };
            const bool pl = needs_paren(t.lhs(), true);
            const bool pr = needs_paren(t.rhs(), false);
            if (pl) out += '(';
            print_into(t.lhs(), sig, out);
            if (pl) out += ')';
            out += ' ';
            out += t.symbol();
            out += ' ';
            if (pr) out += '(';
            print_into(t.rhs(), sig, out);
            if (pr) out += ')';
            return;
        }
    }
}

void collect(const Term& t, TermKind kind, std::vector<std::string>& out) {
    if (t.kind() == kind) {
        if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
        return;
    }
    if (t.kind() == TermKind::Binary) {
        collect(t.lhs(), kind, out);
        collect(t.rhs(), kind, out);
    } else if (t.kind() == TermKind::Postfix) {
        collect(t.operand(), kind, out);
    }
}

}  // namespace

std::string print_term(const Term& t, const Signature& sig) {
    std::string out;
    print_into(t, sig, out);
    return out;
}

std::string print_equation(const Equation& eq, const Signature& sig) {
    return print_term(eq.lhs, sig) + " = " + print_term(eq.rhs, sig);
}

std::vector<std::string> free_variables(const Term& t) {
    std::vector<std::string> out;
    collect(t, TermKind::Variable, out);
    return out;
}

std::vector<std::string> pattern_variables(const Term& t) {
    std::vector<std::string> out;
    collect(t, TermKind::PatternVar, out);
    return out;
}

}  // namespace navigator
