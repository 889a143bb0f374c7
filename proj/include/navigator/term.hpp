#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace navigator {

/// Thrown for lexing and parsing failures. `offset` is the byte offset into
/// the input where the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset);

    std::size_t offset() const noexcept { return offset_; }
    /// The message without the offset suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
};

struct BinaryOperator {
    std::string symbol;
    int precedence = 0;
    bool left_assoc = true;
};

/// The operator and constant vocabulary terms are parsed against.
///
/// Numerals (`0`, `2`, `17`, ...) are always accepted as constants even when
/// not declared. Operators sharing a precedence level must share an
/// associativity, otherwise mixed chains would have no unique parse.
class Signature {
public:
    void add_binary(std::string symbol, int precedence, bool left_assoc = true);
    void add_postfix(std::string symbol);
    void add_constant(std::string symbol);
    void set_sort(std::string sort) { sort_ = std::move(sort); }

    const BinaryOperator* find_binary(std::string_view symbol) const;
    bool is_postfix(std::string_view symbol) const;
    bool is_constant(std::string_view symbol) const;

    const std::vector<BinaryOperator>& binary_ops() const { return binary_; }
    const std::vector<std::string>& postfix_ops() const { return postfix_; }
    const std::vector<std::string>& constants() const { return constants_; }
    const std::string& sort_name() const { return sort_; }

    /// Every operator symbol plus the accepted ASCII aliases, longest first.
    std::vector<std::string> operator_symbols() const;

private:
    void check_fresh(std::string_view symbol) const;

    std::vector<BinaryOperator> binary_;
    std::vector<std::string> postfix_;
    std::vector<std::string> constants_;
    std::string sort_;
};

/// `*`, `⁻¹`, `1` over sort `G`.
Signature group_signature();

/// True for a non-empty string of ASCII digits.
bool is_numeral(std::string_view text);

enum class TermKind : std::uint8_t { Variable, Constant, Binary, Postfix, PatternVar };

/// Immutable term tree with structural sharing. Copies are cheap.
class Term {
public:
    static Term variable(std::string name);
    static Term constant(std::string symbol);
    static Term pattern_var(std::string name);
    static Term binary(std::string symbol, Term lhs, Term rhs);
    static Term postfix(std::string symbol, Term operand);

    TermKind kind() const { return node_->kind; }
    /// Variable/pattern name, constant symbol, or operator symbol.
    const std::string& symbol() const { return node_->symbol; }
    const Term& lhs() const;
    const Term& rhs() const;
    const Term& operand() const;
    std::uint64_t hash() const { return node_->hash; }
    std::size_t size() const { return node_->size; }

    bool is_leaf() const { return node_->kind != TermKind::Binary && node_->kind != TermKind::Postfix; }
    bool same_node(const Term& other) const { return node_ == other.node_; }

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node {
        TermKind kind;
        std::string symbol;
        std::vector<Term> children;
        std::uint64_t hash;
        std::size_t size;
    };

    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Term make(TermKind kind, std::string symbol, std::vector<Term> children);

    std::shared_ptr<const Node> node_;
};

enum class ParseMode {
    /// Identifiers are variables.
    Ground,
    /// Identifiers that are not declared constants are pattern variables.
    Pattern,
};

Term parse_term(std::string_view text, const Signature& sig, ParseMode mode = ParseMode::Ground);

/// Parses a whitespace-separated sequence of argument terms, as in the
/// arguments of `mul_comm a b⁻¹ (a * b)`. Each argument is an atom followed by
/// any postfix operators; binary operators must be parenthesized.
std::vector<Term> parse_term_sequence(std::string_view text, const Signature& sig);

/// Minimal-parentheses rendering with single spaces around binary operators.
std::string print_term(const Term& t, const Signature& sig);

/// Free variable names in first-occurrence (pre-order) order.
std::vector<std::string> free_variables(const Term& t);
/// Pattern variable names in first-occurrence (pre-order) order.
std::vector<std::string> pattern_variables(const Term& t);

struct Equation {
    Term lhs;
    Term rhs;

    friend bool operator==(const Equation&, const Equation&) = default;
};

/// Parses `lhs = rhs`.
Equation parse_equation(std::string_view text, const Signature& sig, ParseMode mode = ParseMode::Ground);
std::string print_equation(const Equation& eq, const Signature& sig);

}  // namespace navigator
