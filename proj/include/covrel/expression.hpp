#pragma once

#include "covrel/interval.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covrel {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& message, std::size_t position);
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Closed-form expression over intervals, used for maps defined in config
/// files.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' natural)?
///   primary := number | name | name '(' expr (',' natural)? ')' | '(' expr ')'
///
/// Functions: sin, cos, sqr, abs, power(e, n), wrap(e) (reduction modulo
/// 2*pi). The name `pi` is a certified enclosure of pi. Decimal literals are
/// enclosed exactly (Interval::from_decimal), so 1.2 means 12/10.
///
/// Names are bound at compile time: each one is either a variable slot or a
/// constant. Compiled programs are immutable and safe to share.
class Expression {
public:
    static Expression parse(std::string_view text);

    /// Binds variable names to slots and constants to values. Throws
    /// ParseError for names that are neither.
    Expression compile(std::span<const std::string> slots, const std::map<std::string, Interval>& constants) const;

    /// Evaluates a compiled expression; slots must match compile().
    [[nodiscard]] Interval eval(std::span<const Interval> slots) const;

    /// Names referenced by the expression (excluding functions and pi).
    [[nodiscard]] std::vector<std::string> names() const;
    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    [[nodiscard]] bool compiled() const noexcept { return compiled_; }

private:
    enum class Op : std::uint8_t { Const, Slot, Name, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Sqr, Abs, Wrap };
    struct Instr {
        Op op;
        std::uint32_t arg = 0;
    };
    friend class ExpressionParser;

    std::string text_;
    std::vector<Instr> code_;
    std::vector<Interval> consts_;
    std::vector<std::string> symbol_names_;
    std::size_t max_stack_ = 0;
    bool compiled_ = false;
};

/// Parses and evaluates an expression with no variables, e.g. "1/10".
Interval evaluate_constant(std::string_view text, const std::map<std::string, Interval>& constants = {});

/// Constant or "[lo, hi]" with constant endpoints.
Interval parse_interval_value(std::string_view text, const std::map<std::string, Interval>& constants = {});

} // namespace covrel
