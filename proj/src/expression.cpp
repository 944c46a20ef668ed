#include "covrel/expression.hpp"

#include "covrel/geometry.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace covrel {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::invalid_argument(message + " at position " + std::to_string(position)), position_(position)
{
}

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Expression run()
    {
        out_.text_ = std::string(text_);
        parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (out_.code_.empty()) fail("empty expression");
        return std::move(out_);
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    void emit(Op op, std::uint32_t arg = 0) { out_.code_.push_back({op, arg}); }

    void parse_expr()
    {
        parse_term();
        for (;;) {
            if (accept('+')) {
                parse_term();
                emit(Op::Add);
            } else if (accept('-')) {
                parse_term();
                emit(Op::Sub);
            } else {
                return;
            }
        }
    }

    void parse_term()
    {
        parse_unary();
        for (;;) {
            if (accept('*')) {
                parse_unary();
                emit(Op::Mul);
            } else if (accept('/')) {
                parse_unary();
                emit(Op::Div);
            } else {
                return;
            }
        }
    }

    void parse_unary()
    {
        if (accept('-')) {
            parse_unary();
            emit(Op::Neg);
        } else if (accept('+')) {
            parse_unary();
        } else {
            parse_power();
        }
    }

    void parse_power()
    {
        parse_primary();
        if (accept('^')) emit(Op::Pow, parse_natural());
    }

    std::uint32_t parse_natural()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a natural exponent");
        std::uint32_t n = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
        if (ec != std::errc{} || n > 64) fail("exponent out of range");
        return n;
    }

    void parse_number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            const std::size_t exp_start = pos_;
            digits();
            if (exp_start == pos_) fail("malformed exponent");
        }
        const auto literal = text_.substr(start, pos_ - start);
        if (literal == ".") fail("malformed number");
        out_.consts_.push_back(Interval::from_decimal(literal));
        emit(Op::Const, static_cast<std::uint32_t>(out_.consts_.size() - 1));
    }

    void parse_primary()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            parse_number();
            return;
        }
        if (accept('(')) {
            parse_expr();
            expect(')');
            return;
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("unexpected '" + std::string(1, c) + "'");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (accept('(')) {
            parse_call(name, start);
            return;
        }
        if (name == "pi") {
            out_.consts_.push_back(Interval::pi());
            emit(Op::Const, static_cast<std::uint32_t>(out_.consts_.size() - 1));
            return;
        }
        auto& names = out_.symbol_names_;
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) it = names.insert(names.end(), name);
        emit(Op::Name, static_cast<std::uint32_t>(it - names.begin()));
    }

    void parse_call(const std::string& name, std::size_t start)
    {
        if (name == "power" || name == "pow") {
            parse_expr();
            expect(',');
            const auto n = parse_natural();
            expect(')');
            emit(Op::Pow, n);
            return;
        }
        static const std::array<std::pair<std::string_view, Op>, 6> unary{{{"sin", Op::Sin},
                                                                           {"cos", Op::Cos},
                                                                           {"sqr", Op::Sqr},
                                                                           {"abs", Op::Abs},
                                                                           {"wrap", Op::Wrap},
                                                                           {"mod2pi", Op::Wrap}}};
        for (const auto& [fname, op] : unary) {
            if (name == fname) {
                parse_expr();
                expect(')');
                emit(op);
                return;
            }
        }
        pos_ = start;
        fail("unknown function '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Expression out_;
};

Expression Expression::parse(std::string_view text) { return ExpressionParser(text).run(); }

namespace {

int arity(std::uint8_t op)
{
    // Matches Expression::Op order: Const, Slot, Name take no operands.
    if (op <= 2) return 0;
    if (op >= 4 && op <= 7) return 2;
    return 1;
}

} // namespace

Expression Expression::compile(std::span<const std::string> slots,
                               const std::map<std::string, Interval>& constants) const
{
    Expression out;
    out.text_ = text_;
    out.symbol_names_ = symbol_names_;
    out.compiled_ = true;

    // Operand stack of the program being built: code index of the
    // instruction producing each value, used for constant folding.
    std::vector<std::size_t> producers;
    auto is_const = [&](std::size_t code_index) { return out.code_[code_index].op == Op::Const; };

    for (const Instr& in : code_) {
        Instr instr = in;
        if (in.op == Op::Const) {
            out.consts_.push_back(consts_[in.arg]);
            instr.arg = static_cast<std::uint32_t>(out.consts_.size() - 1);
        } else if (in.op == Op::Name) {
            const std::string& name = symbol_names_[in.arg];
            auto slot = std::find(slots.begin(), slots.end(), name);
            if (slot != slots.end()) {
                instr = {Op::Slot, static_cast<std::uint32_t>(slot - slots.begin())};
            } else if (auto c = constants.find(name); c != constants.end()) {
                out.consts_.push_back(c->second);
                instr = {Op::Const, static_cast<std::uint32_t>(out.consts_.size() - 1)};
            } else {
                const auto pos = text_.find(name);
                throw ParseError("unknown name '" + name + "' in '" + text_ + "'",
                                 pos == std::string::npos ? 0 : pos);
            }
        }
        const int n = arity(static_cast<std::uint8_t>(instr.op));
        const bool foldable = n > 0 && std::all_of(producers.end() - n, producers.end(), is_const);
        out.code_.push_back(instr);
        if (foldable) {
            // Evaluate the operator on its constant operands once, here.
            Expression tail;
            tail.compiled_ = true;
            const std::size_t first = producers[producers.size() - n];
            for (std::size_t k = first; k < out.code_.size(); ++k) {
                Instr t = out.code_[k];
                if (t.op == Op::Const) {
                    tail.consts_.push_back(out.consts_[t.arg]);
                    t.arg = static_cast<std::uint32_t>(tail.consts_.size() - 1);
                }
                tail.code_.push_back(t);
            }
            tail.max_stack_ = 2;
            const Interval v = tail.eval({});
            out.code_.resize(first);
            out.consts_.push_back(v);
            out.code_.push_back({Op::Const, static_cast<std::uint32_t>(out.consts_.size() - 1)});
            producers.resize(producers.size() - n);
            producers.push_back(first);
        } else {
            producers.resize(producers.size() - n);
            producers.push_back(out.code_.size() - 1);
        }
    }

    std::size_t depth = 0;
    for (const Instr& in : out.code_) {
        depth = depth + 1 - arity(static_cast<std::uint8_t>(in.op));
        out.max_stack_ = std::max(out.max_stack_, depth);
    }
    return out;
}

Interval Expression::eval(std::span<const Interval> slots) const
{
    if (!compiled_) throw std::logic_error("expression '" + text_ + "' evaluated before compile()");
    constexpr std::size_t kInline = 32;
    std::array<Interval, kInline> inline_stack;
    std::vector<Interval> heap_stack;
    Interval* stack = inline_stack.data();
    if (max_stack_ > kInline) {
        heap_stack.resize(max_stack_);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
        case Op::Const: stack[top++] = consts_[in.arg]; break;
        case Op::Slot: stack[top++] = slots[in.arg]; break;
        case Op::Name: throw std::logic_error("unbound name in compiled expression");
        case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
        case Op::Add: --top; stack[top - 1] = stack[top - 1] + stack[top]; break;
        case Op::Sub: --top; stack[top - 1] = stack[top - 1] - stack[top]; break;
        case Op::Mul: --top; stack[top - 1] = stack[top - 1] * stack[top]; break;
        case Op::Div: --top; stack[top - 1] = stack[top - 1] / stack[top]; break;
        case Op::Pow: stack[top - 1] = power(stack[top - 1], in.arg); break;
        case Op::Sin: stack[top - 1] = sin(stack[top - 1]); break;
        case Op::Cos: stack[top - 1] = cos(stack[top - 1]); break;
        case Op::Sqr: stack[top - 1] = sqr(stack[top - 1]); break;
        case Op::Abs: stack[top - 1] = abs(stack[top - 1]); break;
        case Op::Wrap: stack[top - 1] = wrap(stack[top - 1]); break;
        }
    }
    return stack[0];
}

std::vector<std::string> Expression::names() const { return symbol_names_; }

Interval evaluate_constant(std::string_view text, const std::map<std::string, Interval>& constants)
{
    return Expression::parse(text).compile({}, constants).eval({});
}

Interval parse_interval_value(std::string_view text, const std::map<std::string, Interval>& constants)
{
    std::string_view t = text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    if (t.empty() || t.front() != '[') return evaluate_constant(t, constants);
    if (t.back() != ']') throw ParseError("interval value must end with ']'", text.size());
    t = t.substr(1, t.size() - 2);
    const auto comma = t.find(',');
    if (comma == std::string_view::npos) throw ParseError("interval value needs two endpoints", 1);
    const Interval lo = evaluate_constant(t.substr(0, comma), constants);
    const Interval hi = evaluate_constant(t.substr(comma + 1), constants);
    if (lo.lo() > hi.hi()) throw ParseError("interval value has lower endpoint above upper", 1);
    return Interval(lo.lo(), hi.hi());
}

} // namespace covrel
