#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "topodyn/core/errors.hpp"
#include "topodyn/core/format.hpp"
#include "topodyn/core/spaces.hpp"

namespace topodyn::cli {

/// Compiled user map expression over x and y.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := number | 'x' | 'y' | 'pi' | ('mod1' | 'abs') '(' expr ')' | '(' expr ')'
class Expression {
public:
    enum class Op { push, load_x, load_y, add, sub, mul, neg, mod1, abs };

    struct Instr {
        Op op;
        double value = 0.0;
    };

    [[nodiscard]] double operator()(double x, double y = 0.0) const
    {
        double stack[64];
        std::size_t top = 0;
        for (const auto& in : code_) {
            switch (in.op) {
            case Op::push: stack[top++] = in.value; break;
            case Op::load_x: stack[top++] = x; break;
            case Op::load_y: stack[top++] = y; break;
            case Op::add: --top; stack[top - 1] += stack[top]; break;
            case Op::sub: --top; stack[top - 1] -= stack[top]; break;
            case Op::mul: --top; stack[top - 1] *= stack[top]; break;
            case Op::neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::mod1: stack[top - 1] = mod1(stack[top - 1]); break;
            case Op::abs: stack[top - 1] = std::fabs(stack[top - 1]); break;
            }
        }
        return stack[0];
    }

    [[nodiscard]] bool uses_y() const noexcept { return uses_y_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    /// `line` and `column` locate the first character of `text` for error reports.
    static Expression parse(std::string_view text, std::size_t line = 1, std::size_t column = 1)
    {
        Parser p{text, line, column, {}, 0, 0, 0, false};
        p.skip();
        if (p.pos == text.size()) {
            p.fail("empty expression");
        }
        p.expr();
        p.skip();
        if (p.pos != text.size()) {
            p.fail(std::string("unexpected '") + text[p.pos] + "'");
        }
        Expression e;
        e.code_ = std::move(p.code);
        e.uses_y_ = p.uses_y;
        e.source_ = std::string(text);
        return e;
    }

private:
    struct Parser {
        std::string_view text;
        std::size_t line;
        std::size_t column;
        std::vector<Instr> code;
        std::size_t pos;
        std::size_t depth;
        std::size_t max_depth;
        bool uses_y;

        [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, column + pos, msg); }

        void skip()
        {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            }
        }

        void emit(Op op, int delta, double v = 0.0)
        {
            code.push_back({op, v});
            depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
            max_depth = std::max(max_depth, depth);
            if (max_depth > 60) {
                fail("expression too deeply nested");
            }
        }

        void expr()
        {
            term();
            for (;;) {
                skip();
                if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                    char c = text[pos++];
                    term();
                    emit(c == '+' ? Op::add : Op::sub, -1);
                } else {
                    return;
                }
            }
        }

        void term()
        {
            unary();
            for (;;) {
                skip();
                if (pos < text.size() && text[pos] == '*') {
                    ++pos;
                    unary();
                    emit(Op::mul, -1);
                } else {
                    return;
                }
            }
        }

        void unary()
        {
            skip();
            if (pos < text.size() && text[pos] == '-') {
                ++pos;
                unary();
                emit(Op::neg, 0);
                return;
            }
            primary();
        }

        void primary()
        {
            skip();
            if (pos == text.size()) {
                fail("expected a value");
            }
            char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t start = pos;
                while (pos < text.size() &&
                       (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' || text[pos] == 'e' ||
                        text[pos] == 'E' ||
                        ((text[pos] == '+' || text[pos] == '-') && (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
                    ++pos;
                }
                auto v = parse_double(text.substr(start, pos - start));
                if (!v) {
                    pos = start;
                    fail("malformed number");
                }
                emit(Op::push, 1, *v);
                return;
            }
            if (c == '(') {
                ++pos;
                expr();
                close();
                return;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                    ++pos;
                }
                auto name = text.substr(start, pos - start);
                if (name == "x") {
                    emit(Op::load_x, 1);
                } else if (name == "y") {
                    uses_y = true;
                    emit(Op::load_y, 1);
                } else if (name == "pi") {
                    emit(Op::push, 1, 3.14159265358979323846);
                } else if (name == "mod1" || name == "abs") {
                    skip();
                    if (pos == text.size() || text[pos] != '(') {
                        fail("expected '(' after " + std::string(name));
                    }
                    ++pos;
                    expr();
                    close();
                    emit(name == "mod1" ? Op::mod1 : Op::abs, 0);
                } else {
                    pos = start;
                    fail("unknown identifier '" + std::string(name) + "'");
                }
                return;
            }
            fail(std::string("unexpected '") + c + "'");
        }

        void close()
        {
            skip();
            if (pos == text.size() || text[pos] != ')') {
                fail("expected ')'");
            }
            ++pos;
        }
    };

    std::vector<Instr> code_;
    bool uses_y_ = false;
    std::string source_;
};

} // namespace topodyn::cli
