#include "varsub/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>

namespace varsub {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    Rational value;      // Number
    std::string name;    // Ident base name
    int order = 0;       // Ident derivative suffix
};

const std::map<std::string, FunKind>& function_table() {
    static const std::map<std::string, FunKind> t{
        {"sin", FunKind::Sin},       {"cos", FunKind::Cos},       {"tan", FunKind::Tan},
        {"exp", FunKind::Exp},       {"log", FunKind::Log},       {"arcsin", FunKind::Arcsin},
        {"arccos", FunKind::Arccos}, {"arctan", FunKind::Arctan},
    };
    return t;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Token tok;
        tok.offset = pos_;
        if (pos_ >= s_.size()) {
            tok.kind = Tok::End;
            return tok;
        }
        char c = s_[pos_];
        switch (c) {
            case '+': tok.kind = Tok::Plus; ++pos_; return tok;
            case '-': tok.kind = Tok::Minus; ++pos_; return tok;
            case '*': tok.kind = Tok::Star; ++pos_; return tok;
            case '/': tok.kind = Tok::Slash; ++pos_; return tok;
            case '^': tok.kind = Tok::Caret; ++pos_; return tok;
            case '(': tok.kind = Tok::LParen; ++pos_; return tok;
            case ')': tok.kind = Tok::RParen; ++pos_; return tok;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(tok);
        if (std::isalpha(static_cast<unsigned char>(c))) return lex_ident(tok);
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

private:
    std::size_t digits_from(std::size_t p) const {
        std::size_t q = p;
        while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
        return q;
    }

    std::int64_t to_int(std::size_t from, std::size_t to) const {
        __int128 v = 0;
        for (std::size_t i = from; i < to; ++i) {
            v = v * 10 + (s_[i] - '0');
            if (v > INT64_MAX) throw ParseError(from, "integer literal too large");
        }
        return static_cast<std::int64_t>(v);
    }

    Token lex_number(Token tok) {
        tok.kind = Tok::Number;
        std::size_t start = pos_;
        std::size_t end_int = digits_from(pos_);
        bool is_float = false;
        std::size_t frac_begin = end_int, frac_end = end_int;
        std::size_t p = end_int;
        if (p < s_.size() && s_[p] == '.') {
            is_float = true;
            frac_begin = p + 1;
            frac_end = digits_from(frac_begin);
            p = frac_end;
        }
        std::int64_t exp10 = 0;
        if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
            std::size_t q = p + 1;
            bool negexp = false;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) {
                negexp = s_[q] == '-';
                ++q;
            }
            std::size_t exp_end = digits_from(q);
            if (exp_end > q) {
                is_float = true;
                exp10 = to_int(q, exp_end);
                if (negexp) exp10 = -exp10;
                p = exp_end;
            }
        }
        if (!is_float && p < s_.size() && s_[p] == '/') {
            // Fraction literal p/q: only when q is a plain integer run.
            std::size_t q_end = digits_from(p + 1);
            bool q_is_plain = q_end > p + 1 &&
                              (q_end >= s_.size() ||
                               (s_[q_end] != '.' && s_[q_end] != 'e' && s_[q_end] != 'E'));
            if (q_is_plain) {
                std::int64_t num = to_int(start, end_int);
                std::int64_t den = to_int(p + 1, q_end);
                if (den == 0) throw ParseError(start, "fraction literal with zero denominator");
                tok.value = Rational(num, den);
                pos_ = q_end;
                return tok;
            }
        }
        pos_ = p;
        if (!is_float) {
            tok.value = Rational(to_int(start, end_int));
            return tok;
        }
        // Exact decimal: digits.digits * 10^exp10.
        __int128 mant = 0;
        for (std::size_t i = start; i < end_int; ++i) mant = mant * 10 + (s_[i] - '0');
        std::int64_t scale = 0;
        for (std::size_t i = frac_begin; i < frac_end; ++i) {
            mant = mant * 10 + (s_[i] - '0');
            ++scale;
            if (mant > INT64_MAX) throw ParseError(start, "decimal literal too precise");
        }
        std::int64_t e = exp10 - scale;
        __int128 num = mant, den = 1;
        for (std::int64_t i = 0; i < (e > 0 ? e : -e); ++i) {
            if (e > 0)
                num *= 10;
            else
                den *= 10;
            if (num > INT64_MAX || den > INT64_MAX)
                throw ParseError(start, "decimal literal out of range");
        }
        tok.value = Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
        return tok;
    }

    Token lex_ident(Token tok) {
        tok.kind = Tok::Ident;
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok.name = s_.substr(start, pos_ - start);
        if (pos_ < s_.size() && s_[pos_] == '\'') {
            while (pos_ < s_.size() && s_[pos_] == '\'') {
                ++tok.order;
                ++pos_;
            }
        } else if (pos_ < s_.size() && s_[pos_] == '_') {
            std::size_t q_end = digits_from(pos_ + 1);
            if (q_end == pos_ + 1) throw ParseError(pos_, "expected derivative order after '_'");
            tok.order = static_cast<int>(to_int(pos_ + 1, q_end));
            pos_ = q_end;
        }
        return tok;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& text, const ParseContext& ctx) : lex_(text), ctx_(ctx) {
        advance();
    }

    Expr parse() {
        Expr e = expr();
        if (cur_.kind != Tok::End) throw ParseError(cur_.offset, "unexpected trailing input");
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    bool accept(Tok k) {
        if (cur_.kind != k) return false;
        advance();
        return true;
    }

    Expr expr() {
        Expr acc = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            bool minus = cur_.kind == Tok::Minus;
            advance();
            Expr rhs = term();
            acc = minus ? Expr::sub(acc, rhs) : Expr::add({acc, rhs});
        }
        return acc;
    }

    Expr term() {
        Expr acc = unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            bool divide = cur_.kind == Tok::Slash;
            std::size_t off = cur_.offset;
            advance();
            Expr rhs = unary();
            if (divide && rhs.is_zero_literal()) throw ParseError(off, "division by zero");
            acc = divide ? Expr::div(acc, rhs) : Expr::mul({acc, rhs});
        }
        return acc;
    }

    Expr unary() {
        if (accept(Tok::Minus)) return Expr::neg(unary());
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (cur_.kind == Tok::Caret) {
            std::size_t off = cur_.offset;
            advance();
            Expr e = unary();
            auto r = e.as_rational();
            if (!r) throw ParseError(off, "exponent must reduce to a rational constant");
            return Expr::pow(base, *r);
        }
        return base;
    }

    Expr atom() {
        if (cur_.kind == Tok::Number) {
            Expr e = Expr::number(cur_.value);
            advance();
            return e;
        }
        if (cur_.kind == Tok::LParen) {
            advance();
            Expr e = expr();
            if (!accept(Tok::RParen)) throw ParseError(cur_.offset, "expected ')'");
            return e;
        }
        if (cur_.kind == Tok::Ident) {
            Token id = cur_;
            advance();
            if (cur_.kind == Tok::LParen) return call(id);
            return resolve(id);
        }
        throw ParseError(cur_.offset, "expected a number, identifier or '('");
    }

    Expr call(const Token& id) {
        advance(); // consume '('
        Expr a = expr();
        if (!accept(Tok::RParen)) throw ParseError(cur_.offset, "expected ')'");
        if (id.order != 0) throw ParseError(id.offset, "unknown function " + id.name);
        if (id.name == "sqrt") return Expr::sqrt(a);
        auto it = function_table().find(id.name);
        if (it == function_table().end())
            throw ParseError(id.offset, "unknown function " + id.name);
        return Expr::fun(it->second, a);
    }

    Expr resolve(const Token& id) {
        if (id.name == "pi") {
            if (id.order != 0) throw ParseError(id.offset, "pi has no derivative coordinates");
            return Expr::pi();
        }
        if (id.name == ctx_.space.base) {
            if (id.order != 0)
                throw ParseError(id.offset, "the base variable has no derivative coordinates");
            return Expr::sym(ctx_.space.base_sym());
        }
        if (ctx_.space.has_fiber(id.name)) {
            if (id.order > ctx_.space.order)
                throw ParseError(id.offset, "derivative order " + std::to_string(id.order) +
                                                " exceeds the declared order " +
                                                std::to_string(ctx_.space.order));
            return Expr::sym(Symbol::jet(id.name, id.order));
        }
        if (ctx_.params.count(id.name)) {
            if (id.order != 0)
                throw ParseError(id.offset, "free parameters have no derivative coordinates");
            return Expr::sym(Symbol::param(id.name));
        }
        if (function_table().count(id.name) || id.name == "sqrt")
            throw ParseError(id.offset, "function " + id.name + " requires an argument");
        throw ParseError(id.offset, "unknown identifier " + id.name);
    }

    Lexer lex_;
    const ParseContext& ctx_;
    Token cur_;
};

} // namespace

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
    Parser p(text, ctx);
    return p.parse();
}

} // namespace varsub
