#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "varsub/expr.hpp"
#include "varsub/jet.hpp"

namespace varsub {

struct ParseError : std::runtime_error {
    std::size_t offset;
    std::string reason;
    ParseError(std::size_t off, const std::string& msg)
        : std::runtime_error("parse error at byte " + std::to_string(off) + ": " + msg),
          offset(off),
          reason(msg) {}
};

// Name resolution context: the coordinates of a jet space plus declared free
// parameters. Everything else is an unknown identifier.
struct ParseContext {
    JetSpace space;
    std::set<std::string> params;
};

// Grammar:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?      right-associative; exponent must reduce
//                                   to a rational constant
//   atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
// NUMBER is a decimal integer, fraction literal p/q, or decimal float
// (longest munch; p/q is not taken when q continues as a float).
// IDENT is [A-Za-z][A-Za-z0-9]* with an optional derivative suffix: one or
// more apostrophes, or _k for order k. Functions: sin cos tan sqrt exp log
// arcsin arccos arctan. pi is reserved.
Expr parse_expr(const std::string& text, const ParseContext& ctx);

} // namespace varsub
