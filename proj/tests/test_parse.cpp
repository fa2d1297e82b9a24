#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"
#include "varsub/parse.hpp"

using namespace varsub;

namespace {

ParseContext ctx() {
    ParseContext c;
    c.space.fibers = {"x", "q2"};
    c.space.order = 2;
    c.params = {"a", "b"};
    return c;
}

Expr P(const std::string& s) { return parse_expr(s, ctx()); }

double V(const std::string& s, Assignment a = {}) { return eval(parse_expr(s, ctx()), a); }

} // namespace

TEST_CASE("operator precedence and associativity") {
    CHECK(V("2 + 3*4") == 14.0);
    CHECK(V("2*3^2") == 18.0);
    CHECK(V("2^3^2") == 512.0); // right-associative
    CHECK(V("-2^2") == -4.0);   // unary minus binds looser than the power
    Symbol x1 = Symbol::jet("x", 1);
    CHECK(V("-x'^2", {{x1, 2.0}}) == -4.0);
    CHECK(V("2 - 3 - 4") == -5.0); // left-associative subtraction
    CHECK(V("24/4/2") == 3.0);
    CHECK(V("(2 + 3)*4") == 20.0);
}

TEST_CASE("number tokens munch greedily but yield to floats") {
    CHECK(V("1/2") == 0.5);        // single fraction token
    CHECK(V("6/2^2") == 9.0);      // (6/2)^2, not 6/(2^2)
    CHECK(V("1/2.5") == 0.4);      // denominator is a float, so ordinary division
    CHECK(V("3.5 + 1") == 4.5);
    CHECK(V("1/2*4") == 2.0);
    Symbol x = Symbol::jet("x", 0);
    CHECK(V("6/x^2", {{x, 2.0}}) == 1.5); // symbol denominator: ^ binds first
}

TEST_CASE("derivative suffixes") {
    CHECK(P("x'") == Expr::sym(Symbol::jet("x", 1)));
    CHECK(P("x''") == Expr::sym(Symbol::jet("x", 2)));
    CHECK(P("x_2") == Expr::sym(Symbol::jet("x", 2)));
    CHECK(P("q2'") == Expr::sym(Symbol::jet("q2", 1)));
    CHECK(P("t") == Expr::sym(Symbol::base("t")));
    CHECK(P("a") == Expr::sym(Symbol::param("a")));
    CHECK(P("pi") == Expr::pi());
}

TEST_CASE("functions parse and sqrt lowers to a half power") {
    CHECK(P("sin(x)").kind() == NodeKind::Fun);
    CHECK(P("sqrt(x)") == Expr::pow(Expr::sym(Symbol::jet("x", 0)), Rational(1, 2)));
    CHECK(P("arccos(x)").fun_kind() == FunKind::Arccos);
}

TEST_CASE("errors carry the byte offset") {
    auto offset_of = [](const std::string& text) -> std::size_t {
        try {
            parse_expr(text, ctx());
        } catch (const ParseError& e) {
            return e.offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("x + ") == 4);       // input ends where a term should start
    CHECK(offset_of("x + )") == 4);
    CHECK(offset_of("(x + 1") == 6);     // unclosed parenthesis
    CHECK(offset_of("foo") == 0);        // unknown identifier
    CHECK(offset_of("x + zz*2") == 4);
    CHECK(offset_of("sin x") == 0);      // bare function name is no identifier
    CHECK(offset_of("x ' ") == 2);       // suffix must touch the identifier
    CHECK(offset_of("x'''") == 0);       // above the declared order
    CHECK(offset_of("x_3") == 0);
    CHECK(offset_of("x^y") == 2);        // exponent must reduce to a rational
}

TEST_CASE("unknown identifiers name themselves in the message") {
    try {
        parse_expr("x + reynolds", ctx());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("reynolds") != std::string::npos);
    }
}

TEST_CASE("declared order caps the accepted derivative suffix") {
    ParseContext c3 = ctx();
    c3.space.order = 3;
    CHECK(parse_expr("x_3", c3) == Expr::sym(Symbol::jet("x", 3)));
    CHECK_THROWS_AS(parse_expr("x_4", c3), ParseError);
}

TEST_CASE("grammar forces a canonical tree independent of spelling") {
    CHECK(P("a*b + x") == P("x + b*a"));
    CHECK(P("x - x").is_zero_literal());
    CHECK(P("x''+sin(t)") == P("sin(t) + x''"));
}

TEST_CASE("whitespace is free between tokens") {
    CHECK(P("  x  +  a ") == P("x+a"));
    CHECK(P("sin( x )") == P("sin(x)"));
}
