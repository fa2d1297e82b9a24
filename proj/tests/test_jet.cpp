#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "testutil.hpp"
#include "varsub/jet.hpp"
#include "varsub/oracle.hpp"
#include "varsub/parse.hpp"

using namespace varsub;
using testutil::parse_on;

namespace {

JetSpace qspace() {
    JetSpace js;
    js.fibers = {"q"};
    js.order = 2;
    return js;
}

} // namespace

TEST_CASE("space declarations validate their names") {
    JetSpace js = qspace();
    js.validate();
    CHECK(js.jet(0, 1) == Symbol::jet("q", 1));
    CHECK(js.jet("q", 2) == Symbol::jet("q", 2));
    CHECK(js.has_fiber("q"));
    CHECK(js.fiber_index("nope") == -1);
    CHECK(js.widened(5).order == 5);
    CHECK(js.widened(1).order == 2); // widening never shrinks

    JetSpace bad = js;
    bad.fibers = {"q", "q"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.fibers = {"t"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.fibers = {"2q"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = js;
    bad.order = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = js;
    bad.fibers.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("total derivative promotes jets and differentiates the base") {
    JetSpace js = qspace();
    auto Dt = [&](const std::string& s) { return simplify(total_derivative(parse_on(s, js), js)); };
    CHECK(Dt("q") == parse_on("q'", js));
    CHECK(Dt("t") == Expr::integer(1));
    CHECK(Dt("q^2") == simplify(parse_on("2*q*q'", js)));
    CHECK(Dt("sin(q)") == simplify(parse_on("q'*cos(q)", js)));
    CHECK(Dt("t*q'") == simplify(parse_on("q' + t*q''", js)));
    // promotion beyond the declared order is the widening mechanism
    Expr third = simplify(total_derivative(parse_on("q''", js), js));
    CHECK(third == Expr::sym(Symbol::jet("q", 3)));
    CHECK(third.max_jet_order() == 3);
    // parameters are constants along solutions
    Expr p = total_derivative(Expr::sym(Symbol::param("mass")), js);
    CHECK(p.is_zero_literal());
}

TEST_CASE("iterated total derivative agrees with an explicit curve") {
    JetSpace js = qspace();
    Expr e = parse_on("q^2", js);
    Expr d2 = simplify(total_derivative_k(e, js, 2));
    CHECK(d2 == simplify(parse_on("2*q'^2 + 2*q*q''", js)));

    // along q = t^3 the second derivative of q^2 = t^6 is 30 t^4
    Curve c;
    c.components["q"] = parse_on("t^3", js);
    double t0 = 0.5;
    Assignment a = prolong_curve(c, js, 2, t0);
    double expect = 30.0 * std::pow(t0, 4);
    CHECK(eval(d2, a) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(1.875).epsilon(1e-12));
    CHECK_THROWS_AS(total_derivative_k(e, js, -1), std::invalid_argument);
}

TEST_CASE("curve prolongation binds every derivative coordinate") {
    JetSpace js = qspace();
    Curve c;
    c.components["q"] = parse_on("sin(t)", js);
    double t0 = 0.7;
    Assignment a = prolong_curve(c, js, 3, t0);
    CHECK(a.at(Symbol::base("t")) == t0);
    CHECK(a.at(Symbol::jet("q", 0)) == doctest::Approx(std::sin(t0)).epsilon(1e-15));
    CHECK(a.at(Symbol::jet("q", 1)) == doctest::Approx(std::cos(t0)).epsilon(1e-15));
    CHECK(a.at(Symbol::jet("q", 2)) == doctest::Approx(-std::sin(t0)).epsilon(1e-15));
    CHECK(a.at(Symbol::jet("q", 3)) == doctest::Approx(-std::cos(t0)).epsilon(1e-15));
}

TEST_CASE("curve components must be functions of the base alone") {
    JetSpace js = qspace();
    Curve c;
    c.components["q"] = parse_on("q'", js);
    CHECK_THROWS_AS(prolong_curve(c, js, 2, 0.0), std::invalid_argument);
    Curve missing;
    CHECK_THROWS_AS(prolong_curve(missing, js, 2, 0.0), std::invalid_argument);
}

TEST_CASE("total derivative satisfies the Leibniz rule") {
    testutil::Rng rng(77);
    JetSpace js;
    js.fibers = {"x", "y"};
    js.order = 2;
    OracleConfig cfg;
    std::vector<Symbol> syms = testutil::jet_symbols(js, 1, true);
    for (int trial = 0; trial < 10; ++trial) {
        Expr f = testutil::random_poly(rng, syms, 2, 3);
        Expr g = testutil::random_poly(rng, syms, 2, 3);
        Expr lhs = total_derivative(simplify(Expr::mul({f, g})), js);
        Expr rhs = Expr::add({Expr::mul({total_derivative(f, js), g}),
                              Expr::mul({f, total_derivative(g, js)})});
        CHECK(simplify(Expr::sub(lhs, rhs)).is_zero_literal());
    }
}

TEST_CASE("total derivative commutes with substitution of time functions") {
    // d/dt then curve-evaluate equals curve-evaluate then d/dt
    JetSpace js = qspace();
    Expr e = parse_on("q*q' + sin(q)", js);
    Curve c;
    c.components["q"] = parse_on("t^2 + 1", js);
    OracleConfig cfg;
    FdReport rep = curve_consistency(e, js, c, cfg);
    CHECK(rep.pass);
}
