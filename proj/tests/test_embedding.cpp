#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"
#include "varsub/embedding.hpp"
#include "varsub/parse.hpp"

using namespace varsub;
using testutil::parse_on;

namespace {

JetSpace plane(int order = 2) {
    JetSpace js;
    js.fibers = {"x", "y"};
    js.order = order;
    return js;
}

Embedding circle(std::int64_t r0 = 1) {
    return make_catalog_embedding("circle", {Rational(r0)}, plane());
}

SourceForm spiral_system() {
    JetSpace js;
    js.fibers = {"x1", "x2"};
    js.order = 2;
    SourceForm sf;
    sf.space = js;
    sf.components = {parse_on("x2' + x1'*(x1'*x1'' + x2'*x2'')", js),
                     parse_on("-x1' + x2'*(x1'*x1'' + x2'*x2'')", js)};
    return sf;
}

Embedding circle2(std::int64_t r0) {
    JetSpace js;
    js.fibers = {"x1", "x2"};
    js.order = 2;
    return make_catalog_embedding("circle", {Rational(r0)}, js);
}

} // namespace

TEST_CASE("embedding validation rejects broken charts") {
    Embedding e = circle();
    e.validate();

    Embedding clash = e;
    clash.source.fibers = {"x"}; // collides with the target fiber
    CHECK_THROWS_AS(clash.validate(), std::invalid_argument);

    Embedding jet_component = e;
    jet_component.components[0] = parse_on("q'", e.source);
    CHECK_THROWS_AS(jet_component.validate(), std::invalid_argument);

    Embedding too_many = e;
    too_many.source.fibers = {"q", "p", "s"}; // n > m
    CHECK_THROWS_AS(too_many.validate(), std::invalid_argument);

    Embedding base_mismatch = e;
    base_mismatch.source.base = "s";
    CHECK_THROWS_AS(base_mismatch.validate(), std::invalid_argument);

    Embedding wrong_count = e;
    wrong_count.components.pop_back();
    CHECK_THROWS_AS(wrong_count.validate(), std::invalid_argument);
}

TEST_CASE("prolongation tabulates iterated derivatives of the components") {
    Embedding e = circle();
    ProlongedEmbedding pe = prolong_embedding(e, 2);
    REQUIRE(pe.table.size() == 2);
    REQUIRE(pe.table[0].size() == 3);
    JetSpace src = e.source;
    CHECK(pe.table[0][0] == parse_on("cos(q)", src));
    CHECK(pe.table[0][1] == simplify(parse_on("-q'*sin(q)", src)));
    CHECK(pe.table[1][1] == simplify(parse_on("q'*cos(q)", src)));
    CHECK(pe.table[0][2] == simplify(parse_on("-q''*sin(q) - q'^2*cos(q)", src)));

    auto b = pe.bindings();
    CHECK(b.size() == 6); // two fibers, orders 0..2
    CHECK(b.at(Symbol::jet("x", 0)) == parse_on("cos(q)", src));
    CHECK(b.at(Symbol::jet("y", 2)) == pe.table[1][2]);
}

TEST_CASE("slices restrict by plain substitution") {
    testutil::Rng rng(2121);
    JetSpace js = testutil::ambient_space(3);
    Embedding slice = make_catalog_embedding("slice", {Rational(2), Rational(0)}, js);
    OracleConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        SourceForm sf = reconstruct(testutil::random_affine(rng, js));
        SourceForm induced = induce_source_form(sf, slice);
        REQUIRE(induced.components.size() == 2);
        // the third fiber and its derivatives pin to zero, the first two relabel
        std::map<Symbol, Expr> pin;
        for (int l = 0; l <= 2; ++l) {
            pin[js.jet(0, l)] = Expr::sym(Symbol::jet("q1", l));
            pin[js.jet(1, l)] = Expr::sym(Symbol::jet("q2", l));
            pin[js.jet(2, l)] = Expr::integer(0);
        }
        for (int i = 0; i < 2; ++i) {
            Expr direct = simplify(subst(sf.components[static_cast<std::size_t>(i)], pin));
            CHECK(simplify(Expr::sub(induced.components[static_cast<std::size_t>(i)], direct))
                      .is_zero_literal());
        }
    }
}

TEST_CASE("the spiral system restricts to a quartic power of the radius") {
    OracleConfig cfg;
    SourceForm ambient = spiral_system();
    for (std::int64_t r0 : {1, 2}) {
        Embedding e = circle2(r0);
        SourceForm induced = induce_source_form(ambient, e);
        REQUIRE(induced.components.size() == 1);
        std::int64_t r4 = r0 * r0 * r0 * r0;
        Expr expected = simplify(Expr::mul({Expr::integer(r4), parse_on("q''*q'^2", e.source)}));
        CHECK(induced.components[0] == expected);
    }
}

TEST_CASE("both residual routes agree on shipped systems") {
    OracleConfig cfg;
    SourceForm ambient = spiral_system();
    Embedding e = circle2(1);
    SubmanifoldVerdict v = is_variational_submanifold(ambient, e, cfg);
    CHECK(v.variational);
    CHECK(v.direct.pass);
    CHECK(v.pullback.pass);

    // friction destroys the property on every curve constraint
    JetSpace js = plane();
    SourceForm damped;
    damped.space = js;
    damped.components = {parse_on("x'' + y'' + 2*x + y + x'", js),
                         parse_on("x'' + y'' + x + 3*y + y'", js)};
    SubmanifoldVerdict w = is_variational_submanifold(damped, circle(), cfg);
    CHECK(!w.variational);
    CHECK(!w.direct.pass);
    CHECK(!w.pullback.pass);
}

TEST_CASE("pullback lagrangians compose the density with the prolongation") {
    JetSpace js = plane(1);
    Lagrangian kinetic{js, parse_on("1/2*(x'^2 + y'^2)", js)};
    Lagrangian pulled = pullback_lagrangian(kinetic, circle());
    // on the unit circle the speed squared is the angular speed squared
    CHECK(simplify(Expr::sub(pulled.density, parse_on("1/2*q'^2", pulled.space)))
              .is_zero_literal());
}

TEST_CASE("restriction commutes with the variational derivative") {
    testutil::Rng rng(31337);
    OracleConfig cfg;
    JetSpace js = plane();
    for (int trial = 0; trial < 3; ++trial) {
        Lagrangian lag = testutil::random_lagrangian(rng, js);
        Embedding e = circle();
        SourceForm via_target = induce_source_form(euler_lagrange(lag), e);
        SourceForm via_source = euler_lagrange(pullback_lagrangian(lag, e));
        REQUIRE(via_target.components.size() == via_source.components.size());
        for (std::size_t i = 0; i < via_target.components.size(); ++i)
            CHECK(testutil::zero_ok(
                Expr::sub(via_target.components[i], via_source.components[i]), cfg));
    }
}

TEST_CASE("scalar condition for curve constraints of affine systems") {
    OracleConfig cfg;
    JetSpace js = plane();
    // isotropic friction: residual is the squared length of the chart gradient
    SourceForm damped;
    damped.space = js;
    damped.components = {parse_on("x'' + y'' + 2*x + y + x'", js),
                         parse_on("x'' + y'' + x + 3*y + y'", js)};
    ABDecomposition d = linear_accel_decompose(damped, cfg);
    ScalarConditionReport rep = one_dim_condition(d, circle(), cfg);
    CHECK(!rep.z.zero);
    CHECK(simplify(Expr::sub(rep.residual, Expr::integer(1))).is_zero_literal());

    // the scalar test only makes sense for one-dimensional charts
    JetSpace amb3 = testutil::ambient_space(3);
    Embedding sphere = make_catalog_embedding("sphere", {}, amb3);
    ABDecomposition d3;
    d3.space = amb3.widened(2);
    for (int s = 0; s < 3; ++s) {
        d3.A.push_back(Expr::integer(0));
        d3.B.push_back({Expr::integer(s == 0), Expr::integer(s == 1), Expr::integer(s == 2)});
    }
    CHECK_THROWS_AS(one_dim_condition(d3, sphere, cfg), std::invalid_argument);

    // explicit time dependence is outside the scalar test's hypotheses
    SourceForm timed;
    timed.space = js;
    timed.components = {parse_on("x'' + t*x'", js), parse_on("y''", js)};
    ABDecomposition dt_dep = linear_accel_decompose(timed, cfg);
    CHECK_THROWS_AS(one_dim_condition(dt_dep, circle(), cfg), std::invalid_argument);
}

TEST_CASE("force contraction detects velocity coupling across the constraint") {
    OracleConfig cfg;
    JetSpace js = plane();
    Embedding e = circle();
    // magnetic-type force: the contraction cancels by antisymmetry
    std::vector<Expr> lorentz = {parse_on("y'", js), parse_on("-x'", js)};
    ScalarConditionReport rep = force_condition(lorentz, js, e, cfg);
    CHECK(rep.z.zero);
    CHECK(rep.z.cert == Certification::Symbolic);

    // velocity-free forces drop out identically
    std::vector<Expr> conservative = {parse_on("-2*x + y", js), parse_on("x - y^3", js)};
    CHECK(force_condition(conservative, js, e, cfg).z.zero);

    // a drag term survives the contraction
    std::vector<Expr> drag = {parse_on("-x'", js), parse_on("-y'", js)};
    ScalarConditionReport bad = force_condition(drag, js, e, cfg);
    CHECK(!bad.z.zero);
}

TEST_CASE("affine coefficients restrict consistently with the full restriction") {
    testutil::Rng rng(909);
    OracleConfig cfg;
    JetSpace js = plane();
    for (int trial = 0; trial < 4; ++trial) {
        ABDecomposition d = testutil::random_affine(rng, js);
        Embedding e = trial % 2 == 0 ? circle() : testutil::random_curve_embedding(rng, js);
        ABDecomposition restricted = induce_affine(d, e);
        SourceForm via_coeffs = reconstruct(restricted);
        SourceForm via_form = induce_source_form(reconstruct(d), e);
        REQUIRE(via_coeffs.components.size() == via_form.components.size());
        for (std::size_t i = 0; i < via_form.components.size(); ++i)
            CHECK(testutil::zero_ok(
                Expr::sub(via_coeffs.components[i], via_form.components[i]), cfg));
    }
}

TEST_CASE("slices leave affine coefficients alone") {
    testutil::Rng rng(606);
    OracleConfig cfg;
    JetSpace js = testutil::ambient_space(3);
    Embedding slice = make_catalog_embedding("slice", {Rational(2), Rational(0)}, js);
    ABDecomposition d = testutil::random_affine(rng, js);
    ABDecomposition restricted = induce_affine(d, slice);
    std::map<Symbol, Expr> pin;
    for (int l = 0; l <= 2; ++l) {
        pin[js.jet(0, l)] = Expr::sym(Symbol::jet("q1", l));
        pin[js.jet(1, l)] = Expr::sym(Symbol::jet("q2", l));
        pin[js.jet(2, l)] = Expr::integer(0);
    }
    for (int i = 0; i < 2; ++i) {
        CHECK(simplify(Expr::sub(restricted.A[static_cast<std::size_t>(i)],
                                 simplify(subst(d.A[static_cast<std::size_t>(i)], pin))))
                  .is_zero_literal());
        for (int j = 0; j < 2; ++j)
            CHECK(simplify(Expr::sub(
                      restricted.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                      simplify(subst(d.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], pin))))
                      .is_zero_literal());
    }
}

TEST_CASE("immersion check warns on degenerate differentials") {
    OracleConfig cfg;
    CHECK(!immersion_warning(circle(), cfg).has_value());

    Embedding flat;
    flat.source.fibers = {"q"};
    flat.source.order = 2;
    flat.target = plane();
    flat.components = {Expr::integer(3), Expr::integer(5)};
    auto warning = immersion_warning(flat, cfg);
    REQUIRE(warning.has_value());
    CHECK(!warning->empty());
}

TEST_CASE("the catalog spells out its charts") {
    const auto& cat = embedding_catalog();
    REQUIRE(cat.size() == 4);
    CHECK(cat[0].name == "circle");
    CHECK(cat[1].name == "sphere");
    CHECK(cat[2].name == "mobius");
    CHECK(cat[3].name == "slice");

    JetSpace amb3 = testutil::ambient_space(3);
    Embedding mob = make_catalog_embedding("mobius", {Rational(2), Rational(1)}, amb3);
    mob.validate();
    CHECK(mob.source.fibers.size() == 2);

    CHECK_THROWS_AS(make_catalog_embedding("helix", {}, amb3), std::invalid_argument);
    CHECK_THROWS_AS(make_catalog_embedding("circle", {Rational(1)}, amb3),
                    std::invalid_argument); // needs a two-dimensional target
    CHECK_THROWS_AS(make_catalog_embedding("circle", {}, plane()),
                    std::invalid_argument); // missing the radius
    CHECK_THROWS_AS(make_catalog_embedding("slice", {Rational(4)}, amb3),
                    std::invalid_argument); // chart dimension exceeds the target
}

TEST_CASE("catalog charts are immersions where defined") {
    OracleConfig cfg;
    JetSpace amb3 = testutil::ambient_space(3);
    CHECK(!immersion_warning(make_catalog_embedding("sphere", {}, amb3), cfg).has_value());
    CHECK(!immersion_warning(make_catalog_embedding("mobius", {Rational(2), Rational(1)}, amb3), cfg)
               .has_value());
    CHECK(!immersion_warning(make_catalog_embedding("slice", {Rational(2), Rational(0)}, amb3), cfg)
               .has_value());
}
