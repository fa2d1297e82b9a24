#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"
#include "varsub/parse.hpp"
#include "varsub/variational.hpp"

using namespace varsub;
using testutil::parse_on;

namespace {

JetSpace space1(int order = 1) {
    JetSpace js;
    js.fibers = {"x"};
    js.order = order;
    return js;
}

JetSpace space2(int order = 1) {
    JetSpace js;
    js.fibers = {"x", "y"};
    js.order = order;
    return js;
}

Lagrangian L(const std::string& s, JetSpace js) { return {js, parse_on(s, js)}; }

} // namespace

TEST_CASE("classic densities produce their textbook equations") {
    SourceForm free_particle = euler_lagrange(L("1/2*x'^2", space1()));
    REQUIRE(free_particle.components.size() == 1);
    CHECK(free_particle.components[0] == parse_on("-x''", space1(2)));

    SourceForm harmonic = euler_lagrange(L("1/2*x'^2 - 1/2*x^2", space1()));
    CHECK(harmonic.components[0] == simplify(parse_on("-x'' - x", space1(2))));

    // kinetic minus potential for the coupled oscillator, sign flipped so the
    // equations come out with positive accelerations
    Lagrangian osc = L("-1/2*(x'^2 + 2*x'*y' + y'^2 - 2*x^2 - 2*x*y - 3*y^2)", space2());
    SourceForm sf = euler_lagrange(osc);
    CHECK(sf.components[0] == simplify(parse_on("x'' + y'' + 2*x + y", space2(2))));
    CHECK(sf.components[1] == simplify(parse_on("x'' + y'' + x + 3*y", space2(2))));
}

TEST_CASE("second order densities alternate signs through order four") {
    SourceForm sf = euler_lagrange(L("1/2*x''^2", space1(2)));
    CHECK(sf.components[0] == parse_on("x_4", space1(4)));
    CHECK(sf.space.order >= 4);
}

TEST_CASE("time dependent densities keep their explicit time terms") {
    SourceForm sf = euler_lagrange(L("t*x'^2", space1()));
    CHECK(sf.components[0] == simplify(parse_on("-2*x' - 2*t*x''", space1(2))));
}

TEST_CASE("total derivatives are null and detected as such") {
    JetSpace js = space1();
    Expr F = parse_on("x^2*t + sin(x)", js);
    Lagrangian null_lag{js.widened(1), simplify(total_derivative(F, js))};
    OracleConfig cfg;
    NullLagrangianResult r = is_null_lagrangian(null_lag, cfg);
    CHECK(r.null);
    NullLagrangianResult r2 = is_null_lagrangian(L("x'^2", space1()), cfg);
    CHECK(!r2.null);
    CHECK(r2.witness.has_value());
}

TEST_CASE("euler lagrange output always passes the residual test") {
    OracleConfig cfg;
    SourceForm sf = euler_lagrange(L("x'^2*y' + x*y + sin(x)", space2()));
    HelmholtzReport rep = helmholtz(sf, cfg);
    CHECK(rep.pass);
    CHECK(is_locally_variational(sf, cfg));
}

TEST_CASE("residual families have the declared shapes") {
    OracleConfig cfg;
    JetSpace js = space2(2);
    SourceForm sf;
    sf.space = js;
    sf.components = {parse_on("x'' + y'", js), parse_on("y'' - x'", js)};
    HelmholtzReport rep = helmholtz(sf, cfg);
    REQUIRE(rep.families.size() == 3);
    CHECK(rep.families[0].label == "acceleration-antisymmetry");
    CHECK(rep.families[1].label == "velocity-symmetric");
    CHECK(rep.families[2].label == "position-antisymmetry");
    for (const auto& fam : rep.families) CHECK(fam.entries.size() == 4);
    CHECK(rep.pass); // constant gyroscopic coupling is variational
    CHECK(rep.order == 2);
}

TEST_CASE("velocity family entries are symmetric and acceleration entries antisymmetric") {
    testutil::Rng rng(5150);
    OracleConfig cfg;
    JetSpace js = testutil::ambient_space(2);
    for (int trial = 0; trial < 5; ++trial) {
        ABDecomposition d = testutil::random_affine(rng, js);
        SourceForm sf = reconstruct(d);
        HelmholtzReport rep = helmholtz(sf, cfg);
        auto entry = [&](int fam, int nu, int sigma) {
            for (const auto& en : rep.families[static_cast<std::size_t>(fam)].entries)
                if (en.nu == nu && en.sigma == sigma) return en.expr;
            REQUIRE(false);
            return Expr();
        };
        for (int nu = 0; nu < 2; ++nu)
            for (int sig = 0; sig < 2; ++sig) {
                CHECK(simplify(Expr::add({entry(0, nu, sig), entry(0, sig, nu)})).is_zero_literal());
                CHECK(simplify(Expr::sub(entry(1, nu, sig), entry(1, sig, nu))).is_zero_literal());
                CHECK(simplify(Expr::add({entry(2, nu, sig), entry(2, sig, nu)})).is_zero_literal());
            }
    }
}

TEST_CASE("the general alternating residual vanishes exactly on variational systems") {
    testutil::Rng rng(881);
    OracleConfig cfg;
    JetSpace js = testutil::ambient_space(2);
    for (int trial = 0; trial < 5; ++trial) {
        Lagrangian lag = testutil::random_lagrangian(rng, js);
        SourceForm sf = euler_lagrange(lag);
        sf.space = sf.space.widened(2);
        for (int l = 0; l <= 2; ++l)
            for (int nu = 0; nu < 2; ++nu)
                for (int sigma = 0; sigma < 2; ++sigma)
                    CHECK(testutil::zero_ok(general_helmholtz_entry(sf, l, nu, sigma), cfg));
    }
}

TEST_CASE("the general residual flags the non-variational plane system") {
    OracleConfig cfg;
    JetSpace js = space2(2);
    js.fibers = {"x1", "x2"};
    SourceForm sf;
    sf.space = js;
    sf.components = {parse_on("x2' + x1'*(x1'*x1'' + x2'*x2'')", js),
                     parse_on("-x1' + x2'*(x1'*x1'' + x2'*x2'')", js)};
    bool some_nonzero = false;
    for (int l = 0; l <= 2 && !some_nonzero; ++l)
        for (int nu = 0; nu < 2 && !some_nonzero; ++nu)
            for (int sigma = 0; sigma < 2; ++sigma)
                if (!testutil::zero_ok(general_helmholtz_entry(sf, l, nu, sigma), cfg)) {
                    some_nonzero = true;
                    break;
                }
    CHECK(some_nonzero);
    CHECK(!helmholtz(sf, cfg).pass);
}

TEST_CASE("acceleration-affine systems split and reassemble") {
    testutil::Rng rng(404);
    OracleConfig cfg;
    JetSpace js = testutil::ambient_space(2);
    for (int trial = 0; trial < 5; ++trial) {
        ABDecomposition d = testutil::random_affine(rng, js);
        SourceForm sf = reconstruct(d);
        ABDecomposition back = linear_accel_decompose(sf, cfg);
        for (int s = 0; s < 2; ++s) {
            CHECK(simplify(Expr::sub(back.A[static_cast<std::size_t>(s)],
                                     d.A[static_cast<std::size_t>(s)]))
                      .is_zero_literal());
            for (int n = 0; n < 2; ++n)
                CHECK(simplify(Expr::sub(back.B[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)],
                                         d.B[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)]))
                          .is_zero_literal());
        }
    }
}

TEST_CASE("quadratic accelerations are rejected with a witness") {
    OracleConfig cfg;
    JetSpace js = space1(2);
    SourceForm sf;
    sf.space = js;
    sf.components = {parse_on("x''^2 + x", js)};
    try {
        linear_accel_decompose(sf, cfg);
        CHECK(false);
    } catch (const NonlinearAcceleration& e) {
        CHECK(e.sigma == 0);
        CHECK(e.nu == 0);
    }
}

TEST_CASE("the coefficient form of the residual test agrees with the direct form") {
    testutil::Rng rng(7172);
    OracleConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        JetSpace js = testutil::ambient_space(2 + trial % 2);
        SourceForm sf;
        bool variational = trial % 2 == 0;
        if (variational) {
            sf = euler_lagrange(testutil::random_lagrangian(rng, js));
            sf.space = sf.space.widened(2);
        } else {
            sf = reconstruct(testutil::random_affine(rng, js));
        }
        HelmholtzReport direct = helmholtz(sf, cfg);
        HelmholtzReport viaAB = helmholtz_AB(linear_accel_decompose(sf, cfg), cfg);
        CHECK(direct.pass == viaAB.pass);
    }
}

TEST_CASE("reports expose certification and the first failing entry") {
    OracleConfig cfg;
    JetSpace js = space2(2);
    SourceForm sf;
    sf.space = js;
    sf.components = {parse_on("x'' + y'*y''", js), parse_on("y''", js)};
    HelmholtzReport rep = helmholtz(sf, cfg);
    CHECK(!rep.pass);
    REQUIRE(rep.first_failure.has_value());
    CHECK(!rep.first_failure->family.empty());
    CHECK(rep.oracle.seed == cfg.seed);

    SourceForm ok = euler_lagrange(L("1/2*x'^2 - x", space1()));
    HelmholtzReport good = helmholtz(ok, cfg);
    CHECK(good.pass);
    CHECK(good.cert == Certification::Symbolic);
    CHECK(!good.first_failure.has_value());
}
