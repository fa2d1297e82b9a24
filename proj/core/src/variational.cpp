#include "varsub/variational.hpp"

#include <algorithm>
#include <stdexcept>

namespace varsub {

namespace {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

int report_effective_order(const std::vector<ResidualFamily>& families) {
    int m = 0;
    for (const auto& fam : families)
        for (const auto& e : fam.entries) m = std::max(m, e.expr.max_jet_order());
    return m;
}

// Zero-tests every entry on its own substream, fills verdict, certification
// and the first failure.
void finalize_report(HelmholtzReport& rep, const OracleConfig& cfg) {
    rep.pass = true;
    rep.cert = Certification::Symbolic;
    for (auto& fam : rep.families) {
        for (auto& e : fam.entries) {
            OracleConfig sub = cfg.with_seed(derive_seed(
                cfg.seed, static_cast<std::uint64_t>(fam.l + 8),
                static_cast<std::uint64_t>(e.nu) * 64 + static_cast<std::uint64_t>(e.kappa + 1),
                static_cast<std::uint64_t>(e.sigma)));
            e.z = is_zero(e.expr, sub);
            if (!e.z.zero) {
                if (rep.pass) {
                    rep.pass = false;
                    FailureWitness w;
                    w.family = fam.label;
                    w.l = fam.l;
                    w.nu = e.nu;
                    w.sigma = e.sigma;
                    w.kappa = e.kappa;
                    if (e.z.witness) {
                        w.point = e.z.witness->point;
                        w.value = e.z.witness->value;
                    }
                    rep.first_failure = w;
                }
            } else if (e.z.cert == Certification::Probabilistic) {
                rep.cert = Certification::Probabilistic;
            }
        }
    }
    if (!rep.pass) rep.cert = Certification::Probabilistic;
    rep.effective_order = report_effective_order(rep.families);
    rep.oracle = cfg;
}

} // namespace

void SourceForm::validate() const {
    space.validate();
    if (components.size() != space.fibers.size())
        throw std::invalid_argument("source form needs one component per fiber");
    for (const auto& c : components)
        if (c.max_jet_order() > space.order)
            throw std::invalid_argument("component order exceeds the declared space order");
}

SourceForm euler_lagrange(const Lagrangian& lag) {
    lag.space.validate();
    if (lag.density.max_jet_order() > lag.space.order)
        throw std::invalid_argument("density order exceeds the declared space order");
    const JetSpace& js = lag.space;
    int r = js.order;
    SourceForm out;
    out.components.reserve(js.fibers.size());
    int max_order = 1;
    for (const std::string& f : js.fibers) {
        std::vector<Expr> terms;
        terms.push_back(diff(lag.density, Symbol::jet(f, 0)));
        for (int l = 1; l <= r; ++l) {
            Expr d = diff(lag.density, Symbol::jet(f, l));
            Expr t = total_derivative_k(d, js, l);
            terms.push_back(l % 2 == 0 ? t : Expr::neg(t));
        }
        Expr comp = simplify(Expr::add(std::move(terms)));
        max_order = std::max(max_order, comp.max_jet_order());
        out.components.push_back(std::move(comp));
    }
    out.space = js.widened(max_order);
    return out;
}

Expr general_helmholtz_entry(const SourceForm& sf, int l, int nu, int sigma) {
    const JetSpace& js = sf.space;
    int r = js.order;
    const Expr& eps_sigma = sf.components.at(sigma);
    const Expr& eps_nu = sf.components.at(nu);
    Symbol ynl = js.jet(nu, l);
    Symbol ysl = js.jet(sigma, l);
    std::vector<Expr> terms;
    terms.push_back(diff(eps_sigma, ynl));
    Expr second = diff(eps_nu, ysl);
    terms.push_back(l % 2 == 0 ? Expr::neg(second) : second);
    for (int s = l + 1; s <= r; ++s) {
        Expr d = diff(eps_nu, js.jet(sigma, s));
        Expr t = Expr::mul({Expr::integer(binomial(s, l)), total_derivative_k(d, js, s - l)});
        terms.push_back(s % 2 == 0 ? Expr::neg(t) : t);
    }
    return simplify(Expr::add(std::move(terms)));
}

HelmholtzReport helmholtz(const SourceForm& sf, const OracleConfig& cfg) {
    sf.validate();
    const JetSpace& js = sf.space;
    int r = js.order;
    int m = js.dim();
    HelmholtzReport rep;
    rep.order = r;
    if (r == 2) {
        rep.normalization = "classical-second-order";
        rep.normalization_note =
            "order-1 and order-0 families carry the symmetrized/antisymmetrized groupings of the "
            "general alternating-sum residuals; both have the same vanishing locus";
        ResidualFamily f2{"acceleration-antisymmetry", 2, {}};
        ResidualFamily f1{"velocity-symmetric", 1, {}};
        ResidualFamily f0{"position-antisymmetry", 0, {}};
        for (int nu = 0; nu < m; ++nu) {
            for (int sigma = 0; sigma < m; ++sigma) {
                const Expr& es = sf.components[sigma];
                const Expr& en = sf.components[nu];
                Symbol yn0 = js.jet(nu, 0), ys0 = js.jet(sigma, 0);
                Symbol yn1 = js.jet(nu, 1), ys1 = js.jet(sigma, 1);
                Symbol yn2 = js.jet(nu, 2), ys2 = js.jet(sigma, 2);

                ResidualEntry e2{nu, sigma, -1, {}, {}};
                e2.expr = simplify(Expr::sub(diff(es, yn2), diff(en, ys2)));
                f2.entries.push_back(std::move(e2));

                ResidualEntry e1{nu, sigma, -1, {}, {}};
                Expr sym_sum = Expr::add({diff(es, yn1), diff(en, ys1)});
                Expr dt_part = total_derivative(Expr::add({diff(es, yn2), diff(en, ys2)}), js);
                e1.expr = simplify(Expr::sub(sym_sum, dt_part));
                f1.entries.push_back(std::move(e1));

                ResidualEntry e0{nu, sigma, -1, {}, {}};
                Expr anti = Expr::sub(diff(es, yn0), diff(en, ys0));
                Expr dt_half = Expr::mul({Expr::number(Rational(1, 2)),
                                          total_derivative(Expr::sub(diff(es, yn1), diff(en, ys1)), js)});
                e0.expr = simplify(Expr::sub(anti, dt_half));
                f0.entries.push_back(std::move(e0));
            }
        }
        rep.families = {std::move(f2), std::move(f1), std::move(f0)};
    } else {
        rep.normalization = "variational-sequence-general";
        for (int l = r; l >= 0; --l) {
            ResidualFamily fam{"alternating-sum order " + std::to_string(l), l, {}};
            for (int nu = 0; nu < m; ++nu)
                for (int sigma = 0; sigma < m; ++sigma) {
                    ResidualEntry e{nu, sigma, -1, {}, {}};
                    e.expr = general_helmholtz_entry(sf, l, nu, sigma);
                    fam.entries.push_back(std::move(e));
                }
            rep.families.push_back(std::move(fam));
        }
    }
    finalize_report(rep, cfg);
    return rep;
}

bool is_locally_variational(const SourceForm& sf, const OracleConfig& cfg) {
    return helmholtz(sf, cfg).pass;
}

NullLagrangianResult is_null_lagrangian(const Lagrangian& lag, const OracleConfig& cfg) {
    SourceForm el = euler_lagrange(lag);
    NullLagrangianResult res;
    res.null = true;
    res.cert = Certification::Symbolic;
    for (std::size_t i = 0; i < el.components.size(); ++i) {
        OracleConfig sub = cfg.with_seed(derive_seed(cfg.seed, 101, i, 0));
        ZeroResult z = is_zero(el.components[i], sub);
        if (!z.zero) {
            res.null = false;
            res.cert = Certification::Probabilistic;
            res.witness = z.witness;
            return res;
        }
        if (z.cert == Certification::Probabilistic) res.cert = Certification::Probabilistic;
    }
    return res;
}

ABDecomposition linear_accel_decompose(const SourceForm& sf, const OracleConfig& cfg) {
    sf.validate();
    const JetSpace& js = sf.space;
    if (js.order != 2) throw std::invalid_argument("A/B decomposition requires a declared order of 2");
    int m = js.dim();
    std::map<Symbol, Expr> accel_to_zero;
    for (int nu = 0; nu < m; ++nu) accel_to_zero.emplace(js.jet(nu, 2), Expr());
    ABDecomposition d;
    d.space = js;
    d.A.resize(m);
    d.B.assign(m, std::vector<Expr>(m));
    for (int sigma = 0; sigma < m; ++sigma) {
        for (int nu = 0; nu < m; ++nu) {
            Expr b = diff(sf.components[sigma], js.jet(nu, 2));
            for (int kappa = 0; kappa < m; ++kappa) {
                OracleConfig sub = cfg.with_seed(derive_seed(cfg.seed, 202, sigma * m + nu, kappa));
                ZeroResult z = is_zero(diff(b, js.jet(kappa, 2)), sub);
                if (!z.zero)
                    throw NonlinearAcceleration(sigma, nu,
                                                z.witness ? *z.witness : ZeroWitness{});
            }
            d.B[sigma][nu] = simplify(subst(b, accel_to_zero));
        }
        d.A[sigma] = simplify(subst(sf.components[sigma], accel_to_zero));
    }
    return d;
}

SourceForm reconstruct(const ABDecomposition& d) {
    SourceForm sf;
    sf.space = d.space;
    int m = d.space.dim();
    for (int sigma = 0; sigma < m; ++sigma) {
        std::vector<Expr> terms{d.A[sigma]};
        for (int nu = 0; nu < m; ++nu)
            terms.push_back(Expr::mul({d.B[sigma][nu], Expr::sym(d.space.jet(nu, 2))}));
        sf.components.push_back(simplify(Expr::add(std::move(terms))));
    }
    return sf;
}

HelmholtzReport helmholtz_AB(const ABDecomposition& d, const OracleConfig& cfg) {
    const JetSpace& js = d.space;
    int m = js.dim();
    Symbol t = js.base_sym();
    // Order-1-truncated time derivative: d/dt + y'^kappa d/dy^kappa.
    auto dt_trunc = [&](const Expr& e) {
        std::vector<Expr> terms{diff(e, t)};
        for (int k = 0; k < m; ++k)
            terms.push_back(Expr::mul({Expr::sym(js.jet(k, 1)), diff(e, js.jet(k, 0))}));
        return Expr::add(std::move(terms));
    };
    HelmholtzReport rep;
    rep.order = 2;
    rep.normalization = "affine-coefficient";
    ResidualFamily f1{"B-symmetry", -1, {}};
    ResidualFamily f2{"B-velocity-curl", -1, {}};
    ResidualFamily f3{"A-velocity-symmetric", -1, {}};
    ResidualFamily f4{"A-position-antisymmetry", -1, {}};
    for (int nu = 0; nu < m; ++nu) {
        for (int sigma = 0; sigma < m; ++sigma) {
            ResidualEntry e1{nu, sigma, -1, {}, {}};
            e1.expr = simplify(Expr::sub(d.B[sigma][nu], d.B[nu][sigma]));
            f1.entries.push_back(std::move(e1));

            for (int kappa = 0; kappa < m; ++kappa) {
                ResidualEntry e2{nu, sigma, kappa, {}, {}};
                e2.expr = simplify(Expr::sub(diff(d.B[sigma][kappa], js.jet(nu, 1)),
                                             diff(d.B[nu][kappa], js.jet(sigma, 1))));
                f2.entries.push_back(std::move(e2));
            }

            ResidualEntry e3{nu, sigma, -1, {}, {}};
            Expr sym_sum = Expr::add({diff(d.A[sigma], js.jet(nu, 1)), diff(d.A[nu], js.jet(sigma, 1))});
            e3.expr = simplify(
                Expr::sub(sym_sum, Expr::mul({Expr::integer(2), dt_trunc(d.B[sigma][nu])})));
            f3.entries.push_back(std::move(e3));

            ResidualEntry e4{nu, sigma, -1, {}, {}};
            Expr anti = Expr::sub(diff(d.A[sigma], js.jet(nu, 0)), diff(d.A[nu], js.jet(sigma, 0)));
            Expr inner = Expr::sub(diff(d.A[sigma], js.jet(nu, 1)), diff(d.A[nu], js.jet(sigma, 1)));
            e4.expr = simplify(Expr::sub(
                anti, Expr::mul({Expr::number(Rational(1, 2)), dt_trunc(inner)})));
            f4.entries.push_back(std::move(e4));
        }
    }
    rep.families = {std::move(f1), std::move(f2), std::move(f3), std::move(f4)};
    finalize_report(rep, cfg);
    rep.normalization_note = "families stated on the affine decomposition; equivalent to the "
                             "order-2 residual families of the reconstructed system";
    return rep;
}

} // namespace varsub
