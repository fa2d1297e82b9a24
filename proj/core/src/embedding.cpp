#include "varsub/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varsub {

void Embedding::validate() const {
    source.validate();
    target.validate();
    if (source.base != target.base)
        throw std::invalid_argument("source and target must share the base variable");
    if (source.dim() > target.dim())
        throw std::invalid_argument("constraint dimension exceeds the ambient dimension");
    if (static_cast<int>(components.size()) != target.dim())
        throw std::invalid_argument("one component per target fiber required");
    for (const std::string& f : source.fibers)
        if (target.has_fiber(f))
            throw std::invalid_argument("source fiber " + f + " collides with a target fiber");
    for (const Expr& c : components) {
        for (const Symbol& s : c.symbols()) {
            if (s.kind == SymbolKind::Param) continue;
            if (s.kind == SymbolKind::Jet && s.order == 0 && source.has_fiber(s.name)) continue;
            throw std::invalid_argument("component may depend only on the constraint coordinates, found " +
                                        s.str());
        }
    }
}

ProlongedEmbedding prolong_embedding(const Embedding& e, int order) {
    e.validate();
    if (order < 0) throw std::invalid_argument("negative prolongation order");
    ProlongedEmbedding p;
    p.embedding = &e;
    p.order = order;
    p.table.resize(e.components.size());
    for (std::size_t sigma = 0; sigma < e.components.size(); ++sigma) {
        Expr cur = e.components[sigma];
        p.table[sigma].push_back(cur);
        for (int l = 1; l <= order; ++l) {
            cur = simplify(total_derivative(cur, e.source));
            p.table[sigma].push_back(cur);
        }
    }
    return p;
}

std::map<Symbol, Expr> ProlongedEmbedding::bindings() const {
    std::map<Symbol, Expr> b;
    const Embedding& e = *embedding;
    for (std::size_t sigma = 0; sigma < table.size(); ++sigma)
        for (int l = 0; l <= order; ++l)
            b.emplace(Symbol::jet(e.target.fibers[sigma], l), table[sigma][l]);
    return b;
}

namespace {

// Composition through the prolonged constraint; checks the result carries
// only source-space symbols.
Expr compose(const Expr& ambient_expr, const ProlongedEmbedding& p) {
    Expr out = subst(ambient_expr, p.bindings());
    const Embedding& e = *p.embedding;
    for (const Symbol& s : out.symbols()) {
        if (s.kind == SymbolKind::Param) continue;
        if (s.kind == SymbolKind::Base && s.name == e.source.base) continue;
        if (s.kind == SymbolKind::Jet && e.source.has_fiber(s.name)) continue;
        throw std::invalid_argument("composition left a non-constraint symbol " + s.str() +
                                    "; prolongation order too low");
    }
    return out;
}

} // namespace

SourceForm induce_source_form(const SourceForm& ambient, const Embedding& e) {
    ambient.validate();
    e.validate();
    if (ambient.space.fibers != e.target.fibers || ambient.space.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    int r = std::max(2, ambient.space.order);
    ProlongedEmbedding p = prolong_embedding(e, r);
    int n = e.source.dim();
    int m = e.target.dim();
    SourceForm out;
    int max_order = 1;
    for (int i = 0; i < n; ++i) {
        Symbol qi = e.source.jet(i, 0);
        std::vector<Expr> terms;
        for (int sigma = 0; sigma < m; ++sigma) {
            Expr composed = compose(ambient.components[sigma], p);
            terms.push_back(Expr::mul({composed, diff(e.components[sigma], qi)}));
        }
        Expr comp = simplify(Expr::add(std::move(terms)));
        max_order = std::max(max_order, comp.max_jet_order());
        out.components.push_back(std::move(comp));
    }
    out.space = e.source.widened(max_order);
    return out;
}

Lagrangian pullback_lagrangian(const Lagrangian& ambient, const Embedding& e) {
    e.validate();
    if (ambient.space.fibers != e.target.fibers || ambient.space.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    int r = std::max(1, ambient.density.max_jet_order());
    ProlongedEmbedding p = prolong_embedding(e, r);
    Lagrangian out;
    out.density = simplify(compose(ambient.density, p));
    out.space = e.source.widened(std::max(out.density.max_jet_order(), 1));
    return out;
}

std::vector<std::vector<std::vector<std::vector<Expr>>>> contact_pullback_coeffs(
    const Embedding& e, int r) {
    if (r < 1) throw std::invalid_argument("order must be at least 1");
    ProlongedEmbedding p = prolong_embedding(e, r - 1);
    int n = e.source.dim();
    int m = e.target.dim();
    std::vector<std::vector<std::vector<std::vector<Expr>>>> C(m);
    for (int sigma = 0; sigma < m; ++sigma) {
        C[sigma].resize(r);
        for (int l = 0; l <= r - 1; ++l) {
            C[sigma][l].resize(n);
            for (int i = 0; i < n; ++i) {
                C[sigma][l][i].resize(l + 1);
                for (int s = 0; s <= l; ++s)
                    C[sigma][l][i][s] = simplify(diff(p.table[sigma][l], e.source.jet(i, s)));
            }
        }
    }
    return C;
}

HelmholtzReport induced_helmholtz_via_pullback(const SourceForm& ambient, const Embedding& e,
                                               const OracleConfig& cfg) {
    ambient.validate();
    e.validate();
    if (ambient.space.fibers != e.target.fibers || ambient.space.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    int r = ambient.space.order;
    int n = e.source.dim();
    int m = e.target.dim();
    // Residual entries reach order 2r before composition, so the constraint
    // is prolonged to 2r.
    ProlongedEmbedding p = prolong_embedding(e, 2 * r);
    // d((d/dt)^l f^sigma)/dq^i_k for l <= r.
    auto C = contact_pullback_coeffs(e, r + 1);
    std::vector<std::vector<Expr>> fq(m, std::vector<Expr>(n));
    for (int sigma = 0; sigma < m; ++sigma)
        for (int j = 0; j < n; ++j) fq[sigma][j] = diff(e.components[sigma], e.source.jet(j, 0));

    // T[k][i][j] = sum_{l>=k, sigma, nu} (H^l_{sigma nu} o J) df^nu/dq^j
    //              d((d/dt)^l f^sigma)/dq^i_k
    std::vector<std::vector<std::vector<Expr>>> T(
        r + 1, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
    for (int l = 0; l <= r; ++l) {
        for (int sigma = 0; sigma < m; ++sigma) {
            for (int nu = 0; nu < m; ++nu) {
                Expr h = general_helmholtz_entry(ambient, l, sigma, nu);
                if (h.is_zero_literal()) continue;
                Expr hc = compose(h, p);
                for (int i = 0; i < n; ++i) {
                    for (int k = 0; k <= l; ++k) {
                        const Expr& cik = C[sigma][l][i][k];
                        if (cik.is_zero_literal()) continue;
                        for (int j = 0; j < n; ++j) {
                            Expr contrib = Expr::mul({hc, fq[nu][j], cik});
                            T[k][i][j] = Expr::add({T[k][i][j], contrib});
                        }
                    }
                }
            }
        }
    }
    HelmholtzReport rep;
    rep.order = r;
    rep.normalization = "constraint-pullback";
    rep.normalization_note =
        "ambient general residuals composed through the prolonged constraint and contracted with "
        "the contact pullback coefficients; the order-0 family is antisymmetrized";
    for (int k = r; k >= 0; --k) {
        ResidualFamily fam{k == 0 ? "pullback order 0 (antisymmetric part)"
                                  : "pullback order " + std::to_string(k),
                           k,
                           {}};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ResidualEntry entry{i, j, -1, {}, {}};
                entry.expr = k == 0 ? simplify(Expr::sub(T[0][i][j], T[0][j][i]))
                                    : simplify(T[k][i][j]);
                fam.entries.push_back(std::move(entry));
            }
        rep.families.push_back(std::move(fam));
    }
    // Zero-test and aggregate exactly like the direct report.
    rep.pass = true;
    rep.cert = Certification::Symbolic;
    for (auto& fam : rep.families) {
        for (auto& entry : fam.entries) {
            OracleConfig sub = cfg.with_seed(derive_seed(cfg.seed, 300 + fam.l,
                                                         static_cast<std::uint64_t>(entry.nu),
                                                         static_cast<std::uint64_t>(entry.sigma)));
            entry.z = is_zero(entry.expr, sub);
            if (!entry.z.zero) {
                if (rep.pass) {
                    rep.pass = false;
                    FailureWitness w;
                    w.family = fam.label;
                    w.l = fam.l;
                    w.nu = entry.nu;
                    w.sigma = entry.sigma;
                    if (entry.z.witness) {
                        w.point = entry.z.witness->point;
                        w.value = entry.z.witness->value;
                    }
                    rep.first_failure = w;
                }
            } else if (entry.z.cert == Certification::Probabilistic) {
                rep.cert = Certification::Probabilistic;
            }
        }
    }
    if (!rep.pass) rep.cert = Certification::Probabilistic;
    int eff = 0;
    for (const auto& fam : rep.families)
        for (const auto& entry : fam.entries) eff = std::max(eff, entry.expr.max_jet_order());
    rep.effective_order = eff;
    rep.oracle = cfg;
    return rep;
}

SubmanifoldVerdict is_variational_submanifold(const SourceForm& ambient, const Embedding& e,
                                              const OracleConfig& cfg) {
    SubmanifoldVerdict v;
    v.induced = induce_source_form(ambient, e);
    v.direct = helmholtz(v.induced, cfg);
    v.pullback = induced_helmholtz_via_pullback(ambient, e, cfg);
    if (v.direct.pass != v.pullback.pass)
        throw RouteDisagreement(
            "internal consistency failure: the induced residual test returned " +
            std::string(v.direct.pass ? "pass" : "fail") +
            " but the constraint-pullback assembly returned " +
            std::string(v.pullback.pass ? "pass" : "fail"));
    v.variational = v.direct.pass;
    v.cert = (v.direct.cert == Certification::Symbolic && v.pullback.cert == Certification::Symbolic)
                 ? Certification::Symbolic
                 : Certification::Probabilistic;
    return v;
}

ScalarConditionReport one_dim_condition(const ABDecomposition& d, const Embedding& e,
                                        const OracleConfig& cfg) {
    e.validate();
    if (e.source.dim() != 1)
        throw std::invalid_argument("this condition applies to one-dimensional constraints only");
    if (d.space.fibers != e.target.fibers || d.space.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    Symbol t = d.space.base_sym();
    for (const Expr& a : d.A)
        if (a.contains(t)) throw std::invalid_argument("coefficients must not depend on time");
    for (const auto& row : d.B)
        for (const Expr& b : row)
            if (b.contains(t)) throw std::invalid_argument("coefficients must not depend on time");

    int m = d.space.dim();
    ProlongedEmbedding p = prolong_embedding(e, 1);
    Symbol q = e.source.jet(0, 0);
    Expr qdot = Expr::sym(e.source.jet(0, 1));
    std::vector<Expr> f_q(m), df_q(m), df(m);
    for (int sigma = 0; sigma < m; ++sigma) {
        f_q[sigma] = diff(e.components[sigma], q);
        df_q[sigma] = total_derivative(f_q[sigma], e.source);
        df[sigma] = total_derivative(e.components[sigma], e.source);
    }
    std::vector<Expr> terms;
    for (int sigma = 0; sigma < m; ++sigma) {
        for (int nu = 0; nu < m; ++nu) {
            Expr a_vel = compose(diff(d.A[sigma], d.space.jet(nu, 1)), p);
            terms.push_back(Expr::mul({a_vel, f_q[nu], f_q[sigma]}));

            Expr b_anti = compose(Expr::sub(d.B[sigma][nu], d.B[nu][sigma]), p);
            terms.push_back(Expr::mul({b_anti, f_q[sigma], df_q[nu]}));

            for (int kappa = 0; kappa < m; ++kappa) {
                Expr b_curl = compose(Expr::sub(diff(d.B[sigma][kappa], d.space.jet(nu, 1)),
                                                diff(d.B[sigma][nu], d.space.jet(kappa, 1))),
                                      p);
                terms.push_back(Expr::mul({b_curl, qdot, f_q[nu], f_q[sigma], df_q[kappa]}));

                Expr b_pos = compose(diff(d.B[sigma][nu], d.space.jet(kappa, 0)), p);
                terms.push_back(Expr::neg(Expr::mul({b_pos, df[kappa], f_q[nu], f_q[sigma]})));
            }
        }
    }
    ScalarConditionReport rep;
    rep.residual = simplify(Expr::add(std::move(terms)));
    rep.z = is_zero(rep.residual, cfg.with_seed(derive_seed(cfg.seed, 400, 0, 0)));
    return rep;
}

ScalarConditionReport force_condition(const std::vector<Expr>& forces, const JetSpace& target,
                                      const Embedding& e, const OracleConfig& cfg) {
    e.validate();
    if (e.source.dim() != 1)
        throw std::invalid_argument("this condition applies to one-dimensional constraints only");
    if (target.fibers != e.target.fibers || target.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    if (static_cast<int>(forces.size()) != target.dim())
        throw std::invalid_argument("one force component per fiber required");
    int m = target.dim();
    ProlongedEmbedding p = prolong_embedding(e, 1);
    Symbol q = e.source.jet(0, 0);
    std::vector<Expr> terms;
    for (int sigma = 0; sigma < m; ++sigma)
        for (int nu = 0; nu < m; ++nu) {
            Expr g = compose(diff(forces[sigma], target.jet(nu, 1)), p);
            terms.push_back(
                Expr::mul({g, diff(e.components[sigma], q), diff(e.components[nu], q)}));
        }
    ScalarConditionReport rep;
    rep.residual = simplify(Expr::add(std::move(terms)));
    rep.z = is_zero(rep.residual, cfg.with_seed(derive_seed(cfg.seed, 401, 0, 0)));
    return rep;
}

ABDecomposition induce_affine(const ABDecomposition& d, const Embedding& e) {
    e.validate();
    if (d.space.fibers != e.target.fibers || d.space.base != e.target.base)
        throw std::invalid_argument("constraint target does not match the system space");
    int m = d.space.dim();
    int n = e.source.dim();
    ProlongedEmbedding p = prolong_embedding(e, 1);
    ABDecomposition out;
    out.space = e.source.widened(2);
    out.A.resize(n);
    out.B.assign(n, std::vector<Expr>(n));
    std::vector<std::vector<Expr>> fq(m, std::vector<Expr>(n));
    for (int sigma = 0; sigma < m; ++sigma)
        for (int j = 0; j < n; ++j) fq[sigma][j] = diff(e.components[sigma], e.source.jet(j, 0));
    for (int j = 0; j < n; ++j) {
        std::vector<Expr> aterms;
        for (int sigma = 0; sigma < m; ++sigma) {
            aterms.push_back(Expr::mul({compose(d.A[sigma], p), fq[sigma][j]}));
            for (int nu = 0; nu < m; ++nu) {
                // Second fundamental form contraction with the velocity square.
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) {
                        Expr hess = diff(fq[nu][i], e.source.jet(k, 0));
                        if (hess.is_zero_literal()) continue;
                        aterms.push_back(Expr::mul({compose(d.B[sigma][nu], p), fq[sigma][j], hess,
                                                    Expr::sym(e.source.jet(i, 1)),
                                                    Expr::sym(e.source.jet(k, 1))}));
                    }
            }
        }
        out.A[j] = simplify(Expr::add(std::move(aterms)));
        for (int k = 0; k < n; ++k) {
            std::vector<Expr> bterms;
            for (int sigma = 0; sigma < m; ++sigma)
                for (int nu = 0; nu < m; ++nu)
                    bterms.push_back(
                        Expr::mul({compose(d.B[sigma][nu], p), fq[sigma][j], fq[nu][k]}));
            out.B[j][k] = simplify(Expr::add(std::move(bterms)));
        }
    }
    return out;
}

std::optional<std::string> immersion_warning(const Embedding& e, const OracleConfig& cfg) {
    e.validate();
    int n = e.source.dim();
    int m = e.target.dim();
    std::set<Symbol> syms;
    for (const Expr& c : e.components) c.collect_symbols(syms);
    for (int i = 0; i < n; ++i) syms.insert(e.source.jet(i, 0));
    std::vector<std::vector<Expr>> J(m, std::vector<Expr>(n));
    for (int sigma = 0; sigma < m; ++sigma)
        for (int i = 0; i < n; ++i) J[sigma][i] = diff(e.components[sigma], e.source.jet(i, 0));
    for (std::uint64_t index = 0; index < 8; ++index) {
        Assignment a;
        for (const Symbol& s : syms) a[s] = sample_value(cfg, index, s);
        std::vector<std::vector<double>> num(m, std::vector<double>(n));
        try {
            for (int sigma = 0; sigma < m; ++sigma)
                for (int i = 0; i < n; ++i) num[sigma][i] = eval(J[sigma][i], a);
        } catch (const EvalError&) {
            continue;
        }
        // Column rank by Gaussian elimination with a pivot floor.
        int rank = 0;
        for (int col = 0; col < n && rank < m; ++col) {
            int piv = -1;
            double best = 1e-9;
            for (int row = rank; row < m; ++row)
                if (std::abs(num[row][col]) > best) {
                    best = std::abs(num[row][col]);
                    piv = row;
                }
            if (piv < 0) continue;
            std::swap(num[piv], num[rank]);
            for (int row = 0; row < m; ++row) {
                if (row == rank) continue;
                double fac = num[row][col] / num[rank][col];
                for (int c2 = col; c2 < n; ++c2) num[row][c2] -= fac * num[rank][c2];
            }
            ++rank;
        }
        if (rank < n)
            return "constraint Jacobian drops rank at a sampled point (sample " +
                   std::to_string(index) + "); the map may fail to be an immersion";
    }
    return std::nullopt;
}

// --- catalog ------------------------------------------------------------

namespace {

JetSpace source_space(const JetSpace& target, std::vector<std::string> fibers) {
    JetSpace s;
    s.base = target.base;
    s.fibers = std::move(fibers);
    s.order = std::max(2, target.order);
    return s;
}

} // namespace

const std::vector<CatalogEntry>& embedding_catalog() {
    static const std::vector<CatalogEntry> entries{
        {"circle", "circle r0", 2,
         "x = r0*cos(q), y = r0*sin(q); chart coordinate q"},
        {"sphere", "sphere", 3,
         "x = cos(phi)*sin(theta), y = sin(phi)*sin(theta), z = cos(theta); chart coordinates "
         "phi, theta"},
        {"mobius", "mobius r a", 3,
         "x = (r + tau*cos(phi/2))*cos(phi), y = (r + tau*cos(phi/2))*sin(phi), z = "
         "tau*sin(phi/2); chart coordinates phi, tau; wideness parameter a is recorded only"},
        {"slice", "slice n c_(n+1) ... c_m", -1,
         "q^j for the first n fibers, constants c for the remaining ones; chart coordinates "
         "q1..qn"},
    };
    return entries;
}

Embedding make_catalog_embedding(const std::string& name, const std::vector<Rational>& args,
                                 const JetSpace& target) {
    auto need_dim = [&](int m) {
        if (target.dim() != m)
            throw std::invalid_argument("catalog constraint " + name + " needs an ambient dimension of " +
                                        std::to_string(m));
    };
    Embedding e;
    e.target = target;
    if (name == "circle") {
        need_dim(2);
        if (args.size() != 1) throw std::invalid_argument("usage: circle r0");
        e.source = source_space(target, {"q"});
        Expr q = Expr::sym(e.source.jet(0, 0));
        Expr r0 = Expr::number(args[0]);
        e.components = {Expr::mul({r0, Expr::fun(FunKind::Cos, q)}),
                        Expr::mul({r0, Expr::fun(FunKind::Sin, q)})};
    } else if (name == "sphere") {
        need_dim(3);
        if (!args.empty()) throw std::invalid_argument("usage: sphere");
        e.source = source_space(target, {"phi", "theta"});
        Expr phi = Expr::sym(e.source.jet(0, 0));
        Expr theta = Expr::sym(e.source.jet(1, 0));
        e.components = {Expr::mul({Expr::fun(FunKind::Cos, phi), Expr::fun(FunKind::Sin, theta)}),
                        Expr::mul({Expr::fun(FunKind::Sin, phi), Expr::fun(FunKind::Sin, theta)}),
                        Expr::fun(FunKind::Cos, theta)};
    } else if (name == "mobius") {
        need_dim(3);
        if (args.size() != 2) throw std::invalid_argument("usage: mobius r a");
        e.source = source_space(target, {"phi", "tau"});
        Expr phi = Expr::sym(e.source.jet(0, 0));
        Expr tau = Expr::sym(e.source.jet(1, 0));
        Expr half_phi = Expr::mul({Expr::number(Rational(1, 2)), phi});
        Expr radial = Expr::add({Expr::number(args[0]),
                                 Expr::mul({tau, Expr::fun(FunKind::Cos, half_phi)})});
        e.components = {Expr::mul({radial, Expr::fun(FunKind::Cos, phi)}),
                        Expr::mul({radial, Expr::fun(FunKind::Sin, phi)}),
                        Expr::mul({tau, Expr::fun(FunKind::Sin, half_phi)})};
    } else if (name == "slice") {
        if (args.empty()) throw std::invalid_argument("usage: slice n c_(n+1) ... c_m");
        if (!args[0].is_integer() || args[0].num < 1)
            throw std::invalid_argument("slice dimension must be a positive integer");
        int n = static_cast<int>(args[0].num);
        int m = target.dim();
        if (n > m) throw std::invalid_argument("slice dimension exceeds the ambient dimension");
        if (static_cast<int>(args.size()) != 1 + (m - n))
            throw std::invalid_argument("slice needs one constant per fixed fiber");
        std::vector<std::string> fibers;
        for (int i = 1; i <= n; ++i) fibers.push_back("q" + std::to_string(i));
        e.source = source_space(target, std::move(fibers));
        for (int j = 0; j < n; ++j) e.components.push_back(Expr::sym(e.source.jet(j, 0)));
        for (int k = n; k < m; ++k) e.components.push_back(Expr::number(args[1 + (k - n)]));
    } else {
        throw std::invalid_argument("unknown catalog constraint " + name +
                                    "; run the catalog command for the list of built-ins");
    }
    e.validate();
    return e;
}

} // namespace varsub
