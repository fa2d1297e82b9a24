// varsub: decides whether a second-order system of ordinary differential
// equations comes from a Lagrangian, pulls systems back onto constraint
// surfaces, and reports whether the constrained system is variational.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "varsub/problem.hpp"
#include "varsub/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;
constexpr int kExitRouteDisagreement = 3;

struct Options {
    std::string file;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
    bool json = false;
    bool check = false;
};

varsub::OracleConfig effective_oracle(const varsub::Problem& p, const Options& o) {
    varsub::OracleConfig cfg = p.oracle();
    if (o.seed) cfg.seed = *o.seed;
    if (o.samples) cfg.samples = *o.samples;
    if (o.tol) cfg.tol = *o.tol;
    return cfg;
}

void warn_if_not_immersion(const varsub::Embedding& e, const varsub::OracleConfig& cfg) {
    if (auto msg = varsub::immersion_warning(e, cfg)) std::cerr << "warning: " << *msg << "\n";
}

int cmd_helmholtz(const Options& o) {
    varsub::Problem p = varsub::load_problem(o.file);
    varsub::SourceForm sf = varsub::problem_source_form(p);
    varsub::HelmholtzReport rep = varsub::helmholtz(sf, effective_oracle(p, o));
    if (o.json) {
        std::cout << varsub::helmholtz_json(rep) << "\n";
    } else {
        varsub::print_helmholtz(std::cout, rep);
        if (p.topology) varsub::print_global(std::cout, varsub::global_status(rep.pass, *p.topology));
    }
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_el(const Options& o) {
    varsub::Problem p = varsub::load_problem(o.file);
    if (p.kind != varsub::SystemKind::Lagrangian)
        throw std::invalid_argument("el needs a system given by a lagrangian");
    varsub::SourceForm sf = varsub::problem_source_form(p);
    int code = kExitPass;
    std::optional<varsub::HelmholtzReport> rep;
    if (o.check) {
        rep = varsub::helmholtz(sf, effective_oracle(p, o));
        if (!rep->pass) code = kExitFail;
    }
    if (o.json) {
        nlohmann::json j = nlohmann::json::parse(varsub::source_form_json(sf));
        if (rep) j["helmholtz"] = nlohmann::json::parse(varsub::helmholtz_json(*rep));
        std::cout << j.dump(2) << "\n";
    } else {
        varsub::print_source_form(std::cout, sf, "source form of the density");
        if (rep) varsub::print_helmholtz(std::cout, *rep);
    }
    return code;
}

int cmd_induce(const Options& o) {
    varsub::Problem p = varsub::load_problem(o.file);
    if (!p.embedding) throw std::invalid_argument("induce needs an [embedding] section");
    varsub::OracleConfig cfg = effective_oracle(p, o);
    warn_if_not_immersion(*p.embedding, cfg);
    varsub::SourceForm sf = varsub::problem_source_form(p);
    varsub::SourceForm induced = varsub::induce_source_form(sf, *p.embedding);
    std::optional<varsub::HelmholtzReport> rep;
    std::optional<varsub::GlobalVerdict> global;
    int code = kExitPass;
    if (o.check) {
        rep = varsub::helmholtz(induced, cfg);
        if (p.topology) global = varsub::global_status(rep->pass, *p.topology);
        if (!rep->pass) code = kExitFail;
    }
    if (o.json) {
        nlohmann::json j;
        j["induced"] = nlohmann::json::parse(varsub::source_form_json(induced));
        if (rep) j["induced_helmholtz"] = nlohmann::json::parse(varsub::helmholtz_json(*rep));
        if (global) {
            j["global_status"] = varsub::global_status_name(global->status);
            j["global_explanation"] = global->explanation;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        varsub::print_source_form(std::cout, induced, "induced source form");
        if (rep) varsub::print_helmholtz(std::cout, *rep);
        if (global) varsub::print_global(std::cout, *global);
    }
    return code;
}

int cmd_check(const Options& o) {
    varsub::Problem p = varsub::load_problem(o.file);
    if (!p.embedding) throw std::invalid_argument("check needs an [embedding] section");
    varsub::OracleConfig cfg = effective_oracle(p, o);
    warn_if_not_immersion(*p.embedding, cfg);
    varsub::SourceForm sf = varsub::problem_source_form(p);
    varsub::HelmholtzReport original = varsub::helmholtz(sf, cfg);
    varsub::SubmanifoldVerdict v = varsub::is_variational_submanifold(sf, *p.embedding, cfg);
    std::optional<varsub::GlobalVerdict> global;
    if (p.topology) global = varsub::global_status(v.variational, *p.topology);

    // For density-given systems the pulled-back density must reproduce the
    // induced system; report it as an extra consistency line.
    std::optional<bool> density_consistent;
    if (p.kind == varsub::SystemKind::Lagrangian) {
        varsub::Lagrangian pulled =
            varsub::pullback_lagrangian({p.space, p.lagrangian}, *p.embedding);
        varsub::SourceForm from_pulled = varsub::euler_lagrange(pulled);
        bool ok = true;
        for (int i = 0; i < v.induced.space.dim() && ok; ++i) {
            varsub::Expr d = varsub::Expr::sub(from_pulled.components[i], v.induced.components[i]);
            ok = varsub::is_zero(d, cfg.with_seed(varsub::derive_seed(cfg.seed, 500, i, 0))).zero;
        }
        density_consistent = ok;
    }

    if (o.json) {
        nlohmann::json j =
            nlohmann::json::parse(varsub::check_json(original, v, global ? &*global : nullptr));
        if (density_consistent) j["pullback_density_consistent"] = *density_consistent;
        std::cout << j.dump(2) << "\n";
    } else {
        varsub::print_helmholtz(std::cout, original);
        varsub::print_source_form(std::cout, v.induced, "induced source form");
        std::cout << "induced residual test (direct): " << (v.direct.pass ? "pass" : "fail")
                  << "\n";
        std::cout << "induced residual test (pullback assembly): "
                  << (v.pullback.pass ? "pass" : "fail") << "\n";
        std::cout << "routes agree; variational submanifold: " << (v.variational ? "yes" : "no")
                  << " (" << varsub::certification_name(v.cert) << ")\n";
        if (v.direct.first_failure) {
            const auto& w = *v.direct.first_failure;
            std::cout << "failure witness: " << w.family << " nu=" << w.nu << " sigma=" << w.sigma
                      << " value=" << w.value << "\n";
        }
        if (density_consistent)
            std::cout << "pulled-back density reproduces the induced system: "
                      << (*density_consistent ? "yes" : "NO") << "\n";
        if (global) varsub::print_global(std::cout, *global);
    }
    if (density_consistent && !*density_consistent) return kExitFail;
    return v.variational ? kExitPass : kExitFail;
}

int cmd_catalog(bool json) {
    if (json) {
        std::cout << varsub::catalog_json() << "\n";
        return kExitPass;
    }
    std::cout << "built-in constraint surfaces ([embedding] catalog = ...):\n";
    for (const auto& e : varsub::embedding_catalog()) {
        std::cout << "  " << e.usage;
        if (e.target_dim > 0) std::cout << "  (ambient dimension " << e.target_dim << ")";
        std::cout << "\n      " << e.description << "\n";
    }
    std::cout << "built-in topologies ([topology] name = ...):\n";
    std::cout << "  name     betti1  betti2\n";
    for (const char* name : {"R^n", "S1", "S2", "mobius", "T2"}) {
        varsub::TopologyInfo info = varsub::lookup_topology(name);
        std::cout << "  " << name << std::string(9 - std::string(name).size(), ' ')
                  << *info.betti1 << "       " << *info.betti2 << "\n";
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variationality of second-order systems and constraint submanifolds"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool needs_file) {
        if (needs_file) sub->add_option("file", o.file, "problem file")->required();
        sub->add_option("--seed", [&](const CLI::results_t& r) {
            o.seed = std::stoull(r[0]);
            return true;
        }, "sampling seed");
        sub->add_option("--samples", [&](const CLI::results_t& r) {
            o.samples = std::stoi(r[0]);
            return true;
        }, "sample count per residual");
        sub->add_option("--tol", [&](const CLI::results_t& r) {
            o.tol = std::stod(r[0]);
            return true;
        }, "zero-test tolerance");
        sub->add_flag("--json", o.json, "machine-readable output");
        sub->add_flag("--check", o.check, "run the residual verdict as well");
    };

    CLI::App* helm = app.add_subcommand("helmholtz", "local variationality of the system");
    add_common(helm, true);
    CLI::App* el = app.add_subcommand("el", "source form of a lagrangian density");
    add_common(el, true);
    CLI::App* induce = app.add_subcommand("induce", "pull the system back onto the constraint");
    add_common(induce, true);
    CLI::App* check =
        app.add_subcommand("check", "full verdict: ambient, induced, both routes, topology");
    add_common(check, true);
    CLI::App* catalog = app.add_subcommand("catalog", "list built-in constraints and topologies");
    add_common(catalog, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitError;
    }

    try {
        if (helm->parsed()) return cmd_helmholtz(o);
        if (el->parsed()) return cmd_el(o);
        if (induce->parsed()) return cmd_induce(o);
        if (check->parsed()) return cmd_check(o);
        if (catalog->parsed()) return cmd_catalog(o.json);
    } catch (const varsub::RouteDisagreement& e) {
        std::cerr << "route disagreement: " << e.what() << "\n";
        return kExitRouteDisagreement;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
