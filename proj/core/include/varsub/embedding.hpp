#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varsub/variational.hpp"

namespace varsub {

// Time-independent holonomic constraint R x Q -> R x R^m given by closed-form
// components x^sigma = f^sigma(q^1..q^n). Source fiber names must not collide
// with target fiber names.
struct Embedding {
    JetSpace source; // (t, q^i)
    JetSpace target; // (t, x^sigma)
    std::vector<Expr> components; // f^sigma, indexed like target.fibers

    void validate() const;
};

// Derivative-coordinate images of the prolonged constraint:
// table[sigma][l] = (d/dt)^l f^sigma as a source-space expression.
struct ProlongedEmbedding {
    const Embedding* embedding = nullptr;
    int order = 0;
    std::vector<std::vector<Expr>> table;

    // Substitution map sending every target jet symbol (sigma, l<=order) to
    // its image. The shared base variable maps to itself.
    std::map<Symbol, Expr> bindings() const;
};

ProlongedEmbedding prolong_embedding(const Embedding& e, int order);

// eps~_i = sum_sigma (eps_sigma composed with the 2-jet prolongation) *
// df^sigma/dq^i. Widens the working order as needed.
SourceForm induce_source_form(const SourceForm& ambient, const Embedding& e);

Lagrangian pullback_lagrangian(const Lagrangian& ambient, const Embedding& e);

// C[sigma][l][i][s] = d((d/dt)^l f^sigma) / d q^i_s for 0 <= s <= l <= r-1:
// the coefficients expressing pulled-back contact forms in the source
// contact basis.
std::vector<std::vector<std::vector<std::vector<Expr>>>> contact_pullback_coeffs(
    const Embedding& e, int r);

// The constrained residual table assembled from the ambient general
// residuals composed through the prolonged embedding and contracted with the
// contact pullback coefficients. The order-0 family is antisymmetrized (its
// symmetric part is not a coefficient of the assembled 2-contact form).
HelmholtzReport induced_helmholtz_via_pullback(const SourceForm& ambient, const Embedding& e,
                                               const OracleConfig& cfg);

struct RouteDisagreement : std::runtime_error {
    explicit RouteDisagreement(const std::string& m) : std::runtime_error(m) {}
};

struct SubmanifoldVerdict {
    SourceForm induced;
    HelmholtzReport direct;   // residual families of the induced system
    HelmholtzReport pullback; // assembled through the constraint
    bool variational = false;
    Certification cert = Certification::Symbolic;
};

// Runs both routes and requires verdict agreement; a mismatch throws
// RouteDisagreement, which the command line maps to its own exit code.
SubmanifoldVerdict is_variational_submanifold(const SourceForm& ambient, const Embedding& e,
                                              const OracleConfig& cfg);

struct ScalarConditionReport {
    Expr residual;
    ZeroResult z;
};

// Single residual deciding the variational-submanifold property for
// one-dimensional constraints of time-independent affine systems.
ScalarConditionReport one_dim_condition(const ABDecomposition& d, const Embedding& e,
                                        const OracleConfig& cfg);

// Specialization for force systems x''^sigma = F^sigma: contraction of the
// velocity gradient of the force with the constraint tangent.
ScalarConditionReport force_condition(const std::vector<Expr>& forces, const JetSpace& target,
                                      const Embedding& e, const OracleConfig& cfg);

// Induced affine coefficients on a constraint: P_j picks up the second
// fundamental form term, Q_jk is the pulled-back kinetic matrix.
ABDecomposition induce_affine(const ABDecomposition& d, const Embedding& e);

// Numeric full-rank check of df at 8 sampled points; returns a warning
// message when the Jacobian drops rank somewhere.
std::optional<std::string> immersion_warning(const Embedding& e, const OracleConfig& cfg);

// --- built-in constraint catalog ---------------------------------------

struct CatalogEntry {
    std::string name;
    std::string usage;       // e.g. "circle r0"
    int target_dim;          // required m
    std::string description; // exact component formulas
};

const std::vector<CatalogEntry>& embedding_catalog();

// Builds a catalog embedding into the given target space. `args` are the
// numeric arguments after the name. Throws std::invalid_argument for unknown
// names, wrong argument counts, or dimension mismatches.
Embedding make_catalog_embedding(const std::string& name, const std::vector<Rational>& args,
                                 const JetSpace& target);

} // namespace varsub
