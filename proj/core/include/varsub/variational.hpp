#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varsub/expr.hpp"
#include "varsub/jet.hpp"
#include "varsub/oracle.hpp"

namespace varsub {

struct Lagrangian {
    JetSpace space;
    Expr density;
};

// Source form eps_sigma dy^sigma ^ dt; one component per fiber.
struct SourceForm {
    JetSpace space;
    std::vector<Expr> components;

    void validate() const; // sizes and component order against space.order
};

struct ResidualEntry {
    int nu = 0;
    int sigma = 0;
    int kappa = -1; // only the velocity-curl family of the A/B test uses it
    Expr expr;
    ZeroResult z;
};

struct ResidualFamily {
    std::string label;
    int l = 0; // derivative order of the contact direction; -1 for A/B families
    std::vector<ResidualEntry> entries;
};

struct FailureWitness {
    std::string family;
    int l = 0;
    int nu = 0;
    int sigma = 0;
    int kappa = -1;
    Assignment point;
    double value = 0.0;
};

struct HelmholtzReport {
    int order = 0;
    std::string normalization;
    std::string normalization_note;
    std::vector<ResidualFamily> families;
    bool pass = false;
    Certification cert = Certification::Symbolic;
    std::optional<FailureWitness> first_failure;
    int effective_order = 0;
    OracleConfig oracle;
};

// E_sigma(L) = dL/dy^sigma + sum_{l=1}^{r} (-1)^l (d/dt)^l dL/dy^sigma_l.
// The result lives on the same space widened to the observed output order.
SourceForm euler_lagrange(const Lagrangian& lag);

// Full local-variationality test. For order-2 systems the three classical
// residual families are reported; for other orders the general alternating
// family. Each entry is zero-tested on its own derived sample stream.
HelmholtzReport helmholtz(const SourceForm& sf, const OracleConfig& cfg);

bool is_locally_variational(const SourceForm& sf, const OracleConfig& cfg);

// The general alternating-sum residual
//   H^l_{nu sigma} = d eps_sigma / dy^nu_l - (-1)^l d eps_nu / dy^sigma_l
//                    - sum_{s=l+1}^{r} (-1)^s C(s,l) (d/dt)^{s-l} d eps_nu / dy^sigma_s.
// Exposed for the pullback route, which composes these entries through a
// prolonged embedding.
Expr general_helmholtz_entry(const SourceForm& sf, int l, int nu, int sigma);

struct NullLagrangianResult {
    bool null = false;
    Certification cert = Certification::Symbolic;
    std::optional<ZeroWitness> witness;
};

NullLagrangianResult is_null_lagrangian(const Lagrangian& lag, const OracleConfig& cfg);

// eps_sigma = A_sigma + B_{sigma nu} * y''^nu with A, B free of second-order
// coordinates.
struct ABDecomposition {
    JetSpace space;
    std::vector<Expr> A;
    std::vector<std::vector<Expr>> B;
};

struct NonlinearAcceleration : std::runtime_error {
    int sigma;
    int nu;
    ZeroWitness witness;
    NonlinearAcceleration(int s, int n, ZeroWitness w)
        : std::runtime_error("component " + std::to_string(s) +
                             " is not affine in the second-order coordinate " + std::to_string(n)),
          sigma(s),
          nu(n),
          witness(std::move(w)) {}
};

// Splits an order-2 source form into A + B y''. Throws NonlinearAcceleration
// when some second partial in the accelerations fails the zero test.
ABDecomposition linear_accel_decompose(const SourceForm& sf, const OracleConfig& cfg);

SourceForm reconstruct(const ABDecomposition& d);

// The four residual families of the local-variationality test stated
// directly on the A/B coefficients: B symmetry, the velocity curl of B, and
// the two mixed A conditions (with the order-1-truncated time derivative).
HelmholtzReport helmholtz_AB(const ABDecomposition& d, const OracleConfig& cfg);

} // namespace varsub
