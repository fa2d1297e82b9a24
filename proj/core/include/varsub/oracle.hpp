#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "varsub/expr.hpp"
#include "varsub/jet.hpp"

namespace varsub {

// Sampling PRNG identifier recorded in reports.
inline constexpr const char* kPrngName = "splitmix64";

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

struct OracleConfig {
    std::uint64_t seed = 42;
    int samples = 32;
    double tol = 1e-8;
    double fd_step = 1e-5;
    Interval box;                              // default per-symbol interval
    std::map<std::string, Interval> box_overrides; // keyed by surface syntax, e.g. "x'"

    OracleConfig with_seed(std::uint64_t s) const {
        OracleConfig c = *this;
        c.seed = s;
        return c;
    }
};

// Derives an independent substream seed; used to give each residual entry its
// own deterministic sample stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Deterministic sample: the value depends only on (seed, index, symbol) and
// the symbol's box, never on evaluation order.
double sample_value(const OracleConfig& cfg, std::uint64_t index, const Symbol& s);

// Binds every symbol of the given jet space (base and all fiber derivatives
// up to its order). Same (cfg.seed, index) always produces the same point.
Assignment sample_point(const JetSpace& js, const OracleConfig& cfg, std::uint64_t index);

struct ZeroWitness {
    Assignment point;
    double value = 0.0;
};

enum class Certification { Symbolic, Probabilistic };

struct ZeroResult {
    bool zero = false;
    Certification cert = Certification::Probabilistic;
    std::optional<ZeroWitness> witness; // set when zero == false

    explicit operator bool() const { return zero; }
};

struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& m) : std::runtime_error(m) {}
};

// Probabilistic zero test. Returns a symbolic certificate when simplify
// reduces the expression to the literal zero; otherwise samples the free
// symbols over their boxes and accepts |value| <= tol * (1 + max subterm
// magnitude) at every valid point. Domain errors are resampled; 10 * samples
// consecutive failures raise OracleError. Deterministic for a fixed seed.
ZeroResult is_zero(const Expr& e, const OracleConfig& cfg);

struct FdReport {
    bool pass = false;
    double max_rel_error = 0.0;
};

// Central-difference check of diff(e, v) (or of a supplied claimed
// derivative, for negative controls). Relative tolerance 1e-5 * (1 + |exact|).
FdReport fd_check(const Expr& e, const Symbol& v, const OracleConfig& cfg);
FdReport fd_check_against(const Expr& e, const Symbol& v, const Expr& claimed,
                          const OracleConfig& cfg);

// Checks the total derivative against the ordinary derivative of the
// composition with a prolonged curve.
FdReport curve_consistency(const Expr& e, const JetSpace& js, const Curve& c,
                           const OracleConfig& cfg);
FdReport curve_consistency_against(const Expr& e, const JetSpace& js, const Curve& c,
                                   const Expr& claimed, const OracleConfig& cfg);

} // namespace varsub
