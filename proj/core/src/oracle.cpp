#include "varsub/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace varsub {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_from(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Interval box_for(const OracleConfig& cfg, const Symbol& s) {
    auto it = cfg.box_overrides.find(s.str());
    return it == cfg.box_overrides.end() ? cfg.box : it->second;
}

constexpr double kFdTol = 1e-5;

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(seed ^ 0xA0761D6478BD642Full);
    h = splitmix64(h ^ splitmix64(a + 0x1D8E4E27C47D124Full));
    h = splitmix64(h ^ splitmix64(b + 0x2B7E151628AED2A6ull));
    h = splitmix64(h ^ splitmix64(c + 0x452821E638D01377ull));
    return h;
}

double sample_value(const OracleConfig& cfg, std::uint64_t index, const Symbol& s) {
    std::uint64_t h = splitmix64(cfg.seed ^ 0x6C62272E07BB0142ull);
    h = splitmix64(h ^ splitmix64(index));
    h = splitmix64(h ^ symbol_id_hash(s));
    Interval b = box_for(cfg, s);
    return b.lo + unit_from(h) * (b.hi - b.lo);
}

Assignment sample_point(const JetSpace& js, const OracleConfig& cfg, std::uint64_t index) {
    Assignment a;
    Symbol t = js.base_sym();
    a[t] = sample_value(cfg, index, t);
    for (const std::string& f : js.fibers)
        for (int l = 0; l <= js.order; ++l) {
            Symbol s = Symbol::jet(f, l);
            a[s] = sample_value(cfg, index, s);
        }
    return a;
}

namespace {

Assignment sample_for_symbols(const std::set<Symbol>& syms, const OracleConfig& cfg,
                              std::uint64_t index) {
    Assignment a;
    for (const Symbol& s : syms) a[s] = sample_value(cfg, index, s);
    return a;
}

// Runs fn over `samples` valid points, resampling on EvalError with a budget
// of 10 * samples consecutive failures.
template <typename Fn>
void for_valid_samples(const std::set<Symbol>& syms, const OracleConfig& cfg, Fn&& fn) {
    int valid = 0;
    int consecutive_failures = 0;
    const int budget = 10 * cfg.samples;
    std::uint64_t index = 0;
    while (valid < cfg.samples) {
        Assignment a = sample_for_symbols(syms, cfg, index);
        ++index;
        try {
            if (!fn(a)) return; // early stop requested by caller
            consecutive_failures = 0;
            ++valid;
        } catch (const EvalError&) {
            if (++consecutive_failures >= budget)
                throw OracleError("unable to sample a valid point after " +
                                  std::to_string(budget) + " consecutive domain errors");
        }
    }
}

} // namespace

ZeroResult is_zero(const Expr& e, const OracleConfig& cfg) {
    Expr s = simplify(e);
    ZeroResult r;
    if (s.is_zero_literal()) {
        r.zero = true;
        r.cert = Certification::Symbolic;
        return r;
    }
    r.cert = Certification::Probabilistic;
    std::set<Symbol> syms = s.symbols();
    if (syms.empty()) {
        // Constant that did not fold to zero; decide by one evaluation.
        double mag = 0.0;
        double v = eval_with_magnitude(s, {}, mag);
        r.zero = std::abs(v) <= cfg.tol * (1.0 + mag);
        if (!r.zero) r.witness = ZeroWitness{{}, v};
        return r;
    }
    r.zero = true;
    for_valid_samples(syms, cfg, [&](const Assignment& a) {
        double mag = 0.0;
        double v = eval_with_magnitude(s, a, mag);
        if (std::abs(v) > cfg.tol * (1.0 + mag)) {
            r.zero = false;
            r.witness = ZeroWitness{a, v};
            return false;
        }
        return true;
    });
    return r;
}

FdReport fd_check_against(const Expr& e, const Symbol& v, const Expr& claimed,
                          const OracleConfig& cfg) {
    FdReport rep;
    rep.pass = true;
    std::set<Symbol> syms = e.symbols();
    syms.insert(v);
    for (const Symbol& s : claimed.symbols()) syms.insert(s);
    const double h = cfg.fd_step;
    for_valid_samples(syms, cfg, [&](const Assignment& a) {
        Assignment hi = a, lo = a;
        hi[v] = a.at(v) + h;
        lo[v] = a.at(v) - h;
        double fd = (eval(e, hi) - eval(e, lo)) / (2.0 * h);
        double exact = eval(claimed, a);
        double rel = std::abs(fd - exact) / (1.0 + std::abs(exact));
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
        if (rel > kFdTol) rep.pass = false;
        return true;
    });
    return rep;
}

FdReport fd_check(const Expr& e, const Symbol& v, const OracleConfig& cfg) {
    return fd_check_against(e, v, diff(e, v), cfg);
}

FdReport curve_consistency_against(const Expr& e, const JetSpace& js, const Curve& c,
                                   const Expr& claimed, const OracleConfig& cfg) {
    FdReport rep;
    rep.pass = true;
    int prolong_order = std::max(e.max_jet_order(), claimed.max_jet_order());
    Symbol t = js.base_sym();
    const double h = cfg.fd_step;
    auto composed = [&](double t0) { return eval(e, prolong_curve(c, js, prolong_order, t0)); };
    for_valid_samples({t}, cfg, [&](const Assignment& a) {
        double t0 = a.at(t);
        double fd = (composed(t0 + h) - composed(t0 - h)) / (2.0 * h);
        double exact = eval(claimed, prolong_curve(c, js, prolong_order, t0));
        double rel = std::abs(fd - exact) / (1.0 + std::abs(exact));
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
        if (rel > kFdTol) rep.pass = false;
        return true;
    });
    return rep;
}

FdReport curve_consistency(const Expr& e, const JetSpace& js, const Curve& c,
                           const OracleConfig& cfg) {
    return curve_consistency_against(e, js, c, total_derivative(e, js), cfg);
}

} // namespace varsub
