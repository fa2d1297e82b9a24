#include <cstdint>
#include <vector>

#include "varsub/expr.hpp"

namespace varsub {

namespace {

constexpr std::size_t kExpandTermLimit = 20000;

Expr expand(const Expr& e);

// Distributes an expanded product over its sum children. Returns the product
// unchanged when the result would exceed the term limit.
Expr distribute(std::vector<Expr> factors) {
    std::vector<Expr> terms{Expr::integer(1)};
    for (const Expr& f : factors) {
        if (f.kind() == NodeKind::Add) {
            if (terms.size() * f.kids().size() > kExpandTermLimit)
                return Expr::mul(std::move(factors));
            std::vector<Expr> next;
            next.reserve(terms.size() * f.kids().size());
            for (const Expr& t : terms)
                for (const Expr& s : f.kids()) next.push_back(Expr::mul({t, s}));
            terms = std::move(next);
        } else {
            for (Expr& t : terms) t = Expr::mul({t, f});
        }
    }
    return Expr::add(std::move(terms));
}

Expr expand(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Number:
        case NodeKind::Pi:
        case NodeKind::Sym:
            return e;
        case NodeKind::Fun:
            return Expr::fun(e.fun_kind(), expand(e.kids()[0]));
        case NodeKind::Add: {
            std::vector<Expr> parts;
            parts.reserve(e.kids().size());
            for (const Expr& k : e.kids()) parts.push_back(expand(k));
            return Expr::add(std::move(parts));
        }
        case NodeKind::Mul: {
            std::vector<Expr> parts;
            bool any_sum = false;
            parts.reserve(e.kids().size());
            for (const Expr& k : e.kids()) {
                Expr x = expand(k);
                if (x.kind() == NodeKind::Add) any_sum = true;
                parts.push_back(std::move(x));
            }
            if (!any_sum) return Expr::mul(std::move(parts));
            return distribute(std::move(parts));
        }
        case NodeKind::Pow: {
            Expr b = expand(e.kids()[0]);
            const Rational& ex = e.exponent();
            // cos(u)^(2m+r) -> (1 - sin(u)^2)^m cos(u)^r. Even cosine powers
            // are eliminated, so after polynomial collection every sum is in
            // normal form with respect to the squared-sine relation; this is
            // what cancels mixed sin/cos squares across terms.
            if (b.kind() == NodeKind::Fun && b.fun_kind() == FunKind::Cos && ex.is_integer() &&
                ex.num >= 2) {
                std::int64_t m = ex.num / 2;
                Expr one_minus =
                    Expr::sub(Expr::integer(1), Expr::pow(Expr::fun(FunKind::Sin, b.arg()),
                                                          Rational(2)));
                std::vector<Expr> factors(static_cast<std::size_t>(m), one_minus);
                if (ex.num % 2) factors.push_back(b);
                return distribute(std::move(factors));
            }
            if (b.kind() == NodeKind::Add && ex.is_integer() && ex.num >= 2 && ex.num <= 8) {
                std::vector<Expr> factors(static_cast<std::size_t>(ex.num), b);
                Expr d = distribute(std::move(factors));
                if (d.kind() != NodeKind::Mul) return d;
            }
            return Expr::pow(b, ex);
        }
    }
    return e;
}

} // namespace

// Fixpoint of distribution plus even-cosine elimination. Canonical
// construction can form new even cosine powers while a pass distributes, so
// the pass repeats, with a cap because each pass is at worst quadratic in
// the term count.
Expr simplify(const Expr& e) {
    Expr cur = expand(e);
    for (int i = 0; i < 8; ++i) {
        Expr next = expand(cur);
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

} // namespace varsub
