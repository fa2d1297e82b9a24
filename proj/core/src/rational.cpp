#include "varsub/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace varsub {

namespace {

using i128 = __int128;

bool fits64(i128 v) {
    return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
}

std::optional<Rational> make_reduced(i128 n, i128 d) {
    if (d == 0) return std::nullopt;
    if (d < 0) { n = -n; d = -d; }
    i128 an = n < 0 ? -n : n;
    i128 g = 1;
    {
        i128 a = an, b = d;
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        g = a == 0 ? 1 : a;
    }
    n /= g;
    d /= g;
    if (!fits64(n) || !fits64(d)) return std::nullopt;
    Rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    auto r = make_reduced(n, d);
    if (!r) throw std::invalid_argument("rational with zero denominator");
    *this = *r;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

int cmp(const Rational& a, const Rational& b) {
    i128 lhs = static_cast<i128>(a.num) * b.den;
    i128 rhs = static_cast<i128>(b.num) * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

std::optional<Rational> rat_add(const Rational& a, const Rational& b) {
    return make_reduced(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                        static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> rat_sub(const Rational& a, const Rational& b) {
    return rat_add(a, rat_neg(b));
}

std::optional<Rational> rat_mul(const Rational& a, const Rational& b) {
    return make_reduced(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> rat_div(const Rational& a, const Rational& b) {
    if (b.num == 0) return std::nullopt;
    return make_reduced(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

Rational rat_neg(const Rational& a) {
    Rational r;
    r.num = -a.num;
    r.den = a.den;
    return r;
}

std::optional<Rational> rat_pow(const Rational& a, std::int64_t e) {
    if (e == 0) return Rational(1);
    Rational base = a;
    if (e < 0) {
        if (a.num == 0) return std::nullopt;
        auto inv = make_reduced(a.den, a.num);
        if (!inv) return std::nullopt;
        base = *inv;
        e = -e;
    }
    Rational acc(1);
    for (std::int64_t i = 0; i < e; ++i) {
        auto next = rat_mul(acc, base);
        if (!next) return std::nullopt;
        acc = *next;
    }
    return acc;
}

namespace {

// Exact integer k-th root of v >= 0, or nullopt.
std::optional<std::int64_t> int_root(std::int64_t v, std::int64_t k) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1) return v;
    std::int64_t guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / static_cast<double>(k))));
    for (std::int64_t c = guess > 2 ? guess - 2 : 0; c <= guess + 2; ++c) {
        if (c < 0) continue;
        i128 p = 1;
        bool over = false;
        for (std::int64_t i = 0; i < k; ++i) {
            p *= c;
            if (p > static_cast<i128>(INT64_MAX)) { over = true; break; }
        }
        if (!over && p == static_cast<i128>(v)) return c;
    }
    return std::nullopt;
}

} // namespace

std::optional<Rational> rat_root(const Rational& a, std::int64_t k) {
    if (k < 1) return std::nullopt;
    if (k == 1) return a;
    bool neg = a.num < 0;
    if (neg && k % 2 == 0) return std::nullopt;
    auto rn = int_root(neg ? -a.num : a.num, k);
    auto rd = int_root(a.den, k);
    if (!rn || !rd) return std::nullopt;
    Rational r;
    r.num = neg ? -*rn : *rn;
    r.den = *rd;
    return r;
}

} // namespace varsub
