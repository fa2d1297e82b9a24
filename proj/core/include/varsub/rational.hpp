#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace varsub {

// Exact rational with int64 numerator/denominator, always in lowest terms,
// denominator positive. Arithmetic goes through 128-bit intermediates; an
// operation that would overflow int64 returns nullopt instead of folding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d);

    bool is_integer() const { return den == 1; }
    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool negative() const { return num < 0; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
};

// Three-way compare by value.
int cmp(const Rational& a, const Rational& b);

std::optional<Rational> rat_add(const Rational& a, const Rational& b);
std::optional<Rational> rat_sub(const Rational& a, const Rational& b);
std::optional<Rational> rat_mul(const Rational& a, const Rational& b);
std::optional<Rational> rat_div(const Rational& a, const Rational& b);
Rational rat_neg(const Rational& a);

// a^e for integer e (e may be negative if a != 0); nullopt on overflow.
std::optional<Rational> rat_pow(const Rational& a, std::int64_t e);

// Exact k-th root if one exists (k >= 1).
std::optional<Rational> rat_root(const Rational& a, std::int64_t k);

} // namespace varsub
