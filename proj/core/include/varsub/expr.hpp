#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "varsub/rational.hpp"
#include "varsub/symbol.hpp"

namespace varsub {

enum class NodeKind : std::uint8_t { Number, Pi, Sym, Fun, Pow, Mul, Add };

// Unary functions kept as explicit nodes; sqrt is represented as Pow(., 1/2).
enum class FunKind : std::uint8_t { Sin, Cos, Tan, Exp, Log, Arcsin, Arccos, Arctan };

const char* fun_name(FunKind f);

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

// Immutable expression tree. Construction goes through the static builders,
// which maintain the canonical form: sums and products are flattened, sorted
// and like-term/like-base collected, rational constants folded exactly, and
// trivial powers removed. Copies are cheap (shared nodes).
class Expr {
public:
    Expr(); // literal 0

    static Expr number(const Rational& r);
    static Expr integer(std::int64_t n) { return number(Rational(n)); }
    static Expr pi();
    static Expr sym(const Symbol& s);
    static Expr add(std::vector<Expr> terms);
    static Expr sub(const Expr& a, const Expr& b);
    static Expr mul(std::vector<Expr> factors);
    static Expr div(const Expr& a, const Expr& b);
    static Expr neg(const Expr& a);
    static Expr pow(const Expr& base, const Rational& exp);
    static Expr fun(FunKind f, const Expr& arg);
    static Expr sqrt(const Expr& arg) { return pow(arg, Rational(1, 2)); }

    NodeKind kind() const;
    const Rational& num() const;        // Number
    const Symbol& symbol() const;       // Sym
    FunKind fun_kind() const;           // Fun
    const Rational& exponent() const;   // Pow
    const std::vector<Expr>& kids() const; // Add/Mul children, Pow base [0], Fun arg [0]
    const Expr& base() const { return kids()[0]; }
    const Expr& arg() const { return kids()[0]; }

    bool is_number() const { return kind() == NodeKind::Number; }
    bool is_zero_literal() const;
    bool is_one_literal() const;
    std::optional<Rational> as_rational() const;

    // Max jet-symbol order appearing anywhere in the tree; 0 if none.
    int max_jet_order() const;
    bool contains(const Symbol& s) const;
    void collect_symbols(std::set<Symbol>& out) const;
    std::set<Symbol> symbols() const;

    std::size_t hash() const;
    std::string str() const;

    friend int cmp(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return cmp(a, b) != 0; }

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
    friend struct ExprBuilder;
};

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return cmp(a, b) < 0; }
};

// Partial derivative with respect to one symbol; all other symbols are
// treated as independent.
Expr diff(const Expr& e, const Symbol& v);

// Simultaneous substitution of symbols by expressions.
Expr subst(const Expr& e, const std::map<Symbol, Expr>& bindings);

// Numeric evaluation. Throws EvalError on unbound symbols, domain errors
// (log of non-positive, even root of negative, division by zero, arc
// functions outside [-1,1]) and non-finite results.
double eval(const Expr& e, const Assignment& a);

// Evaluation that also reports the largest |value| over all subterms,
// used for the scale-aware zero test.
double eval_with_magnitude(const Expr& e, const Assignment& a, double& max_abs);

// Best-effort canonicalization: expands products over sums and small integer
// powers of sums, recollects, and applies the sin^2+cos^2 contraction over
// identical arguments. Numerically equal to the input at every valid point
// of the input.
Expr simplify(const Expr& e);

} // namespace varsub
