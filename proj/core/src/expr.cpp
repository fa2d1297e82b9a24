#include "varsub/expr.hpp"

#include <algorithm>
#include <cassert>

namespace varsub {

const char* fun_name(FunKind f) {
    switch (f) {
        case FunKind::Sin: return "sin";
        case FunKind::Cos: return "cos";
        case FunKind::Tan: return "tan";
        case FunKind::Exp: return "exp";
        case FunKind::Log: return "log";
        case FunKind::Arcsin: return "arcsin";
        case FunKind::Arccos: return "arccos";
        case FunKind::Arctan: return "arctan";
    }
    return "?";
}

std::string Symbol::str() const {
    if (order == 0) return name;
    if (order == 1) return name + "'";
    if (order == 2) return name + "''";
    return name + "_" + std::to_string(order);
}

int cmp(const Symbol& a, const Symbol& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
    if (a.order != b.order) return a.order < b.order ? -1 : 1;
    return 0;
}

std::uint64_t symbol_id_hash(const Symbol& s) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(s.kind));
    for (unsigned char c : s.name) mix(c);
    mix(0xFF);
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.order)));
    return h;
}

struct Expr::Node {
    NodeKind kind = NodeKind::Number;
    Rational num;
    Symbol sym;
    FunKind fun = FunKind::Sin;
    std::vector<Expr> kids;
    std::size_t hash = 0;
    int maxjet = 0;
};

namespace {

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    v *= 0x9E3779B97F4A7C15ull;
    v ^= v >> 29;
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
}

std::size_t node_hash(const Expr::Node& n) {
    std::uint64_t h = hash_mix(0x2545F4914F6CDD1Dull, static_cast<std::uint64_t>(n.kind));
    switch (n.kind) {
        case NodeKind::Number:
            h = hash_mix(h, static_cast<std::uint64_t>(n.num.num));
            h = hash_mix(h, static_cast<std::uint64_t>(n.num.den));
            break;
        case NodeKind::Pi:
            break;
        case NodeKind::Sym:
            h = hash_mix(h, symbol_id_hash(n.sym));
            break;
        case NodeKind::Fun:
            h = hash_mix(h, static_cast<std::uint64_t>(n.fun));
            break;
        case NodeKind::Pow:
            h = hash_mix(h, static_cast<std::uint64_t>(n.num.num));
            h = hash_mix(h, static_cast<std::uint64_t>(n.num.den));
            break;
        case NodeKind::Mul:
        case NodeKind::Add:
            break;
    }
    for (const Expr& k : n.kids) h = hash_mix(h, k.hash());
    return static_cast<std::size_t>(h);
}

int node_maxjet(const Expr::Node& n) {
    if (n.kind == NodeKind::Sym)
        return n.sym.kind == SymbolKind::Jet ? n.sym.order : 0;
    int m = 0;
    for (const Expr& k : n.kids) m = std::max(m, k.max_jet_order());
    return m;
}

} // namespace

struct ExprBuilder {
    static Expr make(Expr::Node n) {
        n.hash = node_hash(n);
        n.maxjet = node_maxjet(n);
        return Expr(std::make_shared<const Expr::Node>(std::move(n)));
    }
};

namespace {

Expr make_node(Expr::Node n) { return ExprBuilder::make(std::move(n)); }

const Expr& zero_expr() {
    static const Expr e = Expr::number(Rational(0));
    return e;
}
const Expr& one_expr() {
    static const Expr e = Expr::number(Rational(1));
    return e;
}

Rational checked(const std::optional<Rational>& r, const char* what) {
    if (!r) throw std::overflow_error(std::string("rational overflow in ") + what);
    return *r;
}

// Splits a canonical term into (numeric coefficient, remaining key). The key
// of a pure number is the literal one.
std::pair<Rational, Expr> split_coeff(const Expr& t) {
    if (t.kind() == NodeKind::Number) return {t.num(), one_expr()};
    if (t.kind() == NodeKind::Mul && t.kids()[0].kind() == NodeKind::Number) {
        const auto& ks = t.kids();
        if (ks.size() == 2) return {ks[0].num(), ks[1]};
        Expr::Node n;
        n.kind = NodeKind::Mul;
        n.kids.assign(ks.begin() + 1, ks.end());
        return {ks[0].num(), make_node(std::move(n))};
    }
    return {Rational(1), t};
}

std::pair<Expr, Rational> split_power(const Expr& f) {
    if (f.kind() == NodeKind::Pow) return {f.kids()[0], f.exponent()};
    return {f, Rational(1)};
}

} // namespace

Expr::Expr() : n_(zero_expr().n_) {}

Expr Expr::number(const Rational& r) {
    Node n;
    n.kind = NodeKind::Number;
    n.num = r;
    return make_node(std::move(n));
}

Expr Expr::pi() {
    Node n;
    n.kind = NodeKind::Pi;
    return make_node(std::move(n));
}

Expr Expr::sym(const Symbol& s) {
    Node n;
    n.kind = NodeKind::Sym;
    n.sym = s;
    return make_node(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.kind() == NodeKind::Add)
            flat.insert(flat.end(), t.kids().begin(), t.kids().end());
        else
            flat.push_back(std::move(t));
    }
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> coeffs;
    for (const auto& t : flat) {
        auto [c, key] = split_coeff(t);
        if (key.is_one_literal()) {
            constant = checked(rat_add(constant, c), "sum");
        } else {
            auto it = coeffs.find(key);
            if (it == coeffs.end())
                coeffs.emplace(key, c);
            else
                it->second = checked(rat_add(it->second, c), "sum");
        }
    }
    std::vector<Expr> out;
    if (!constant.is_zero()) out.push_back(number(constant));
    for (const auto& [key, c] : coeffs) {
        if (c.is_zero()) continue;
        if (c.is_one())
            out.push_back(key);
        else
            out.push_back(mul({number(c), key}));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    Node n;
    n.kind = NodeKind::Add;
    n.kids = std::move(out);
    return make_node(std::move(n));
}

Expr Expr::sub(const Expr& a, const Expr& b) { return add({a, neg(b)}); }

Expr Expr::mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == NodeKind::Mul)
            flat.insert(flat.end(), f.kids().begin(), f.kids().end());
        else
            flat.push_back(std::move(f));
    }
    Rational coeff(1);
    std::map<Expr, Rational, ExprLess> pows;
    for (const auto& f : flat) {
        if (f.kind() == NodeKind::Number) {
            if (f.num().is_zero()) return zero_expr();
            coeff = checked(rat_mul(coeff, f.num()), "product");
            continue;
        }
        auto [base, e] = split_power(f);
        auto it = pows.find(base);
        if (it == pows.end())
            pows.emplace(base, e);
        else
            it->second = checked(rat_add(it->second, e), "product");
    }
    if (coeff.is_zero()) return zero_expr();
    std::vector<Expr> out;
    bool rerun = false;
    for (const auto& [base, e] : pows) {
        if (e.is_zero()) continue;
        Expr p = pow(base, e);
        if (p.kind() == NodeKind::Number) {
            coeff = checked(rat_mul(coeff, p.num()), "product");
            if (coeff.is_zero()) return zero_expr();
            continue;
        }
        if (p.kind() == NodeKind::Mul) rerun = true;
        out.push_back(p);
    }
    if (rerun) {
        out.push_back(number(coeff));
        return mul(std::move(out));
    }
    if (out.empty()) return number(coeff);
    if (out.size() == 1 && coeff.is_one()) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    if (!coeff.is_one()) out.insert(out.begin(), number(coeff));
    Node n;
    n.kind = NodeKind::Mul;
    n.kids = std::move(out);
    return make_node(std::move(n));
}

Expr Expr::div(const Expr& a, const Expr& b) { return mul({a, pow(b, Rational(-1))}); }

Expr Expr::neg(const Expr& a) { return mul({integer(-1), a}); }

Expr Expr::pow(const Expr& base, const Rational& e) {
    if (e.is_zero()) return one_expr();
    if (e.is_one()) return base;
    if (base.kind() == NodeKind::Number) {
        const Rational& b = base.num();
        if (b.is_zero()) {
            if (!e.negative()) return zero_expr();
            // 0 to a negative power: keep the node, evaluation reports it.
        } else if (e.is_integer()) {
            if (auto r = rat_pow(b, e.num)) return number(*r);
        } else if (auto root = rat_root(b, e.den)) {
            if (auto r = rat_pow(*root, e.num)) return number(*r);
        }
    }
    if (base.kind() == NodeKind::Pow && e.is_integer()) {
        Rational inner = base.exponent();
        return pow(base.kids()[0], checked(rat_mul(inner, e), "power"));
    }
    if (base.kind() == NodeKind::Mul && e.is_integer()) {
        std::vector<Expr> parts;
        parts.reserve(base.kids().size());
        for (const Expr& k : base.kids()) parts.push_back(pow(k, e));
        return mul(std::move(parts));
    }
    Node n;
    n.kind = NodeKind::Pow;
    n.num = e;
    n.kids.push_back(base);
    return make_node(std::move(n));
}

Expr Expr::fun(FunKind f, const Expr& a) {
    if (a.kind() == NodeKind::Number) {
        const Rational& v = a.num();
        if (v.is_zero()) {
            switch (f) {
                case FunKind::Sin:
                case FunKind::Tan:
                case FunKind::Arcsin:
                case FunKind::Arctan: return zero_expr();
                case FunKind::Cos:
                case FunKind::Exp: return one_expr();
                default: break;
            }
        }
        if (v.is_one()) {
            if (f == FunKind::Log || f == FunKind::Arccos) return zero_expr();
        }
    }
    Node n;
    n.kind = NodeKind::Fun;
    n.fun = f;
    n.kids.push_back(a);
    return make_node(std::move(n));
}

NodeKind Expr::kind() const { return n_->kind; }
const Rational& Expr::num() const { return n_->num; }
const Symbol& Expr::symbol() const { return n_->sym; }
FunKind Expr::fun_kind() const { return n_->fun; }
const Rational& Expr::exponent() const { return n_->num; }
const std::vector<Expr>& Expr::kids() const { return n_->kids; }
std::size_t Expr::hash() const { return n_->hash; }
int Expr::max_jet_order() const { return n_->maxjet; }

bool Expr::is_zero_literal() const {
    return n_->kind == NodeKind::Number && n_->num.is_zero();
}

bool Expr::is_one_literal() const {
    return n_->kind == NodeKind::Number && n_->num.is_one();
}

std::optional<Rational> Expr::as_rational() const {
    if (n_->kind == NodeKind::Number) return n_->num;
    return std::nullopt;
}

bool Expr::contains(const Symbol& s) const {
    if (n_->kind == NodeKind::Sym) return n_->sym == s;
    for (const Expr& k : n_->kids)
        if (k.contains(s)) return true;
    return false;
}

void Expr::collect_symbols(std::set<Symbol>& out) const {
    if (n_->kind == NodeKind::Sym) {
        out.insert(n_->sym);
        return;
    }
    for (const Expr& k : n_->kids) k.collect_symbols(out);
}

std::set<Symbol> Expr::symbols() const {
    std::set<Symbol> s;
    collect_symbols(s);
    return s;
}

int cmp(const Expr& a, const Expr& b) {
    if (a.n_ == b.n_) return 0;
    if (a.n_->kind != b.n_->kind) return a.n_->kind < b.n_->kind ? -1 : 1;
    switch (a.n_->kind) {
        case NodeKind::Number:
            return cmp(a.n_->num, b.n_->num);
        case NodeKind::Pi:
            return 0;
        case NodeKind::Sym:
            return cmp(a.n_->sym, b.n_->sym);
        case NodeKind::Fun:
            if (a.n_->fun != b.n_->fun) return a.n_->fun < b.n_->fun ? -1 : 1;
            return cmp(a.n_->kids[0], b.n_->kids[0]);
        case NodeKind::Pow: {
            if (int c = cmp(a.n_->kids[0], b.n_->kids[0]); c != 0) return c;
            return cmp(a.n_->num, b.n_->num);
        }
        case NodeKind::Mul:
        case NodeKind::Add: {
            std::size_t n = std::min(a.n_->kids.size(), b.n_->kids.size());
            for (std::size_t i = 0; i < n; ++i)
                if (int c = cmp(a.n_->kids[i], b.n_->kids[i]); c != 0) return c;
            if (a.n_->kids.size() != b.n_->kids.size())
                return a.n_->kids.size() < b.n_->kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

// --- printing ---------------------------------------------------------

namespace {

std::string print_expr(const Expr& e);

std::string print_number_atom(const Rational& r) {
    // Parenthesize where needed by the caller; bare form here.
    return r.str();
}

std::string print_exponent(const Rational& e) {
    if (e.is_integer() && !e.negative()) return std::to_string(e.num);
    return "(" + e.str() + ")";
}

std::string print_pow_positive(const Expr& base, const Rational& e) {
    // e > 0 expected. Chooses sqrt syntax for exponent 1/2.
    if (e == Rational(1, 2)) return "sqrt(" + print_expr(base) + ")";
    std::string b;
    switch (base.kind()) {
        case NodeKind::Sym:
        case NodeKind::Pi:
        case NodeKind::Fun:
            b = print_expr(base);
            break;
        case NodeKind::Number:
            if (base.num().is_integer() && !base.num().negative())
                b = print_number_atom(base.num());
            else
                b = "(" + print_number_atom(base.num()) + ")";
            break;
        default:
            b = "(" + print_expr(base) + ")";
            break;
    }
    if (e.is_one()) return b;
    return b + "^" + print_exponent(e);
}

std::string print_factor(const Expr& f) {
    if (f.kind() == NodeKind::Add) return "(" + print_expr(f) + ")";
    if (f.kind() == NodeKind::Pow) {
        const Rational& e = f.exponent();
        if (!e.negative()) return print_pow_positive(f.kids()[0], e);
        return print_expr(f); // handled by caller for Mul; standalone form
    }
    return print_expr(f);
}

std::string print_mul(const Expr& m) {
    Rational coeff(1);
    std::vector<const Expr*> numer;
    std::vector<std::pair<const Expr*, Rational>> denom; // base, positive exponent
    for (const Expr& k : m.kids()) {
        if (k.kind() == NodeKind::Number) {
            coeff = k.num();
        } else if (k.kind() == NodeKind::Pow && k.exponent().negative()) {
            denom.emplace_back(&k.kids()[0], rat_neg(k.exponent()));
        } else {
            numer.push_back(&k);
        }
    }
    std::string out;
    bool negative = coeff.negative();
    if (negative) coeff = rat_neg(coeff);
    std::vector<std::string> numparts;
    if (!coeff.is_one() || numer.empty()) numparts.push_back(print_number_atom(coeff));
    for (const Expr* f : numer) numparts.push_back(print_factor(*f));
    for (std::size_t i = 0; i < numparts.size(); ++i) {
        if (i) out += "*";
        out += numparts[i];
    }
    for (const auto& [base, e] : denom) {
        out += "/";
        if ((*base).kind() == NodeKind::Add)
            out += e.is_one() ? "(" + print_expr(*base) + ")"
                              : "(" + print_expr(*base) + ")^" + print_exponent(e);
        else
            out += print_pow_positive(*base, e);
    }
    return negative ? "-" + out : out;
}

std::string print_expr(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Number: {
            const Rational& r = e.num();
            if (r.negative()) return "-" + print_number_atom(rat_neg(r));
            return print_number_atom(r);
        }
        case NodeKind::Pi:
            return "pi";
        case NodeKind::Sym:
            return e.symbol().str();
        case NodeKind::Fun:
            return std::string(fun_name(e.fun_kind())) + "(" + print_expr(e.kids()[0]) + ")";
        case NodeKind::Pow: {
            const Rational& ex = e.exponent();
            if (!ex.negative()) return print_pow_positive(e.kids()[0], ex);
            std::string b;
            const Expr& base = e.kids()[0];
            switch (base.kind()) {
                case NodeKind::Sym:
                case NodeKind::Pi:
                case NodeKind::Fun:
                    b = print_expr(base);
                    break;
                default:
                    b = "(" + print_expr(base) + ")";
                    break;
            }
            return b + "^" + print_exponent(ex);
        }
        case NodeKind::Mul:
            return print_mul(e);
        case NodeKind::Add: {
            std::string out;
            bool first = true;
            for (const Expr& t : e.kids()) {
                bool neg = false;
                if (t.kind() == NodeKind::Number && t.num().negative()) neg = true;
                if (t.kind() == NodeKind::Mul && t.kids()[0].kind() == NodeKind::Number &&
                    t.kids()[0].num().negative())
                    neg = true;
                Expr mag = neg ? Expr::neg(t) : t;
                if (first) {
                    out += neg ? "-" + print_expr(mag) : print_expr(mag);
                    first = false;
                } else {
                    out += neg ? " - " : " + ";
                    out += print_expr(mag);
                }
            }
            return out;
        }
    }
    return "?";
}

} // namespace

std::string Expr::str() const { return print_expr(*this); }

} // namespace varsub
