#include "varsub/jet.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace varsub {

namespace {

const std::set<std::string>& reserved_names() {
    static const std::set<std::string> r{"pi",     "sin",    "cos",    "tan",   "sqrt",
                                         "exp",    "log",    "arcsin", "arccos", "arctan"};
    return r;
}

bool valid_name(const std::string& n) {
    if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0]))) return false;
    return std::all_of(n.begin(), n.end(),
                       [](unsigned char c) { return std::isalnum(c); });
}

} // namespace

Symbol JetSpace::jet(const std::string& fiber, int l) const {
    if (!has_fiber(fiber)) throw std::invalid_argument("unknown fiber " + fiber);
    return Symbol::jet(fiber, l);
}

bool JetSpace::has_fiber(const std::string& name) const {
    return std::find(fibers.begin(), fibers.end(), name) != fibers.end();
}

int JetSpace::fiber_index(const std::string& name) const {
    auto it = std::find(fibers.begin(), fibers.end(), name);
    return it == fibers.end() ? -1 : static_cast<int>(it - fibers.begin());
}

JetSpace JetSpace::widened(int new_order) const {
    JetSpace w = *this;
    w.order = std::max(order, new_order);
    return w;
}

void JetSpace::validate() const {
    if (order < 1) throw std::invalid_argument("jet order must be at least 1");
    if (fibers.empty()) throw std::invalid_argument("at least one fiber coordinate required");
    if (!valid_name(base) || reserved_names().count(base))
        throw std::invalid_argument("invalid base variable name " + base);
    std::set<std::string> seen{base};
    for (const auto& f : fibers) {
        if (!valid_name(f) || reserved_names().count(f))
            throw std::invalid_argument("invalid fiber name " + f);
        if (!seen.insert(f).second) throw std::invalid_argument("duplicate coordinate name " + f);
    }
}

Expr total_derivative(const Expr& e, const JetSpace& js) {
    std::set<Symbol> syms = e.symbols();
    for (const Symbol& s : syms) {
        if (s.kind == SymbolKind::Jet && !js.has_fiber(s.name))
            throw std::invalid_argument("jet symbol " + s.str() + " is not a coordinate of this space");
        if (s.kind == SymbolKind::Base && s.name != js.base)
            throw std::invalid_argument("base symbol " + s.str() + " is not the base of this space");
    }
    std::vector<Expr> terms;
    terms.push_back(diff(e, js.base_sym()));
    for (const Symbol& s : syms) {
        if (s.kind != SymbolKind::Jet) continue;
        Expr d = diff(e, s);
        if (d.is_zero_literal()) continue;
        terms.push_back(Expr::mul({Expr::sym(Symbol::jet(s.name, s.order + 1)), d}));
    }
    return Expr::add(std::move(terms));
}

Expr total_derivative_k(const Expr& e, const JetSpace& js, int k) {
    if (k < 0) throw std::invalid_argument("negative derivative order");
    Expr cur = e;
    for (int i = 0; i < k; ++i) cur = total_derivative(cur, js);
    return cur;
}

Assignment prolong_curve(const Curve& c, const JetSpace& js, int order, double t0) {
    Symbol t = js.base_sym();
    for (const auto& [name, comp] : c.components) {
        for (const Symbol& s : comp.symbols())
            if (s != t)
                throw std::invalid_argument("curve component for " + name +
                                            " must depend on the base variable only");
    }
    Assignment a;
    a[t] = t0;
    Assignment at{{t, t0}};
    for (const std::string& f : js.fibers) {
        auto it = c.components.find(f);
        if (it == c.components.end())
            throw std::invalid_argument("curve missing component for fiber " + f);
        Expr d = it->second;
        for (int l = 0; l <= order; ++l) {
            a[Symbol::jet(f, l)] = eval(d, at);
            d = diff(d, t);
        }
    }
    return a;
}

} // namespace varsub
