#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace varsub {

enum class SymbolKind : std::uint8_t {
    Base,  // the independent variable, usually t
    Jet,   // fiber coordinate derivative y^sigma_l; order 0 is the fiber itself
    Param, // free parameter, constant along solutions
};

// A coordinate symbol. Identity is (kind, name, order); for Jet symbols name
// is the fiber name and order the derivative order, otherwise order is 0.
struct Symbol {
    SymbolKind kind = SymbolKind::Param;
    std::string name;
    int order = 0;

    static Symbol base(std::string n) { return {SymbolKind::Base, std::move(n), 0}; }
    static Symbol jet(std::string n, int l) { return {SymbolKind::Jet, std::move(n), l}; }
    static Symbol param(std::string n) { return {SymbolKind::Param, std::move(n), 0}; }

    // Surface syntax: name, name', name'', name_3, ...
    std::string str() const;

    friend bool operator==(const Symbol& a, const Symbol& b) {
        return a.kind == b.kind && a.order == b.order && a.name == b.name;
    }
    friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }
    friend bool operator<(const Symbol& a, const Symbol& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.name != b.name) return a.name < b.name;
        return a.order < b.order;
    }
};

int cmp(const Symbol& a, const Symbol& b);

// Stable 64-bit identity hash (FNV-1a over kind, name, order); used by the
// sampling oracle, so it must not depend on platform or process.
std::uint64_t symbol_id_hash(const Symbol& s);

using Assignment = std::map<Symbol, double>;

} // namespace varsub
