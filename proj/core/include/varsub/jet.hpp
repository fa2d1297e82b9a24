#pragma once

#include <map>
#include <string>
#include <vector>

#include "varsub/expr.hpp"

namespace varsub {

// Coordinates on R x R^m with derivative coordinates up to a declared order.
// The declared order bounds what the parser accepts; internally produced
// expressions may carry higher-order symbols (order widening), tracked via
// Expr::max_jet_order.
struct JetSpace {
    std::string base = "t";
    std::vector<std::string> fibers;
    int order = 1;

    int dim() const { return static_cast<int>(fibers.size()); }
    Symbol base_sym() const { return Symbol::base(base); }
    Symbol jet(int fiber_idx, int l) const { return Symbol::jet(fibers.at(fiber_idx), l); }
    Symbol jet(const std::string& fiber, int l) const;
    bool has_fiber(const std::string& name) const;
    int fiber_index(const std::string& name) const; // -1 if absent
    JetSpace widened(int new_order) const;

    // Throws std::invalid_argument on duplicate/reserved/invalid names,
    // empty fiber list, or order < 1.
    void validate() const;
};

// A curve t -> (y^sigma(t)) given by closed-form components in the base
// variable only.
struct Curve {
    std::map<std::string, Expr> components;
};

// Total (formal) derivative along the base direction: d/dt plus promotion of
// every jet coordinate by one order. Raises jet order by one.
Expr total_derivative(const Expr& e, const JetSpace& js);
Expr total_derivative_k(const Expr& e, const JetSpace& js, int k);

// Evaluates the r-jet of a curve at t0: binds the base symbol and every
// (fiber, l) for l <= order with the l-th ordinary derivative of the
// component.
Assignment prolong_curve(const Curve& c, const JetSpace& js, int order, double t0);

} // namespace varsub
