#include <cmath>
#include <numbers>

#include "varsub/expr.hpp"

namespace varsub {

Expr diff(const Expr& e, const Symbol& v) {
    switch (e.kind()) {
        case NodeKind::Number:
        case NodeKind::Pi:
            return Expr();
        case NodeKind::Sym:
            return e.symbol() == v ? Expr::integer(1) : Expr();
        case NodeKind::Add: {
            std::vector<Expr> parts;
            parts.reserve(e.kids().size());
            for (const Expr& k : e.kids()) parts.push_back(diff(k, v));
            return Expr::add(std::move(parts));
        }
        case NodeKind::Mul: {
            std::vector<Expr> terms;
            const auto& ks = e.kids();
            for (std::size_t i = 0; i < ks.size(); ++i) {
                Expr di = diff(ks[i], v);
                if (di.is_zero_literal()) continue;
                std::vector<Expr> factors;
                factors.reserve(ks.size());
                for (std::size_t j = 0; j < ks.size(); ++j)
                    factors.push_back(i == j ? di : ks[j]);
                terms.push_back(Expr::mul(std::move(factors)));
            }
            return Expr::add(std::move(terms));
        }
        case NodeKind::Pow: {
            const Expr& b = e.kids()[0];
            Expr db = diff(b, v);
            if (db.is_zero_literal()) return Expr();
            Rational ex = e.exponent();
            auto exm1 = rat_sub(ex, Rational(1));
            if (!exm1) throw std::overflow_error("rational overflow in power rule");
            return Expr::mul({Expr::number(ex), Expr::pow(b, *exm1), db});
        }
        case NodeKind::Fun: {
            const Expr& u = e.kids()[0];
            Expr du = diff(u, v);
            if (du.is_zero_literal()) return Expr();
            Expr outer;
            switch (e.fun_kind()) {
                case FunKind::Sin:
                    outer = Expr::fun(FunKind::Cos, u);
                    break;
                case FunKind::Cos:
                    outer = Expr::neg(Expr::fun(FunKind::Sin, u));
                    break;
                case FunKind::Tan: {
                    Expr t = Expr::fun(FunKind::Tan, u);
                    outer = Expr::add({Expr::integer(1), Expr::mul({t, t})});
                    break;
                }
                case FunKind::Exp:
                    outer = Expr::fun(FunKind::Exp, u);
                    break;
                case FunKind::Log:
                    outer = Expr::pow(u, Rational(-1));
                    break;
                case FunKind::Arcsin:
                    outer = Expr::pow(Expr::sub(Expr::integer(1), Expr::mul({u, u})), Rational(-1, 2));
                    break;
                case FunKind::Arccos:
                    outer = Expr::neg(
                        Expr::pow(Expr::sub(Expr::integer(1), Expr::mul({u, u})), Rational(-1, 2)));
                    break;
                case FunKind::Arctan:
                    outer = Expr::pow(Expr::add({Expr::integer(1), Expr::mul({u, u})}), Rational(-1));
                    break;
            }
            return Expr::mul({outer, du});
        }
    }
    return Expr();
}

Expr subst(const Expr& e, const std::map<Symbol, Expr>& bindings) {
    switch (e.kind()) {
        case NodeKind::Number:
        case NodeKind::Pi:
            return e;
        case NodeKind::Sym: {
            auto it = bindings.find(e.symbol());
            return it == bindings.end() ? e : it->second;
        }
        case NodeKind::Add: {
            std::vector<Expr> parts;
            parts.reserve(e.kids().size());
            for (const Expr& k : e.kids()) parts.push_back(subst(k, bindings));
            return Expr::add(std::move(parts));
        }
        case NodeKind::Mul: {
            std::vector<Expr> parts;
            parts.reserve(e.kids().size());
            for (const Expr& k : e.kids()) parts.push_back(subst(k, bindings));
            return Expr::mul(std::move(parts));
        }
        case NodeKind::Pow:
            return Expr::pow(subst(e.kids()[0], bindings), e.exponent());
        case NodeKind::Fun:
            return Expr::fun(e.fun_kind(), subst(e.kids()[0], bindings));
    }
    return e;
}

namespace {

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

double eval_rec(const Expr& e, const Assignment& a, double* max_abs) {
    double v = 0.0;
    switch (e.kind()) {
        case NodeKind::Number:
            v = e.num().to_double();
            break;
        case NodeKind::Pi:
            v = std::numbers::pi_v<double>;
            break;
        case NodeKind::Sym: {
            auto it = a.find(e.symbol());
            if (it == a.end()) throw EvalError("unbound symbol " + e.symbol().str());
            v = it->second;
            break;
        }
        case NodeKind::Add: {
            for (const Expr& k : e.kids()) v += eval_rec(k, a, max_abs);
            v = check_finite(v, "sum");
            break;
        }
        case NodeKind::Mul: {
            v = 1.0;
            for (const Expr& k : e.kids()) v *= eval_rec(k, a, max_abs);
            v = check_finite(v, "product");
            break;
        }
        case NodeKind::Pow: {
            double b = eval_rec(e.kids()[0], a, max_abs);
            const Rational& ex = e.exponent();
            if (ex.is_integer()) {
                if (b == 0.0 && ex.negative()) throw EvalError("zero raised to a negative power");
                v = std::pow(b, static_cast<double>(ex.num));
            } else if (b < 0.0) {
                if (ex.den % 2 == 0) throw EvalError("even root of a negative value");
                double mag = std::pow(-b, ex.to_double());
                v = (ex.num % 2 != 0) ? -mag : mag;
            } else {
                if (b == 0.0 && ex.negative()) throw EvalError("zero raised to a negative power");
                v = std::pow(b, ex.to_double());
            }
            v = check_finite(v, "power");
            break;
        }
        case NodeKind::Fun: {
            double u = eval_rec(e.kids()[0], a, max_abs);
            switch (e.fun_kind()) {
                case FunKind::Sin: v = std::sin(u); break;
                case FunKind::Cos: v = std::cos(u); break;
                case FunKind::Tan: v = std::tan(u); break;
                case FunKind::Exp: v = std::exp(u); break;
                case FunKind::Log:
                    if (u <= 0.0) throw EvalError("log of a non-positive value");
                    v = std::log(u);
                    break;
                case FunKind::Arcsin:
                    if (u < -1.0 || u > 1.0) throw EvalError("arcsin outside [-1, 1]");
                    v = std::asin(u);
                    break;
                case FunKind::Arccos:
                    if (u < -1.0 || u > 1.0) throw EvalError("arccos outside [-1, 1]");
                    v = std::acos(u);
                    break;
                case FunKind::Arctan: v = std::atan(u); break;
            }
            v = check_finite(v, fun_name(e.fun_kind()));
            break;
        }
    }
    if (max_abs && std::abs(v) > *max_abs) *max_abs = std::abs(v);
    return v;
}

} // namespace

double eval(const Expr& e, const Assignment& a) { return eval_rec(e, a, nullptr); }

double eval_with_magnitude(const Expr& e, const Assignment& a, double& max_abs) {
    max_abs = 0.0;
    return eval_rec(e, a, &max_abs);
}

} // namespace varsub
