#include "merglift/poly.hpp"

#include <algorithm>
#include <cmath>

namespace merglift {

CPoly::CPoly(Complex c) {
    if (c != 0.0) terms_[{}] = c;
}

CPoly CPoly::variable(int id) {
    CPoly p;
    p.terms_[{{id, 1}}] = 1.0;
    return p;
}

CPoly CPoly::monomial(const MultiIndex& idx, Complex coeff) {
    CPoly p;
    p.add_term(idx, coeff);
    return p;
}

int CPoly::degree(int var) const {
    int d = 0;
    for (const auto& [idx, c] : terms_) {
        auto it = idx.find(var);
        if (it != idx.end()) d = std::max(d, it->second);
    }
    return d;
}

std::set<int> CPoly::vars() const {
    std::set<int> out;
    for (const auto& [idx, c] : terms_)
        for (const auto& [v, e] : idx) out.insert(v);
    return out;
}

void CPoly::add_term(const MultiIndex& idx, Complex coeff) {
    if (coeff == 0.0) return;
    MultiIndex clean;
    for (const auto& [v, e] : idx) {
        if (e < 0) throw std::invalid_argument("negative exponent");
        if (e > 0) clean[v] = e;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(clean), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

CPoly CPoly::operator+(const CPoly& o) const {
    CPoly r = *this;
    r += o;
    return r;
}

CPoly& CPoly::operator+=(const CPoly& o) {
    for (const auto& [idx, c] : o.terms_) add_term(idx, c);
    return *this;
}

CPoly CPoly::operator-(const CPoly& o) const {
    CPoly r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, -c);
    return r;
}

CPoly CPoly::operator-() const {
    CPoly r;
    for (const auto& [idx, c] : terms_) r.terms_[idx] = -c;
    return r;
}

CPoly CPoly::operator*(Complex s) const {
    CPoly r;
    if (s == 0.0) return r;
    for (const auto& [idx, c] : terms_) {
        Complex v = c * s;
        if (v != 0.0) r.terms_[idx] = v;
    }
    return r;
}

CPoly CPoly::operator*(const CPoly& o) const {
    CPoly r;
    for (const auto& [ia, ca] : terms_) {
        for (const auto& [ib, cb] : o.terms_) {
            MultiIndex idx = ia;
            for (const auto& [v, e] : ib) idx[v] += e;
            r.add_term(idx, ca * cb);
        }
    }
    return r;
}

Complex CPoly::eval(const Assignment& point) const {
    if (terms_.empty()) return 0.0;
    // Horner in the smallest free variable, recursing on grouped coefficients.
    std::set<int> vs = vars();
    if (vs.empty()) return terms_.begin()->second;
    int v = *vs.begin();
    auto it = point.find(v);
    if (it == point.end()) throw EvalError("no value for variable z" + std::to_string(v));
    Complex zv = it->second;

    std::map<int, CPoly> by_exp;
    for (const auto& [idx, c] : terms_) {
        MultiIndex rest = idx;
        int e = 0;
        if (auto f = rest.find(v); f != rest.end()) {
            e = f->second;
            rest.erase(f);
        }
        by_exp[e].add_term(rest, c);
    }
    Complex acc = 0.0;
    int prev = -1;
    for (auto rit = by_exp.rbegin(); rit != by_exp.rend(); ++rit) {
        if (prev >= 0) {
            int gap = prev - rit->first;
            for (int k = 0; k < gap; ++k) acc *= zv;
        }
        acc += rit->second.eval(point);
        prev = rit->first;
    }
    for (int k = 0; k < prev; ++k) acc *= zv;
    return acc;
}

CPoly derive(const CPoly& p, int v) {
    CPoly r;
    for (const auto& [idx, c] : p.terms()) {
        auto it = idx.find(v);
        if (it == idx.end()) continue;
        int e = it->second;
        MultiIndex d = idx;
        if (e == 1)
            d.erase(v);
        else
            d[v] = e - 1;
        r.add_term(d, c * static_cast<double>(e));
    }
    return r;
}

CPoly derive(const CPoly& p, const MultiOrder& d) {
    CPoly r = p;
    for (const auto& [v, o] : d.orders())
        for (int k = 0; k < o; ++k) r = derive(r, v);
    return r;
}

CPoly antiderive_from_zero(const CPoly& p, int v, int times, int degree_cap) {
    if (times < 1) throw std::invalid_argument("times must be >= 1");
    CPoly r;
    for (const auto& [idx, c] : p.terms()) {
        int e = 0;
        if (auto it = idx.find(v); it != idx.end()) e = it->second;
        if (e + times > degree_cap)
            throw DegreeCapError("antiderivative exceeds degree cap in z" + std::to_string(v));
        // z^e -> z^{e+times} * e!/(e+times)!
        double factor = 1.0;
        for (int k = e + 1; k <= e + times; ++k) factor /= k;
        MultiIndex d = idx;
        d[v] = e + times;
        r.add_term(d, c * factor);
    }
    return r;
}

CPoly affine_substitute(const CPoly& p, int v, Complex a, Complex b) {
    CPoly r;
    for (const auto& [idx, c] : p.terms()) {
        int e = 0;
        MultiIndex rest = idx;
        if (auto it = rest.find(v); it != rest.end()) {
            e = it->second;
            rest.erase(it);
        }
        // (a z + b)^e expanded by the binomial theorem.
        CPoly factor(1.0);
        if (e > 0) {
            CPoly lin;
            lin.add_term({{v, 1}}, a);
            lin.add_term({}, b);
            for (int k = 0; k < e; ++k) factor = factor * lin;
        }
        r += factor * CPoly::monomial(rest, c);
    }
    return r;
}

namespace {

std::optional<CPoly> to_poly(const Expr& e, int cap) {
    switch (e->kind) {
        case ExprKind::Constant:
            return CPoly(e->value);
        case ExprKind::Variable:
            return CPoly::variable(e->var);
        case ExprKind::Add: {
            auto a = to_poly(e->a, cap), b = to_poly(e->b, cap);
            if (!a || !b) return std::nullopt;
            return *a + *b;
        }
        case ExprKind::Neg: {
            auto a = to_poly(e->a, cap);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprKind::Mul: {
            auto a = to_poly(e->a, cap), b = to_poly(e->b, cap);
            if (!a || !b) return std::nullopt;
            CPoly r = *a * *b;
            for (int v : r.vars())
                if (r.degree(v) > cap) return std::nullopt;
            return r;
        }
        case ExprKind::Div: {
            if (e->b->kind != ExprKind::Constant || e->b->value == 0.0) return std::nullopt;
            auto a = to_poly(e->a, cap);
            if (!a) return std::nullopt;
            return *a * (1.0 / e->b->value);
        }
        case ExprKind::Pow: {
            auto a = to_poly(e->a, cap);
            if (!a) return std::nullopt;
            CPoly r(1.0);
            for (int k = 0; k < e->exponent; ++k) {
                r = r * *a;
                for (int v : r.vars())
                    if (r.degree(v) > cap) return std::nullopt;
            }
            return r;
        }
        default:
            return std::nullopt;
    }
}

}  // namespace

std::optional<CPoly> expr_to_poly(const Expr& e, int degree_cap) {
    return to_poly(e, degree_cap);
}

Expr poly_to_expr(const CPoly& p) {
    Expr acc = make_const(0.0);
    bool first = true;
    for (const auto& [idx, c] : p.terms()) {
        Expr term = make_const(c);
        for (const auto& [v, e] : idx) term = fold_mul(term, fold_pow(make_var(v), e));
        acc = first ? term : fold_add(acc, term);
        first = false;
    }
    return acc;
}

}  // namespace merglift
