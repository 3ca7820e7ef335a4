#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "merglift/expr.hpp"

namespace merglift {

/// Exponent map var -> power, zero exponents never stored.
using MultiIndex = std::map<int, int>;

struct DegreeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hard per-variable degree guard; overridable per call site.
inline constexpr int kDefaultDegreeCap = 128;

/// Sparse multivariate polynomial with complex coefficients.
class CPoly {
public:
    CPoly() = default;
    explicit CPoly(Complex c);
    static CPoly variable(int id);
    static CPoly monomial(const MultiIndex& idx, Complex coeff);

    const std::map<MultiIndex, Complex>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    int degree(int var) const;
    std::set<int> vars() const;

    void add_term(const MultiIndex& idx, Complex coeff);

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;
    CPoly operator*(Complex s) const;
    CPoly operator-() const;
    CPoly& operator+=(const CPoly& o);

    Complex eval(const Assignment& point) const;

    bool operator==(const CPoly&) const = default;

private:
    std::map<MultiIndex, Complex> terms_;
};

/// d/dz_v, exact on coefficients.
CPoly derive(const CPoly& p, int v);

CPoly derive(const CPoly& p, const MultiOrder& d);

/// n-fold antiderivative in z_v with all integration constants zero
/// (vanishing at z_v = 0 together with its first n-1 derivatives in z_v).
CPoly antiderive_from_zero(const CPoly& p, int v, int times,
                           int degree_cap = kDefaultDegreeCap);

/// Substitute z_v -> a*z_v + b and expand.
CPoly affine_substitute(const CPoly& p, int v, Complex a, Complex b);

/// Convert a polynomial-shaped expression (constants, variables, + - * ^,
/// division by a nonzero constant) to CPoly; nullopt for transcendental nodes.
std::optional<CPoly> expr_to_poly(const Expr& e, int degree_cap = kDefaultDegreeCap);

Expr poly_to_expr(const CPoly& p);

}  // namespace merglift
