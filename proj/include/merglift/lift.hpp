#pragma once

#include <vector>

#include "merglift/approx.hpp"

namespace merglift {

struct LiftRequest {
    Expr f;
    ProductDomain pd;
    int max_order = 0;   // n: highest derivative order per variable
    double eps = 1e-6;   // total sup-norm error budget
    ApproxOptions options;
};

struct BudgetEntry {
    std::string term;    // which recursion term this fit served
    double allocated = 0.0;
    double achieved = 0.0;
};

struct ApproxReport {
    CPoly poly;  // in the original (denormalized) coordinates
    // empirical sup error of d^alpha(P - f) for every alpha in [0,n]^m,
    // measured in original coordinates. Key: per-variable orders, in the
    // order of pd.factors.
    std::map<std::vector<int>, double> alpha_errors;
    std::vector<BudgetEntry> ledger;
    int recursion_nodes = 0;
    bool converged = true;

    double max_alpha_error() const;
};

/// Symbolic top mixed derivative of order n in every product variable.
Expr top_derivative(const Expr& f, const ProductDomain& pd, int n);

/// The integral operator T restricted to polynomials: n-fold antiderivative
/// from 0 in each listed variable, closed form.
CPoly T_on_poly(const CPoly& q, const std::vector<int>& vars, int n,
                int degree_cap = kDefaultDegreeCap);

/// Degree-(n-1) Taylor section data in variable v: pairs of (z_v^k/k! as a
/// polynomial, the coefficient d^k f / dz_v^k restricted to z_v = 0).
std::vector<std::pair<CPoly, Expr>> taylor_section(const Expr& f, int v, int n);

/// The constructive density algorithm: a single polynomial approximating f
/// and all its mixed derivatives of order <= n per variable.
ApproxReport lift(const LiftRequest& req);

/// Independent consistency oracle: evaluates B = T[d^{nm} f] by iterated
/// Gauss-Legendre quadrature along segments from 0 and compares with the
/// Taylor-section expansion of B. Returns the max deviation over the samples.
/// Requires factors star-shaped about 0 (segments must stay inside).
double verify_T_identity(const Expr& f, const ProductDomain& pd, int n,
                         const std::vector<Assignment>& samples);

}  // namespace merglift
