#pragma once

#include <functional>

#include "merglift/expr.hpp"

namespace merglift {

struct TailError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form per-term absolute bound b_n with exactly summable tails.
struct BoundRule {
    enum class Kind { PSeries, Geometric } kind;
    double c;      // scale
    double param;  // exponent p (p-series) or ratio r (geometric)

    static BoundRule pseries(double c, double p);
    static BoundRule geometric(double c, double r);

    double bound(int n) const;
};

/// f((z_i)) = sum_{n=1}^{horizon} term(n), where term(n) depends only on z_n.
struct SeriesFunction {
    std::function<Expr(int)> term;  // expression in z_n
    BoundRule bounds;
    int horizon = 50;

    /// Exact tail sum of the bounds over (k, horizon].
    double tail_bound(int k) const;

    Expr truncated() const;  // full finite expression up to the horizon
};

/// Build a SeriesFunction from a term template where every occurrence of the
/// placeholder {n} is replaced by the index (e.g. "z{n}^{n} / ({n}*{n})").
SeriesFunction series_from_template(const std::string& term_template, BoundRule bounds,
                                    int horizon);

/// Smallest prefix {1..k} with sum_{n>k} 2*b_n < eps/2. Throws if the bounds
/// cannot certify any finite support.
std::set<int> select_finite_support(const SeriesFunction& f, double eps);

/// Expression in the support variables only; out-of-support terms are folded
/// into constants at the anchor coordinates (default anchor 0).
Expr restrict_to_finite(const SeriesFunction& f, const std::set<int>& support,
                        const Assignment& anchor = {});

/// Directional derivative of sum z_n^n/n^2 at (1-1/m, ..., 1-1/m, 0, ...)
/// in the direction (1, 1, ...): sum_{n=1}^m (1-1/m)^{n-1}/n.
double counterexample_directional(int m);

}  // namespace merglift
