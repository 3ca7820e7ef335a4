#include "merglift/tail.hpp"

#include <cmath>

namespace merglift {

BoundRule BoundRule::pseries(double c, double p) {
    if (c < 0 || p <= 1.0) throw TailError("p-series bound needs c >= 0, p > 1");
    return {Kind::PSeries, c, p};
}

BoundRule BoundRule::geometric(double c, double r) {
    if (c < 0 || r <= 0.0 || r >= 1.0) throw TailError("geometric bound needs 0 < r < 1");
    return {Kind::Geometric, c, r};
}

double BoundRule::bound(int n) const {
    switch (kind) {
        case Kind::PSeries:
            return c / std::pow(double(n), param);
        case Kind::Geometric:
            return c * std::pow(param, n);
    }
    return 0.0;
}

double SeriesFunction::tail_bound(int k) const {
    double s = 0.0;
    for (int n = std::max(k, 0) + 1; n <= horizon; ++n) s += bounds.bound(n);
    return s;
}

Expr SeriesFunction::truncated() const {
    Expr acc = make_const(0.0);
    for (int n = 1; n <= horizon; ++n) acc = fold_add(acc, term(n));
    return acc;
}

SeriesFunction series_from_template(const std::string& term_template, BoundRule bounds,
                                    int horizon) {
    SeriesFunction f;
    f.bounds = bounds;
    f.horizon = horizon;
    f.term = [term_template](int n) {
        std::string text;
        for (size_t i = 0; i < term_template.size();) {
            if (term_template.compare(i, 3, "{n}") == 0) {
                text += std::to_string(n);
                i += 3;
            } else {
                text += term_template[i++];
            }
        }
        return parse(text);
    };
    return f;
}

std::set<int> select_finite_support(const SeriesFunction& f, double eps) {
    if (eps <= 0) throw TailError("eps must be positive");
    for (int k = 0; k <= f.horizon; ++k) {
        if (2.0 * f.tail_bound(k) < eps / 2) {
            std::set<int> support;
            // Terms with no free variable contribute a constant regardless of
            // the anchor; dropping them keeps the certificate valid.
            for (int n = 1; n <= k; ++n)
                if (!free_vars(f.term(n)).empty()) support.insert(n);
            return support;
        }
    }
    throw TailError("bounds cannot certify a finite support for this eps");
}

Expr restrict_to_finite(const SeriesFunction& f, const std::set<int>& support,
                        const Assignment& anchor) {
    Expr acc = make_const(0.0);
    for (int n = 1; n <= f.horizon; ++n) {
        Expr t = f.term(n);
        if (!support.count(n)) {
            Complex zeta = 0.0;
            if (auto it = anchor.find(n); it != anchor.end()) zeta = it->second;
            t = restrict_var(t, n, zeta);
        }
        acc = fold_add(acc, t);
    }
    return acc;
}

double counterexample_directional(int m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    double x = 1.0 - 1.0 / m;
    double sum = 0.0, p = 1.0;
    for (int n = 1; n <= m; ++n) {
        sum += p / n;
        p *= x;
    }
    return sum;
}

}  // namespace merglift
