#pragma once

#include <functional>

#include "merglift/approx.hpp"

namespace merglift {

/// A point of the Riemann sphere: a finite complex number or infinity.
class SphereValue {
public:
    SphereValue() : finite_(true), v_(0.0) {}
    SphereValue(Complex v) : finite_(true), v_(v) {}
    static SphereValue infinity() {
        SphereValue s;
        s.finite_ = false;
        return s;
    }
    bool is_finite() const { return finite_; }
    Complex value() const {
        if (!finite_) throw std::logic_error("value() on infinity");
        return v_;
    }

private:
    bool finite_;
    Complex v_{};
};

/// Chordal distance on the sphere, in [0, 1]:
/// chi(a,b) = |a-b| / sqrt((1+|a|^2)(1+|b|^2)), chi(a,inf) = 1/sqrt(1+|a|^2).
double chi(const SphereValue& a, const SphereValue& b);

/// Forward/inverse conformal maps between a Jordan catalog domain and the
/// closed unit disc, extended to the closures.
struct ConformalPair {
    std::function<Complex(Complex)> forward;  // domain closure -> closed disc
    std::function<Complex(Complex)> inverse;
};

/// Closed-form Mobius pair for disc and mobius_disc factors; throws
/// GeometryError for domains outside the Jordan catalog.
ConformalPair conformal(const PlanarDomain& d);

struct ChordalStep {
    CPoly poly;
    double dilation = 0.0;      // r_n
    double chi_error = 0.0;     // empirical chi-sup on the closure grid
    double euclid_error = 0.0;  // Euclidean sup on the same grid (may be inf)
    int degree = 0;
};

struct ChordalSeq {
    std::vector<ChordalStep> steps;
};

/// Evaluate f as a sphere value: evaluation poles map to infinity.
SphereValue sphere_eval(const Expr& f, const Assignment& at);

/// Chi-uniform polynomial approximants of f on a product of Jordan catalog
/// domains: pull back through the conformal maps, dilate away the boundary
/// singularities (r_n up to 1), fit the dilated pullback, and measure the
/// empirical chi-sup error on a closure grid that includes boundary rings.
ChordalSeq chordal_approx(const Expr& f, const ProductDomain& pd, int schedule_length,
                          const ApproxOptions& opts = {});

enum class LimitClass { FiniteType, InfinityType, Undetermined };

struct ClassifyThresholds {
    double infinity_min_abs = 1e3;
    double chi_cauchy_tol = 1e-3;
};

/// Hurwitz-style dichotomy heuristic on a polynomial sequence.
LimitClass classify_limit(const std::vector<CPoly>& seq, const ProductDomain& pd,
                          const std::vector<Assignment>& grid,
                          const ClassifyThresholds& thresholds = {});

}  // namespace merglift
