#include "merglift/chordal.hpp"

#include <algorithm>
#include <cmath>

namespace merglift {

double chi(const SphereValue& a, const SphereValue& b) {
    if (!a.is_finite() && !b.is_finite()) return 0.0;
    if (!a.is_finite()) return chi(b, a);
    if (!b.is_finite()) return 1.0 / std::sqrt(1.0 + std::norm(a.value()));
    return std::abs(a.value() - b.value()) /
           std::sqrt((1.0 + std::norm(a.value())) * (1.0 + std::norm(b.value())));
}

ConformalPair conformal(const PlanarDomain& d) {
    const double s = d.scale();
    const Complex t = d.shift();
    if (const auto* disc = std::get_if<Disc>(&d.shape())) {
        Complex center = s * (disc->center - t);
        double radius = s * disc->radius;
        return {[center, radius](Complex z) { return (z - center) / radius; },
                [center, radius](Complex w) { return center + radius * w; }};
    }
    if (const auto* mob = std::get_if<MobiusDisc>(&d.shape())) {
        MobiusDisc m = *mob;
        auto fwd = [m, s, t](Complex z) {
            Complex u = z / s + t;
            return (m.d * u - m.b) / (-m.c * u + m.a);
        };
        auto inv = [m, s, t](Complex w) {
            return s * ((m.a * w + m.b) / (m.c * w + m.d) - t);
        };
        return {fwd, inv};
    }
    throw GeometryError("conformal catalog covers disc and mobius_disc only");
}

SphereValue sphere_eval(const Expr& f, const Assignment& at) {
    try {
        Complex v = evaluate(f, at);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return SphereValue::infinity();
        return SphereValue(v);
    } catch (const EvalError&) {
        return SphereValue::infinity();
    }
}

namespace {

// Expression for the inverse conformal map applied to r*z_v.
Expr pullback_substitution(const PlanarDomain& d, int v, double r) {
    const double s = d.scale();
    const Complex t = d.shift();
    Expr rz = fold_mul(make_const(Complex(r, 0.0)), make_var(v));
    if (const auto* disc = std::get_if<Disc>(&d.shape())) {
        Complex center = s * (disc->center - t);
        double radius = s * disc->radius;
        return fold_add(fold_mul(make_const(Complex(radius, 0.0)), rz), make_const(center));
    }
    if (const auto* m = std::get_if<MobiusDisc>(&d.shape())) {
        Expr num = fold_add(fold_mul(make_const(m->a), rz), make_const(m->b));
        Expr den = fold_add(fold_mul(make_const(m->c), rz), make_const(m->d));
        Expr base = fold_div(num, den);
        return fold_mul(make_const(Complex(s, 0.0)), fold_sub(base, make_const(t)));
    }
    throw GeometryError("conformal catalog covers disc and mobius_disc only");
}

bool factor_is_affine_image(const PlanarDomain& d) {
    return std::holds_alternative<Disc>(d.shape());
}

std::vector<Assignment> closure_grid(const ProductDomain& pd, const GridSpec& grid) {
    // Boundary rings first: the grid must reach the distinguished boundary,
    // where boundary singularities live.
    auto pts = distinguished_boundary(pd, grid.boundary_per_factor * grid.densify,
                                      grid.max_tensor_points * 4, grid.seed + 11);
    auto inner = interior_samples(pd, grid.interior_points, grid.seed + 12);
    pts.insert(pts.end(), inner.begin(), inner.end());
    return pts;
}

}  // namespace

ChordalSeq chordal_approx(const Expr& f, const ProductDomain& pd, int schedule_length,
                          const ApproxOptions& opts) {
    if (schedule_length < 1) throw FitError("schedule length must be >= 1");
    ChordalSeq seq;
    auto grid_pts = closure_grid(pd, opts.grid);

    // Precompute target sphere values on the grid.
    std::vector<SphereValue> f_vals;
    f_vals.reserve(grid_pts.size());
    bool pole_free = true;
    for (const auto& a : grid_pts) {
        f_vals.push_back(sphere_eval(f, a));
        if (!f_vals.back().is_finite()) pole_free = false;
    }

    ConformalPair pair0 = conformal(pd.factors.front().domain);  // validates catalog
    (void)pair0;

    // Unit polydisc in the pullback coordinates.
    ProductDomain polydisc;
    for (const auto& fac : pd.factors)
        polydisc.factors.push_back({fac.var, PlanarDomain(Disc{0.0, 1.0})});

    ApproxOptions fit_opts = opts;
    fit_opts.degree_cap = std::max(opts.degree_cap, 256);

    bool all_affine = true;
    for (const auto& fac : pd.factors)
        if (!factor_is_affine_image(fac.domain)) all_affine = false;

    for (int n = 1; n <= schedule_length; ++n) {
        // Boundary-pole-free targets need no dilation; otherwise push the
        // singularities outside by shrinking toward the conformal center.
        double r = pole_free ? 1.0 : 1.0 - std::pow(2.0, -n);
        double tol = pole_free ? std::pow(2.0, -n) : (1.0 - r) / 4.0;

        Expr pulled = f;
        for (const auto& fac : pd.factors)
            pulled = substitute(pulled, fac.var, pullback_substitution(fac.domain, fac.var, r));

        FitResult fit = approx_to_tolerance(pulled, polydisc, tol, fit_opts);

        CPoly composed;
        if (all_affine) {
            // phi is affine; Q_n(phi(z)) stays a polynomial.
            composed = fit.poly;
            for (const auto& fac : pd.factors) {
                const auto& disc = std::get<Disc>(fac.domain.shape());
                double s = fac.domain.scale();
                Complex center = s * (disc.center - fac.domain.shift());
                double radius = s * disc.radius;
                composed = affine_substitute(composed, fac.var, Complex(1.0 / radius, 0.0),
                                             -center / radius);
            }
        } else {
            // Q_n composed with a Mobius phi is rational; replace it by a
            // polynomial fit within 1/n on the original product.
            Expr q_of_phi = poly_to_expr(fit.poly);
            for (const auto& fac : pd.factors) {
                ConformalPair cp = conformal(fac.domain);
                // phi as an expression: inverse Mobius of the factor.
                const auto* m = std::get_if<MobiusDisc>(&fac.domain.shape());
                if (m) {
                    double s = fac.domain.scale();
                    Complex t = fac.domain.shift();
                    Expr u = fold_add(fold_mul(make_const(Complex(1.0 / s, 0.0)),
                                               make_var(fac.var)),
                                      make_const(t));
                    Expr num = fold_sub(fold_mul(make_const(m->d), u), make_const(m->b));
                    Expr den = fold_add(fold_mul(make_const(-m->c), u), make_const(m->a));
                    q_of_phi = substitute(q_of_phi, fac.var, fold_div(num, den));
                }
            }
            FitResult refit = approx_to_tolerance(q_of_phi, pd, 1.0 / n, fit_opts);
            composed = std::move(refit.poly);
        }

        ChordalStep step;
        step.poly = std::move(composed);
        step.dilation = r;
        for (int v : step.poly.vars()) step.degree = std::max(step.degree, step.poly.degree(v));
        for (size_t k = 0; k < grid_pts.size(); ++k) {
            Complex pv = step.poly.eval(grid_pts[k]);
            step.chi_error = std::max(step.chi_error, chi(SphereValue(pv), f_vals[k]));
            double eu = f_vals[k].is_finite() ? std::abs(pv - f_vals[k].value())
                                              : std::numeric_limits<double>::infinity();
            step.euclid_error = std::max(step.euclid_error, eu);
        }
        seq.steps.push_back(std::move(step));
    }
    return seq;
}

LimitClass classify_limit(const std::vector<CPoly>& seq, const ProductDomain& pd,
                          const std::vector<Assignment>& grid,
                          const ClassifyThresholds& th) {
    if (seq.size() < 2) throw std::invalid_argument("need at least two polynomials");

    std::vector<const Assignment*> interior;
    for (const auto& a : grid) {
        bool in = true;
        for (const auto& fac : pd.factors)
            if (!fac.domain.contains(a.at(fac.var))) in = false;
        if (in) interior.push_back(&a);
    }

    // Infinity branch: min |P_n| over interior, monotone beyond some index and
    // past the threshold at the end.
    if (!interior.empty()) {
        std::vector<double> min_abs;
        for (const auto& p : seq) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto* a : interior) m = std::min(m, std::abs(p.eval(*a)));
            min_abs.push_back(m);
        }
        if (min_abs.back() > th.infinity_min_abs) {
            size_t idx = min_abs.size() - 1;
            while (idx > 0 && min_abs[idx - 1] <= min_abs[idx]) --idx;
            if (idx <= min_abs.size() / 2) return LimitClass::InfinityType;
        }
    }

    // Finite branch: chi-Cauchy against the last element over the whole grid,
    // with finite values on interior points.
    bool cauchy = true;
    const CPoly& last = seq.back();
    for (size_t n = seq.size() / 2; n + 1 < seq.size() && cauchy; ++n) {
        for (const auto& a : grid) {
            double d = chi(SphereValue(seq[n].eval(a)), SphereValue(last.eval(a)));
            if (d > th.chi_cauchy_tol) {
                cauchy = false;
                break;
            }
        }
    }
    if (cauchy) {
        for (const auto* a : interior)
            if (!std::isfinite(std::abs(last.eval(*a)))) cauchy = false;
    }
    return cauchy ? LimitClass::FiniteType : LimitClass::Undetermined;
}

}  // namespace merglift
