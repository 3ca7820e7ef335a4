#include "merglift/lift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace merglift {

double ApproxReport::max_alpha_error() const {
    double m = 0.0;
    for (const auto& [a, e] : alpha_errors) m = std::max(m, e);
    return m;
}

Expr top_derivative(const Expr& f, const ProductDomain& pd, int n) {
    MultiOrder d;
    for (const auto& fac : pd.factors) d.set(fac.var, n);
    return differentiate(f, d);
}

CPoly T_on_poly(const CPoly& q, const std::vector<int>& vars, int n, int degree_cap) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    CPoly r = q;
    for (int v : vars) r = antiderive_from_zero(r, v, n, degree_cap);
    return r;
}

std::vector<std::pair<CPoly, Expr>> taylor_section(const Expr& f, int v, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::pair<CPoly, Expr>> out;
    double kfact = 1.0;
    for (int k = 0; k < n; ++k) {
        if (k > 0) kfact *= k;
        MultiIndex mi;
        if (k > 0) mi[v] = k;
        CPoly mono = CPoly::monomial(mi, 1.0 / kfact);
        MultiOrder d;
        d.set(v, k);
        out.emplace_back(std::move(mono), restrict_var(differentiate(f, d), v, 0.0));
    }
    return out;
}

namespace {

struct LiftState {
    const ApproxOptions* opts;
    std::vector<BudgetEntry>* ledger;
    int nodes = 0;
    bool converged = true;
};

struct NodeResult {
    CPoly poly;
    double achieved = 0.0;
};

std::string subset_name(const std::vector<int>& vars, unsigned mask,
                        const std::vector<int>& orders) {
    std::ostringstream os;
    os << "S={";
    bool first = true;
    size_t oi = 0;
    for (size_t k = 0; k < vars.size(); ++k) {
        if (!(mask & (1u << k))) continue;
        if (!first) os << ",";
        os << "z" << vars[k] << "^" << orders[oi++];
        first = false;
    }
    os << "}";
    return os.str();
}

NodeResult core_lift(const Expr& f, const ProductDomain& pd, int n, double eps,
                     const std::string& prefix, LiftState& st) {
    ++st.nodes;
    NodeResult out;
    const std::vector<int> vars = pd.var_ids();
    const size_t m = vars.size();

    if (m == 0) {
        out.poly = CPoly(evaluate(f, {}));
        return out;
    }
    if (n == 0) {
        FitResult fit = approx_to_tolerance(f, pd, eps, *st.opts);
        st.ledger->push_back({prefix + "/fit", eps, fit.error});
        if (!fit.converged) st.converged = false;
        out.poly = std::move(fit.poly);
        out.achieved = fit.error;
        return out;
    }

    Expr g = top_derivative(f, pd, n);
    FitResult fitQ = approx_to_tolerance(g, pd, eps / 2, *st.opts);
    st.ledger->push_back({prefix + "/Q", eps / 2, fitQ.error});
    if (!fitQ.converged) st.converged = false;
    out.poly = T_on_poly(fitQ.poly, vars, n, st.opts->degree_cap);
    out.achieved = fitQ.error;

    // F = A + sum over nonempty S of (-1)^{|S|+1} (prod_{v in S} P_v^n) f.
    // Each Taylor-section product is a monomial times a function of the
    // complementary variables, lifted recursively.
    const double leaf_count = std::pow(1.0 + n, double(m)) - 1.0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> svars;
        std::set<int> rest(vars.begin(), vars.end());
        for (size_t k = 0; k < m; ++k)
            if (mask & (1u << k)) {
                svars.push_back(vars[k]);
                rest.erase(vars[k]);
            }
        const size_t j = svars.size();
        const double amp = std::pow(double(n + 1), double(j));
        const double share = (eps / 2) / (amp * leaf_count);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;

        std::vector<int> k_orders(j, 0);
        for (;;) {
            MultiOrder d;
            CPoly mono(1.0);
            double kfact = 1.0;
            for (size_t q = 0; q < j; ++q) {
                d.set(svars[q], k_orders[q]);
                kfact = 1.0;
                for (int t = 2; t <= k_orders[q]; ++t) kfact *= t;
                MultiIndex mi;
                if (k_orders[q] > 0) mi[svars[q]] = k_orders[q];
                mono = mono * CPoly::monomial(mi, 1.0 / kfact);
            }
            Expr h = differentiate(f, d);
            for (int v : svars) h = restrict_var(h, v, 0.0);

            std::string name = prefix + "/" + subset_name(vars, mask, k_orders);
            NodeResult child = core_lift(h, pd.subset(rest), n, share, name, st);
            st.ledger->push_back({name, share, child.achieved});
            out.poly += mono * child.poly * sign;

            size_t q = 0;
            while (q < j && ++k_orders[q] == n) k_orders[q++] = 0;
            if (q == j) break;
        }
    }
    return out;
}

}  // namespace

ApproxReport lift(const LiftRequest& req) {
    ApproxReport rep;
    ProductDomain npd = normalize(req.pd);
    Expr f_norm = to_normalized_coords(req.f, npd);

    LiftState st;
    st.opts = &req.options;
    st.ledger = &rep.ledger;
    NodeResult res = core_lift(f_norm, npd, req.max_order, req.eps, "", st);
    rep.recursion_nodes = st.nodes;
    rep.converged = st.converged;
    rep.poly = denormalize_poly(res.poly, npd);

    // Per-derivative empirical sup errors, in original coordinates.
    auto val_pts = validation_grid(req.pd, req.options.grid);
    const std::vector<int> vars = req.pd.var_ids();
    std::vector<int> alpha(vars.size(), 0);
    for (;;) {
        MultiOrder d;
        for (size_t k = 0; k < vars.size(); ++k) d.set(vars[k], alpha[k]);
        Expr df = differentiate(req.f, d);
        CPoly dp = derive(rep.poly, d);
        rep.alpha_errors[alpha] = empirical_sup_error(df, dp, val_pts);
        size_t k = 0;
        while (k < alpha.size() && ++alpha[k] > req.max_order) alpha[k++] = 0;
        if (k == alpha.size() || alpha.empty()) break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Quadrature oracle for the T identity
// ---------------------------------------------------------------------------

namespace {

struct GaussLegendre {
    std::vector<double> x, w;  // nodes/weights on [0, 1]
};

GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate, nodes on [-1, 1].
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        gl.x[i] = (t + 1.0) / 2.0;
        gl.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return gl;
}

double factorial_d(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// n-fold from-0 antiderivative per variable via the repeated-integration
// kernel: (1/(n-1)!) int_0^z (z-s)^{n-1} E(s) ds, nested over the variables.
Complex quad_T(const Expr& g, const std::vector<int>& vars, size_t idx, int n,
               const Assignment& target, Assignment& point, const GaussLegendre& gl) {
    if (idx == vars.size()) return evaluate(g, point);
    int v = vars[idx];
    Complex zv = target.at(v);
    Complex acc = 0.0;
    for (size_t q = 0; q < gl.x.size(); ++q) {
        double x = gl.x[q];
        point[v] = zv * x;
        Complex inner = quad_T(g, vars, idx + 1, n, target, point, gl);
        acc += gl.w[q] * std::pow(1.0 - x, n - 1) * inner;
    }
    point.erase(v);
    return acc * std::pow(zv, n) / factorial_d(n - 1);
}

}  // namespace

double verify_T_identity(const Expr& f, const ProductDomain& pd, int n,
                         const std::vector<Assignment>& samples) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::vector<int> vars = pd.var_ids();
    const size_t m = vars.size();
    Expr g = top_derivative(f, pd, n);
    GaussLegendre gl = gauss_legendre(32);

    // Segments from 0 must stay inside each factor.
    for (const auto& z : samples)
        for (const auto& fac : pd.factors) {
            Complex zv = z.at(fac.var);
            for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
                if (!fac.domain.contains(t * zv))
                    throw GeometryError("integration segment leaves factor z" +
                                        std::to_string(fac.var));
        }

    double dev = 0.0;
    for (const auto& z : samples) {
        Assignment scratch = z;
        Complex b_quad = quad_T(g, vars, 0, n, z, scratch, gl);

        // Expansion side: B = sum over subsets S of (-1)^{|S|} (prod P_v^n) f.
        Complex b_exp = 0.0;
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            std::vector<int> svars;
            for (size_t k = 0; k < m; ++k)
                if (mask & (1u << k)) svars.push_back(vars[k]);
            double sign = (svars.size() % 2 == 0) ? 1.0 : -1.0;
            if (svars.empty()) {
                b_exp += sign * evaluate(f, z);
                continue;
            }
            std::vector<int> k_orders(svars.size(), 0);
            for (;;) {
                MultiOrder d;
                Complex mono = 1.0;
                for (size_t q = 0; q < svars.size(); ++q) {
                    d.set(svars[q], k_orders[q]);
                    mono *= std::pow(z.at(svars[q]), k_orders[q]) / factorial_d(k_orders[q]);
                }
                Expr h = differentiate(f, d);
                for (int v : svars) h = restrict_var(h, v, 0.0);
                b_exp += sign * mono * evaluate(h, z);
                size_t q = 0;
                while (q < svars.size() && ++k_orders[q] == n) k_orders[q++] = 0;
                if (q == svars.size()) break;
            }
        }
        dev = std::max(dev, std::abs(b_quad - b_exp));
    }
    return dev;
}

}  // namespace merglift
