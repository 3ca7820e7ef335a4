#include "merglift/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace merglift {

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::vector<Assignment> distinguished_boundary(const ProductDomain& pd, int per_factor,
                                               int max_points, uint64_t seed) {
    std::vector<std::vector<Complex>> per(pd.factors.size());
    for (size_t k = 0; k < pd.factors.size(); ++k)
        per[k] = pd.factors[k].domain.boundary_samples(per_factor);

    std::vector<Assignment> out;
    double total = 1.0;
    for (const auto& v : per) total *= double(v.size());
    if (total <= double(max_points)) {
        // full tensor
        std::vector<size_t> idx(per.size(), 0);
        for (;;) {
            Assignment a;
            for (size_t k = 0; k < per.size(); ++k) a[pd.factors[k].var] = per[k][idx[k]];
            out.push_back(std::move(a));
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == per[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    } else {
        std::mt19937_64 rng(seed);
        for (int n = 0; n < max_points; ++n) {
            Assignment a;
            for (size_t k = 0; k < per.size(); ++k) {
                std::uniform_int_distribution<size_t> pick(0, per[k].size() - 1);
                a[pd.factors[k].var] = per[k][pick(rng)];
            }
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::vector<Assignment> interior_samples(const ProductDomain& pd, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Assignment> out;
    out.reserve(count);
    for (int n = 0; n < count; ++n) {
        Assignment a;
        for (const auto& f : pd.factors) {
            BBox b = f.domain.bbox();
            std::uniform_real_distribution<double> ux(b.x0, b.x1), uy(b.y0, b.y1);
            Complex z;
            int guard = 0;
            do {
                z = Complex(ux(rng), uy(rng));
                if (++guard > 100000) throw GeometryError("interior sampling failed");
            } while (!f.domain.contains(z));
            a[f.var] = z;
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Assignment> validation_grid(const ProductDomain& pd, const GridSpec& grid) {
    auto pts = distinguished_boundary(pd, grid.boundary_per_factor * grid.densify,
                                      grid.max_tensor_points * 4, grid.seed + 101);
    auto inner = interior_samples(pd, grid.interior_points, grid.seed + 202);
    pts.insert(pts.end(), inner.begin(), inner.end());
    return pts;
}

double empirical_sup_error(const Expr& f, const CPoly& p, const std::vector<Assignment>& pts) {
    double sup = 0.0;
    for (const auto& a : pts) sup = std::max(sup, std::abs(evaluate(f, a) - p.eval(a)));
    return sup;
}

CPoly taylor_approx(const Expr& e, const std::vector<int>& vars, const std::vector<int>& degrees,
                    const std::vector<double>& radii) {
    const size_t m = vars.size();
    if (degrees.size() != m || radii.size() != m) throw FitError("vars/degrees/radii mismatch");
    if (m == 0) return CPoly(evaluate(e, {}));
    for (double r : radii)
        if (r <= 0) throw FitError("radius must be positive");
    for (int d : degrees)
        if (d > kDefaultDegreeCap * 2) throw DegreeCapError("taylor degree beyond cap");

    std::vector<int> dims(m);
    double total = 1.0;
    for (size_t k = 0; k < m; ++k) {
        dims[k] = next_pow2(std::max(2 * (degrees[k] + 2), 32));
        total *= dims[k];
    }
    if (total > double(1 << 22)) throw FitError("taylor tensor too large");

    // Evaluate on the tensor of circles.
    size_t n_total = size_t(total);
    std::vector<Complex> data(n_total);
    std::vector<size_t> stride(m, 1);
    for (size_t k = 1; k < m; ++k) stride[k] = stride[k - 1] * dims[k - 1];
    Assignment a;
    std::vector<int> idx(m, 0);
    for (size_t flat = 0; flat < n_total; ++flat) {
        for (size_t k = 0; k < m; ++k)
            a[vars[k]] = std::polar(radii[k], 2 * M_PI * idx[k] / dims[k]);
        data[flat] = evaluate(e, a);
        size_t k = 0;
        while (k < m && ++idx[k] == dims[k]) idx[k++] = 0;
    }

    // Axis-by-axis partial DFT down to degree+1 coefficients per axis.
    std::vector<int> cur_dims(dims);
    for (size_t ax = 0; ax < m; ++ax) {
        int nin = cur_dims[ax];
        int nout = degrees[ax] + 1;
        std::vector<Complex> twiddle(size_t(nin) * nout);
        for (int q = 0; q < nout; ++q)
            for (int k = 0; k < nin; ++k)
                twiddle[size_t(q) * nin + k] =
                    std::polar(1.0, -2 * M_PI * double(q) * k / nin) /
                    (double(nin) * std::pow(radii[ax], q));

        std::vector<size_t> st(m, 1);
        for (size_t k = 1; k < m; ++k) st[k] = st[k - 1] * cur_dims[k - 1];
        size_t n_cur = st[m - 1] * cur_dims[m - 1];
        size_t n_new = n_cur / nin * nout;
        std::vector<Complex> next(n_new);
        std::vector<size_t> st_new(m, 1);
        std::vector<int> new_dims(cur_dims);
        new_dims[ax] = nout;
        for (size_t k = 1; k < m; ++k) st_new[k] = st_new[k - 1] * new_dims[k - 1];

        std::vector<int> pos(m, 0);
        size_t n_outer = n_cur / nin;
        for (size_t o = 0; o < n_outer; ++o) {
            size_t base_in = 0, base_out = 0;
            for (size_t k = 0; k < m; ++k) {
                if (k == ax) continue;
                base_in += size_t(pos[k]) * st[k];
                base_out += size_t(pos[k]) * st_new[k];
            }
            for (int q = 0; q < nout; ++q) {
                Complex acc = 0.0;
                const Complex* tw = &twiddle[size_t(q) * nin];
                for (int k = 0; k < nin; ++k) acc += data[base_in + size_t(k) * st[ax]] * tw[k];
                next[base_out + size_t(q) * st_new[ax]] = acc;
            }
            size_t k = 0;
            while (k < m) {
                if (k == ax) {
                    ++k;
                    continue;
                }
                if (++pos[k] < cur_dims[k]) break;
                pos[k] = 0;
                ++k;
            }
        }
        data = std::move(next);
        cur_dims = new_dims;
    }

    double maxc = 0.0;
    for (const Complex& c : data) maxc = std::max(maxc, std::abs(c));
    CPoly out;
    std::vector<size_t> st(m, 1);
    for (size_t k = 1; k < m; ++k) st[k] = st[k - 1] * cur_dims[k - 1];
    std::vector<int> alpha(m, 0);
    size_t n_coef = data.size();
    for (size_t flat = 0; flat < n_coef; ++flat) {
        Complex c = data[flat];
        if (std::abs(c) > 1e-14 * std::max(maxc, 1.0)) {
            MultiIndex mi;
            for (size_t k = 0; k < m; ++k)
                if (alpha[k] > 0) mi[vars[k]] = alpha[k];
            out.add_term(mi, c);
        }
        size_t k = 0;
        while (k < m && ++alpha[k] == cur_dims[k]) alpha[k++] = 0;
    }
    return out;
}

FitResult lsq_approx(const Expr& e, const ProductDomain& pd, const std::map<int, int>& degrees,
                     const GridSpec& grid) {
    const size_t m = pd.factors.size();
    if (m == 0) {
        FitResult r;
        r.poly = CPoly(evaluate(e, {}));
        r.method = "lsq";
        return r;
    }

    // Enumerate the monomial box.
    std::vector<int> vars;
    std::vector<int> degs;
    size_t n_cols = 1;
    for (const auto& f : pd.factors) {
        int d = degrees.count(f.var) ? degrees.at(f.var) : 0;
        if (d > kDefaultDegreeCap * 2) throw DegreeCapError("lsq degree beyond cap");
        vars.push_back(f.var);
        degs.push_back(d);
        n_cols *= size_t(d + 1);
    }
    if (n_cols > 6000) throw FitError("basis too large");

    int max_deg = *std::max_element(degs.begin(), degs.end());
    int per_factor = std::max(grid.boundary_per_factor, 2 * (max_deg + 2));
    auto rows = distinguished_boundary(pd, per_factor,
                                       std::max<int>(grid.max_tensor_points, int(2 * n_cols)),
                                       grid.seed);
    if (rows.size() < n_cols) throw FitError("not enough samples for basis size");

    std::vector<MultiIndex> cols;
    cols.reserve(n_cols);
    {
        std::vector<int> alpha(m, 0);
        for (;;) {
            MultiIndex mi;
            for (size_t k = 0; k < m; ++k)
                if (alpha[k] > 0) mi[vars[k]] = alpha[k];
            cols.push_back(std::move(mi));
            size_t k = 0;
            while (k < m && ++alpha[k] > degs[k]) alpha[k++] = 0;
            if (k == m) break;
        }
    }

    Eigen::MatrixXcd A(rows.size(), cols.size());
    Eigen::VectorXcd rhs(rows.size());
    // Per-factor power tables keep the Vandermonde fill linear in degree.
    for (size_t r = 0; r < rows.size(); ++r) {
        std::map<int, std::vector<Complex>> pows;
        for (size_t k = 0; k < m; ++k) {
            std::vector<Complex> p(degs[k] + 1);
            p[0] = 1.0;
            Complex z = rows[r].at(vars[k]);
            for (int q = 1; q <= degs[k]; ++q) p[q] = p[q - 1] * z;
            pows[vars[k]] = std::move(p);
        }
        for (size_t c = 0; c < cols.size(); ++c) {
            Complex v = 1.0;
            for (const auto& [var, exp] : cols[c]) v *= pows[var][exp];
            A(Eigen::Index(r), Eigen::Index(c)) = v;
        }
        rhs(Eigen::Index(r)) = evaluate(e, rows[r]);
    }

    // Orthogonalize the sampled basis: normalize columns, then QR.
    Eigen::VectorXd colnorm(cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
        double n = A.col(Eigen::Index(c)).norm();
        colnorm(Eigen::Index(c)) = n > 0 ? n : 1.0;
        A.col(Eigen::Index(c)) /= colnorm(Eigen::Index(c));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    if (qr.rank() < Eigen::Index(cols.size()))
        throw FitError("rank-deficient sample matrix; refine the grid or lower the degree");
    Eigen::VectorXcd x = qr.solve(rhs);

    FitResult res;
    for (size_t c = 0; c < cols.size(); ++c)
        res.poly.add_term(cols[c], x(Eigen::Index(c)) / colnorm(Eigen::Index(c)));
    for (size_t k = 0; k < m; ++k) res.degrees[vars[k]] = degs[k];
    res.method = "lsq";
    res.error = empirical_sup_error(e, res.poly, validation_grid(pd, grid));
    return res;
}

FitResult approx_to_tolerance(const Expr& e, const ProductDomain& pd, double eps,
                              const ApproxOptions& opts) {
    if (eps <= 0) throw FitError("eps must be positive");
    const size_t m = pd.factors.size();
    if (m == 0) {
        FitResult r;
        r.poly = CPoly(evaluate(e, {}));
        r.method = "taylor";
        return r;
    }
    auto val_pts = validation_grid(pd, opts.grid);

    // Polynomial expressions pass through exactly.
    if (auto p = expr_to_poly(e, opts.degree_cap)) {
        FitResult r;
        r.poly = *p;
        r.method = "taylor";
        for (const auto& f : pd.factors) r.degrees[f.var] = p->degree(f.var);
        r.error = empirical_sup_error(e, r.poly, val_pts);
        if (r.error <= eps || r.error <= 1e-12) return r;
    }

    std::vector<int> vars = pd.var_ids();
    std::vector<double> radii(m, 0.0);
    for (const auto& a : val_pts)
        for (size_t k = 0; k < m; ++k)
            radii[k] = std::max(radii[k], std::abs(a.at(vars[k])));
    for (double& r : radii) r = (r > 0 ? r : 1.0) * 1.05;

    FitResult best;
    best.converged = false;
    best.error = std::numeric_limits<double>::infinity();

    int d = 1;
    for (;;) {
        // Taylor backend.
        try {
            std::vector<int> degs(m, d);
            CPoly p = taylor_approx(e, vars, degs, radii);
            double err = empirical_sup_error(e, p, val_pts);
            if (err < best.error) {
                best.poly = std::move(p);
                best.error = err;
                best.method = "taylor";
                best.degrees.clear();
                for (int v : vars) best.degrees[v] = d;
            }
        } catch (const FitError&) {
        } catch (const EvalError&) {
        }
        if (best.error <= eps) {
            best.converged = true;
            return best;
        }
        // Least-squares backend.
        try {
            std::map<int, int> degs;
            for (int v : vars) degs[v] = d;
            GridSpec g = opts.grid;
            g.seed += unsigned(d);
            FitResult r = lsq_approx(e, pd, degs, g);
            r.error = empirical_sup_error(e, r.poly, val_pts);
            if (r.error < best.error) best = std::move(r);
        } catch (const FitError&) {
        } catch (const EvalError&) {
        }
        if (best.error <= eps) {
            best.converged = true;
            return best;
        }
        if (d >= opts.degree_cap) break;
        d = std::min(2 * d, opts.degree_cap);
    }
    best.converged = best.error <= eps;
    return best;
}

}  // namespace merglift
