#include "merglift/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace merglift {

namespace {

bool base_contains(const PlanarDomain::Shape& shape, Complex z) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return std::abs(z - s.center) < s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return z.real() > s.x0 && z.real() < s.x1 && z.imag() > s.y0 && z.imag() < s.y1;
            } else if constexpr (std::is_same_v<T, MobiusDisc>) {
                Complex den = -s.c * z + s.a;
                if (den == 0.0) return false;
                Complex w = (s.d * z - s.b) / den;
                return std::abs(w) < 1.0;
            } else if constexpr (std::is_same_v<T, SineComb>) {
                double x = z.real(), y = z.imag();
                return x > 0.0 && x < 1.0 && y > -5.0 && y < std::sin(1.0 / x);
            } else {
                double r = std::abs(z - s.center);
                return r > s.inner && r < s.outer;
            }
        },
        shape);
}

Complex mobius_apply(const MobiusDisc& m, Complex w) {
    return (m.a * w + m.b) / (m.c * w + m.d);
}

struct Circle {
    Complex center;
    double radius;
};

// Circle through three non-collinear points.
Circle circumcircle(Complex p, Complex q, Complex r) {
    double ax = p.real(), ay = p.imag();
    double bx = q.real(), by = q.imag();
    double cx = r.real(), cy = r.imag();
    double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (d == 0.0) throw GeometryError("degenerate Mobius image");
    double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                 (cx * cx + cy * cy) * (ay - by)) /
                d;
    double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                 (cx * cx + cy * cy) * (bx - ax)) /
                d;
    Complex center(ux, uy);
    return {center, std::abs(p - center)};
}

Circle mobius_image_circle(const MobiusDisc& m) {
    if (m.c != 0.0 && std::abs(-m.d / m.c) <= 1.0 + 1e-12)
        throw GeometryError("Mobius pole inside the closed unit disc; image unbounded");
    return circumcircle(mobius_apply(m, 1.0), mobius_apply(m, Complex(0, 1)),
                        mobius_apply(m, -1.0));
}

BBox base_bbox(const PlanarDomain::Shape& shape) {
    return std::visit(
        [&](const auto& s) -> BBox {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return {s.center.real() - s.radius, s.center.imag() - s.radius,
                        s.center.real() + s.radius, s.center.imag() + s.radius};
            } else if constexpr (std::is_same_v<T, Rect>) {
                return {s.x0, s.y0, s.x1, s.y1};
            } else if constexpr (std::is_same_v<T, MobiusDisc>) {
                Circle c = mobius_image_circle(s);
                return {c.center.real() - c.radius, c.center.imag() - c.radius,
                        c.center.real() + c.radius, c.center.imag() + c.radius};
            } else if constexpr (std::is_same_v<T, SineComb>) {
                return {0.0, -5.0, 1.0, 1.0};
            } else {
                return {s.center.real() - s.outer, s.center.imag() - s.outer,
                        s.center.real() + s.outer, s.center.imag() + s.outer};
            }
        },
        shape);
}

Complex base_interior_point(const PlanarDomain::Shape& shape) {
    return std::visit(
        [&](const auto& s) -> Complex {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return s.center;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return Complex((s.x0 + s.x1) / 2, (s.y0 + s.y1) / 2);
            } else if constexpr (std::is_same_v<T, MobiusDisc>) {
                return mobius_apply(s, 0.0);
            } else if constexpr (std::is_same_v<T, SineComb>) {
                return Complex(0.5, -2.0);
            } else {
                return s.center + Complex((s.inner + s.outer) / 2, 0.0);
            }
        },
        shape);
}

}  // namespace

PlanarDomain::PlanarDomain(Shape s, double resolution) : shape_(std::move(s)), h_(resolution) {
    if (resolution <= 0.0) throw GeometryError("resolution must be positive");
    if (const auto* m = std::get_if<MobiusDisc>(&shape_)) mobius_image_circle(*m);
}

void PlanarDomain::set_resolution(double h) {
    if (h <= 0.0) throw GeometryError("resolution must be positive");
    h_ = h;
}

bool PlanarDomain::contains(Complex z) const {
    return base_contains(shape_, z / scale_ + shift_);
}

BBox PlanarDomain::bbox() const {
    BBox b = base_bbox(shape_);
    // transformed point z = scale*(w - shift)
    return {scale_ * (b.x0 - shift_.real()), scale_ * (b.y0 - shift_.imag()),
            scale_ * (b.x1 - shift_.real()), scale_ * (b.y1 - shift_.imag())};
}

Complex PlanarDomain::interior_point() const {
    return scale_ * (base_interior_point(shape_) - shift_);
}

PlanarDomain PlanarDomain::rescaled(double s, Complex t) const {
    if (s <= 0.0) throw GeometryError("scale must be positive");
    PlanarDomain out = *this;
    out.scale_ = scale_ * s;
    out.shift_ = t / scale_ + shift_;
    out.h_ = h_ * s;
    return out;
}

std::optional<double> PlanarDomain::convex_diameter() const {
    return std::visit(
        [&](const auto& s) -> std::optional<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return scale_ * 2.0 * s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return scale_ * std::hypot(s.x1 - s.x0, s.y1 - s.y0);
            } else if constexpr (std::is_same_v<T, MobiusDisc>) {
                return scale_ * 2.0 * mobius_image_circle(s).radius;
            } else {
                return std::nullopt;
            }
        },
        shape_);
}

std::vector<Complex> PlanarDomain::boundary_samples(int count) const {
    std::vector<Complex> base;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                for (int k = 0; k < count; ++k)
                    base.push_back(s.center + std::polar(s.radius, 2 * M_PI * k / count));
            } else if constexpr (std::is_same_v<T, Rect>) {
                double w = s.x1 - s.x0, hgt = s.y1 - s.y0;
                double per = 2 * (w + hgt);
                for (int k = 0; k < count; ++k) {
                    double t = per * k / count;
                    if (t < w)
                        base.push_back(Complex(s.x0 + t, s.y0));
                    else if (t < w + hgt)
                        base.push_back(Complex(s.x1, s.y0 + (t - w)));
                    else if (t < 2 * w + hgt)
                        base.push_back(Complex(s.x1 - (t - w - hgt), s.y1));
                    else
                        base.push_back(Complex(s.x0, s.y1 - (t - 2 * w - hgt)));
                }
            } else if constexpr (std::is_same_v<T, MobiusDisc>) {
                for (int k = 0; k < count; ++k)
                    base.push_back(mobius_apply(s, std::polar(1.0, 2 * M_PI * k / count)));
            } else {
                // No usable boundary parameterization: take interior grid cells
                // adjacent to the exterior.
                BBox b = base_bbox(shape_);
                double h = h_;
                std::vector<Complex> band;
                for (double x = b.x0 + h / 2; x < b.x1; x += h) {
                    for (double y = b.y0 + h / 2; y < b.y1; y += h) {
                        Complex z(x, y);
                        if (!base_contains(shape_, z)) continue;
                        bool edge = false;
                        for (int dx = -1; dx <= 1 && !edge; ++dx)
                            for (int dy = -1; dy <= 1 && !edge; ++dy)
                                if (!base_contains(shape_, z + Complex(dx * h, dy * h)))
                                    edge = true;
                        if (edge) band.push_back(z);
                    }
                }
                if (band.empty()) throw GeometryError("empty boundary band");
                size_t stride = std::max<size_t>(1, band.size() / count);
                for (size_t k = 0; k < band.size() && base.size() < size_t(count); k += stride)
                    base.push_back(band[k]);
            }
        },
        shape_);
    std::vector<Complex> out;
    out.reserve(base.size());
    for (Complex w : base) out.push_back(scale_ * (w - shift_));
    return out;
}

// ---------------------------------------------------------------------------
// Grid graph diameter estimation
// ---------------------------------------------------------------------------

namespace {

// 16-neighbor stencil: axis, diagonal and knight moves. The knight moves cut
// the metrication overestimate of grid shortest paths to under 3%.
constexpr int kOffsets[][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},   {1, -1},
                               {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2},  {-1, -2},
                               {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};

struct GridGraph {
    int nx = 0, ny = 0;
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<int> node_at;  // -1 where outside
    std::vector<Complex> points;

    int index(int i, int j) const {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
        return node_at[size_t(j) * nx + i];
    }
};

GridGraph build_grid(const PlanarDomain& d) {
    GridGraph g;
    BBox b = d.bbox();
    g.h = d.resolution();
    g.x0 = b.x0 + g.h / 2;
    g.y0 = b.y0 + g.h / 2;
    g.nx = std::max(1, int(std::floor((b.x1 - b.x0) / g.h)));
    g.ny = std::max(1, int(std::floor((b.y1 - b.y0) / g.h)));
    if (double(g.nx) * g.ny > 4e6) throw GeometryError("grid too large at this resolution");
    g.node_at.assign(size_t(g.nx) * g.ny, -1);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            Complex z(g.x0 + i * g.h, g.y0 + j * g.h);
            if (d.contains(z)) {
                g.node_at[size_t(j) * g.nx + i] = int(g.points.size());
                g.points.push_back(z);
            }
        }
    }
    if (g.points.empty()) throw GeometryError("no interior grid points at this resolution");
    return g;
}

bool edge_ok(const PlanarDomain& d, Complex a, Complex b) {
    // Both endpoints are interior; check midpoints so long moves do not jump
    // across exterior gaps.
    for (double t : {0.25, 0.5, 0.75})
        if (!d.contains(a + t * (b - a))) return false;
    return true;
}

template <typename Fn>
void for_each_edge(const GridGraph& g, const PlanarDomain& d, int i, int j, Fn&& fn) {
    Complex z(g.x0 + i * g.h, g.y0 + j * g.h);
    for (const auto& off : kOffsets) {
        int v = g.index(i + off[0], j + off[1]);
        if (v < 0) continue;
        Complex w(g.x0 + (i + off[0]) * g.h, g.y0 + (j + off[1]) * g.h);
        if (std::abs(off[0]) + std::abs(off[1]) > 1 && !edge_ok(d, z, w)) continue;
        fn(v, g.h * std::hypot(double(off[0]), double(off[1])));
    }
}

std::vector<std::pair<int, int>> node_coords(const GridGraph& g) {
    std::vector<std::pair<int, int>> coords(g.points.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int id = g.node_at[size_t(j) * g.nx + i];
            if (id >= 0) coords[id] = {i, j};
        }
    return coords;
}

std::vector<double> dijkstra(const GridGraph& g, const PlanarDomain& d,
                             const std::vector<std::pair<int, int>>& coords, int source) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.points.size(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u]) continue;
        auto [i, j] = coords[u];
        for_each_edge(g, d, i, j, [&](int v, double w) {
            if (du + w < dist[v]) {
                dist[v] = du + w;
                pq.push({du + w, v});
            }
        });
    }
    return dist;
}

std::vector<int> farthest_point_sample(const std::vector<Complex>& pts, int count) {
    std::vector<int> chosen;
    if (pts.empty()) return chosen;
    std::vector<double> min_d(pts.size(), std::numeric_limits<double>::infinity());
    int cur = 0;
    chosen.push_back(cur);
    while (int(chosen.size()) < count && chosen.size() < pts.size()) {
        int best = -1;
        double best_d = -1.0;
        for (size_t k = 0; k < pts.size(); ++k) {
            min_d[k] = std::min(min_d[k], std::abs(pts[k] - pts[cur]));
            if (min_d[k] > best_d) {
                best_d = min_d[k];
                best = int(k);
            }
        }
        if (best < 0 || best_d <= 0.0) break;
        chosen.push_back(best);
        cur = best;
    }
    return chosen;
}

}  // namespace

std::pair<double, double> estimate_path_and_diameter(const PlanarDomain& d) {
    GridGraph g = build_grid(d);
    auto coords = node_coords(g);

    // Connectivity at this resolution is a precondition for the estimate.
    {
        std::vector<char> seen(g.points.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            auto [i, j] = coords[u];
            for_each_edge(g, d, i, j, [&](int v, double) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            });
        }
        if (reached != g.points.size())
            throw GeometryError("interior grid disconnected at resolution h");
    }

    std::vector<int> samples = farthest_point_sample(g.points, 200);
    double best = 0.0, diam = 0.0;
    for (size_t a = 0; a < samples.size(); ++a)
        for (size_t b = a + 1; b < samples.size(); ++b)
            diam = std::max(diam, std::abs(g.points[samples[a]] - g.points[samples[b]]));
    for (int s : samples) {
        auto dist = dijkstra(g, d, coords, s);
        for (int t : samples)
            if (std::isfinite(dist[t])) best = std::max(best, dist[t]);
    }
    return {best, diam};
}

double estimate_path_bound(const PlanarDomain& d) { return estimate_path_and_diameter(d).first; }

HypothesisReport check_hypotheses(const PlanarDomain& d) {
    HypothesisReport rep;
    rep.resolution = d.resolution();
    auto [m, diam] = estimate_path_and_diameter(d);
    rep.path_bound = m;
    rep.diameter = diam;

    BBox b = d.bbox();
    double h = d.resolution();
    double margin = 3 * h;
    int nx = int(std::ceil((b.x1 - b.x0 + 2 * margin) / h));
    int ny = int(std::ceil((b.y1 - b.y0 + 2 * margin) / h));
    auto center = [&](int i, int j) {
        return Complex(b.x0 - margin + (i + 0.5) * h, b.y0 - margin + (j + 0.5) * h);
    };
    std::vector<char> inside(size_t(nx) * ny, 0), closure(size_t(nx) * ny, 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            inside[size_t(j) * nx + i] = d.contains(center(i, j)) ? 1 : 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            char c = 0;
            for (int dj = -1; dj <= 1 && !c; ++dj)
                for (int di = -1; di <= 1 && !c; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (ii >= 0 && jj >= 0 && ii < nx && jj < ny && inside[size_t(jj) * nx + ii])
                        c = 1;
                }
            closure[size_t(j) * nx + i] = c;
        }

    // Flood-fill the complement of the closure from the frame of the box.
    std::vector<char> seen(size_t(nx) * ny, 0);
    std::vector<std::pair<int, int>> stack;
    for (int i = 0; i < nx; ++i) {
        for (int j : {0, ny - 1})
            if (!closure[size_t(j) * nx + i] && !seen[size_t(j) * nx + i]) {
                seen[size_t(j) * nx + i] = 1;
                stack.push_back({i, j});
            }
    }
    for (int j = 0; j < ny; ++j) {
        for (int i : {0, nx - 1})
            if (!closure[size_t(j) * nx + i] && !seen[size_t(j) * nx + i]) {
                seen[size_t(j) * nx + i] = 1;
                stack.push_back({i, j});
            }
    }
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            int ii = i + di, jj = j + dj;
            if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
            size_t k = size_t(jj) * nx + ii;
            if (!closure[k] && !seen[k]) {
                seen[k] = 1;
                stack.push_back({ii, jj});
            }
        }
    }
    rep.complement_connected = true;
    for (size_t k = 0; k < closure.size(); ++k)
        if (!closure[k] && !seen[k]) {
            rep.complement_connected = false;
            break;
        }

    // (closure)^o = domain at resolution: a non-member cell whose whole 5x5
    // neighborhood sits in the closure signals a slit or puncture.
    rep.interior_of_closure_equals_domain = true;
    for (int j = 2; j < ny - 2 && rep.interior_of_closure_equals_domain; ++j)
        for (int i = 2; i < nx - 2; ++i) {
            if (inside[size_t(j) * nx + i]) continue;
            bool all_closure = true;
            for (int dj = -2; dj <= 2 && all_closure; ++dj)
                for (int di = -2; di <= 2 && all_closure; ++di)
                    if (!closure[size_t(j + dj) * nx + (i + di)]) all_closure = false;
            if (all_closure) {
                rep.interior_of_closure_equals_domain = false;
                break;
            }
        }
    return rep;
}

const ProductDomain::Factor& ProductDomain::factor(int var) const {
    for (const auto& f : factors)
        if (f.var == var) return f;
    throw GeometryError("no factor for variable z" + std::to_string(var));
}

std::vector<int> ProductDomain::var_ids() const {
    std::vector<int> out;
    for (const auto& f : factors) out.push_back(f.var);
    return out;
}

ProductDomain ProductDomain::subset(const std::set<int>& vars) const {
    ProductDomain out;
    out.normalized = normalized;
    for (const auto& f : factors)
        if (vars.count(f.var)) out.factors.push_back(f);
    return out;
}

ProductDomain normalize(const ProductDomain& pd) {
    if (pd.normalized) return pd;
    ProductDomain out;
    out.normalized = true;
    for (const auto& f : pd.factors) {
        Complex t = f.domain.interior_point();
        double m, diam;
        if (auto cd = f.domain.convex_diameter()) {
            m = diam = *cd;
        } else {
            std::tie(m, diam) = estimate_path_and_diameter(f.domain);
        }
        double s = 1.0 / (2.0 * std::max(m, diam));
        ProductDomain::Factor nf{f.var, f.domain.rescaled(s, t), s, t};
        out.factors.push_back(std::move(nf));
    }
    return out;
}

Expr to_normalized_coords(const Expr& e, const ProductDomain& npd) {
    Expr cur = e;
    for (const auto& f : npd.factors)
        cur = substitute_affine(cur, f.var, Complex(1.0 / f.norm_scale, 0.0), f.norm_shift);
    return cur;
}

CPoly denormalize_poly(const CPoly& p, const ProductDomain& npd) {
    CPoly cur = p;
    for (const auto& f : npd.factors)
        cur = affine_substitute(cur, f.var, Complex(f.norm_scale, 0.0),
                                -f.norm_scale * f.norm_shift);
    return cur;
}

}  // namespace merglift
