#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "merglift/expr.hpp"
#include "merglift/poly.hpp"

namespace merglift {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Disc {
    Complex center;
    double radius;
};

struct Rect {
    double x0, y0, x1, y1;
};

/// Image of the open unit disc under w -> (a w + b)/(c w + d).
struct MobiusDisc {
    Complex a, b, c, d;
};

/// {x + iy : 0 < x < 1, -5 < y < sin(1/x)}. Satisfies the path-bound and
/// complement hypotheses but is not a Jordan domain.
struct SineComb {};

/// Test-only shape whose complement-of-closure is disconnected.
struct Annulus {
    Complex center;
    double inner, outer;
};

struct BBox {
    double x0, y0, x1, y1;
};

/// A bounded planar domain from the catalog, possibly post-composed with an
/// affine normalization: membership(z) = base_contains(z / scale + shift).
class PlanarDomain {
public:
    using Shape = std::variant<Disc, Rect, MobiusDisc, SineComb, Annulus>;

    explicit PlanarDomain(Shape s, double resolution = 0.01);

    bool contains(Complex z) const;
    BBox bbox() const;
    Complex interior_point() const;
    double resolution() const { return h_; }
    void set_resolution(double h);
    const Shape& shape() const { return shape_; }
    double scale() const { return scale_; }
    Complex shift() const { return shift_; }

    /// Apply z -> s*(z - t): returns the domain whose members are the s*(z-t)
    /// for members z of this one.
    PlanarDomain rescaled(double s, Complex t) const;

    /// Exact intrinsic diameter for convex catalog shapes, nullopt otherwise.
    std::optional<double> convex_diameter() const;

    /// Evenly spread boundary points (closed-form for disc/rect/mobius,
    /// grid band for the rest), in transformed coordinates.
    std::vector<Complex> boundary_samples(int count) const;

private:
    Shape shape_;
    double h_;
    double scale_ = 1.0;
    Complex shift_ = 0.0;
};

struct HypothesisReport {
    double path_bound = 0.0;  // M estimate, length units
    double diameter = 0.0;    // max Euclidean distance between sampled points
    bool complement_connected = false;
    bool interior_of_closure_equals_domain = false;
    double resolution = 0.0;
    bool passed() const { return complement_connected && interior_of_closure_equals_domain; }
};

/// Shortest-path estimate of the intrinsic diameter: 16-neighbor grid graph
/// at the domain's resolution, Dijkstra over farthest-point-sampled nodes.
double estimate_path_bound(const PlanarDomain& d);

/// Same, also reporting the Euclidean diameter of the sampled node set.
std::pair<double, double> estimate_path_and_diameter(const PlanarDomain& d);

HypothesisReport check_hypotheses(const PlanarDomain& d);

struct ProductDomain {
    struct Factor {
        int var;
        PlanarDomain domain;
        // Normalization z -> scale*(z - shift) recorded when normalized.
        double norm_scale = 1.0;
        Complex norm_shift = 0.0;
    };
    std::vector<Factor> factors;
    bool normalized = false;

    const Factor& factor(int var) const;
    std::vector<int> var_ids() const;
    ProductDomain subset(const std::set<int>& vars) const;
};

/// Translate each factor so an interior point lands at 0 and scale by
/// 1/(2*max(M, diameter)); records per-factor (scale, shift).
ProductDomain normalize(const ProductDomain& pd);

/// Rewrite an expression over the original coordinates into normalized ones
/// (z_v -> w_v/s + t on the expression side).
Expr to_normalized_coords(const Expr& e, const ProductDomain& normalized_pd);

/// Map a polynomial in normalized coordinates back to the original ones.
CPoly denormalize_poly(const CPoly& p, const ProductDomain& normalized_pd);

}  // namespace merglift
