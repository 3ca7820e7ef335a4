#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "merglift/geometry.hpp"
#include "merglift/poly.hpp"

namespace merglift {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sampling plan for one fit. The validation grid is always strictly denser
/// than the fit grid.
struct GridSpec {
    int boundary_per_factor = 48;
    int interior_points = 200;
    int densify = 4;  // validation boundary density multiplier
    int max_tensor_points = 4096;
    uint64_t seed = 1;
};

struct FitResult {
    CPoly poly;
    double error = 0.0;  // empirical sup on the validation grid
    std::map<int, int> degrees;
    std::string method;  // "taylor" or "lsq"
    bool converged = true;
};

/// Tensor points over the distinguished boundary (per-factor boundary
/// samples), capped by random subsampling.
std::vector<Assignment> distinguished_boundary(const ProductDomain& pd, int per_factor,
                                               int max_points, uint64_t seed);

/// Random interior points of the product.
std::vector<Assignment> interior_samples(const ProductDomain& pd, int count, uint64_t seed);

/// Fit grid plus denser validation grid for a product domain.
std::vector<Assignment> validation_grid(const ProductDomain& pd, const GridSpec& grid);

/// Empirical sup of |f - p| over the given points.
double empirical_sup_error(const Expr& f, const CPoly& p, const std::vector<Assignment>& pts);

/// Truncated multivariate Taylor expansion at 0 via tensor trapezoid
/// quadrature on circles of the given per-variable radii.
CPoly taylor_approx(const Expr& e, const std::vector<int>& vars, const std::vector<int>& degrees,
                    const std::vector<double>& radii);

/// Least-squares fit of the monomial box basis on distinguished-boundary
/// samples; basis columns are orthogonalized before solving.
FitResult lsq_approx(const Expr& e, const ProductDomain& pd, const std::map<int, int>& degrees,
                     const GridSpec& grid);

struct ApproxOptions {
    GridSpec grid;
    int degree_cap = kDefaultDegreeCap;
};

/// Degree-doubling escalation across backends until the empirical sup error
/// on the validation grid is below eps. Does not throw on failure: the best
/// achieved fit is returned with converged=false.
FitResult approx_to_tolerance(const Expr& e, const ProductDomain& pd, double eps,
                              const ApproxOptions& opts = {});

}  // namespace merglift
