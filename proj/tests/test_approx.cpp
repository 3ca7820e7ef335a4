#include <doctest.h>

#include <cmath>
#include <random>

#include "merglift/approx.hpp"

using namespace merglift;

namespace {

ProductDomain disc_product(std::vector<std::pair<int, Disc>> discs) {
    ProductDomain pd;
    for (auto& [v, d] : discs) pd.factors.push_back({v, PlanarDomain(d), 1.0, 0.0});
    return pd;
}

// Direct tail summation of exp's Taylor remainder sup on |z| <= r.
double exp_tail(int degree, double r) {
    double sum = 0.0, term = std::pow(r, degree + 1);
    for (int k = degree + 1; k <= degree + 60; ++k) {
        double fact = 1.0;
        for (int j = 2; j <= k; ++j) fact *= j;
        sum += std::pow(r, k) / fact;
    }
    (void)term;
    return sum;
}

}  // namespace

TEST_CASE("taylor_approx: exp coefficients through degree 4") {
    CPoly p = taylor_approx(parse("exp(z1)"), {1}, {4}, {1.0});
    std::vector<double> expect = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    for (int k = 0; k <= 4; ++k) {
        MultiIndex idx;
        if (k > 0) idx[1] = k;
        auto it = p.terms().find(idx);
        REQUIRE(it != p.terms().end());
        CHECK(std::abs(it->second - expect[size_t(k)]) < 1e-10);
    }
    CHECK(p.degree(1) <= 4);
}

TEST_CASE("taylor_approx: polynomial input reproduced exactly") {
    Expr e = parse("1 + 2*z1 - z1^3 + 0.25i*z1^5");
    CPoly p = taylor_approx(e, {1}, {5}, {1.0});
    CPoly expect = *expr_to_poly(e);
    CPoly diff = p - expect;
    for (const auto& [idx, c] : diff.terms()) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("taylor_approx: exp on radius 1/2, degree 4 matches the tail oracle") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 0.5}}});
    CPoly p = taylor_approx(parse("exp(z1)"), {1}, {4}, {0.5});
    double err = empirical_sup_error(parse("exp(z1)"), p, validation_grid(pd, {}));
    double oracle = exp_tail(4, 0.5);  // ~2.84e-4
    CHECK(oracle == doctest::Approx(2.9e-4).epsilon(0.05));
    CHECK(err <= 1.05 * oracle);
    CHECK(err >= 0.8 * oracle);
}

TEST_CASE("lsq_approx: z1 on a disc is recovered to rounding") {
    ProductDomain pd = disc_product({{1, Disc{Complex(0.3, -0.2), 1.5}}});
    FitResult r = lsq_approx(parse("z1"), pd, {{1, 2}}, {});
    CHECK(r.error <= 1e-12);
    CHECK(r.method == "lsq");
}

TEST_CASE("lsq_approx: exp on the unit disc, degree 8") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}});
    FitResult r = lsq_approx(parse("exp(z1)"), pd, {{1, 8}}, {});
    // Taylor tail oracle ceiling: sum_{k>=9} 1/k! ~ 3.1e-6, x1.6 slack.
    CHECK(r.error <= 5e-6);
}

TEST_CASE("lsq_approx: exp(z1+z2) on disc(0,1/2)^2, degrees (6,6)") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 0.5}}, {2, Disc{0.0, 0.5}}});
    FitResult r = lsq_approx(parse("exp(z1+z2)"), pd, {{1, 6}, {2, 6}}, {});
    // Product-tail oracle floor: with each factor truncated at degree 6 the best
    // sup error on the closed bidisc is 2*e^0.5*sum_{k>=7} (1/2)^k/k! ~ 5.5e-6,
    // so the fit cannot do better than that; allow 10% slack above the floor.
    double floor = 2.0 * std::exp(0.5) * exp_tail(6, 0.5);
    CHECK(r.error <= 1.1 * floor);
}

TEST_CASE("lsq_approx: guards reject unsupportable requests") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}, {2, Disc{0.0, 1.0}}});
    CHECK_THROWS_AS(lsq_approx(parse("exp(z1)"), pd, {{1, 2 * kDefaultDegreeCap + 1}}, {}),
                    DegreeCapError);
    // 81 x 81 tensor basis exceeds the column cap.
    CHECK_THROWS_AS(lsq_approx(parse("exp(z1+z2)"), pd, {{1, 80}, {2, 80}}, {}), FitError);
}

TEST_CASE("approx_to_tolerance: polynomial passthrough") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}, {2, Disc{0.0, 1.0}}});
    FitResult r = approx_to_tolerance(parse("z1^2*z2 - 3*z1 + 0.5"), pd, 1e-8);
    CHECK(r.converged);
    CHECK(r.error <= 1e-12);
    CHECK(r.method == "taylor");
}

TEST_CASE("approx_to_tolerance: exp on disc(0,1/2) within 1e-6 by degree 8") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 0.5}}});
    FitResult r = approx_to_tolerance(parse("exp(z1)"), pd, 1e-6);
    CHECK(r.converged);
    CHECK(r.error <= 1e-6);
    CHECK(r.degrees.at(1) <= 8);
}

TEST_CASE("approx_to_tolerance: geometric singularity near the boundary") {
    // 1/(1-z1) on disc(0,0.9): geometric tail oracle needs degree ~87; the cap
    // at 128 suffices.
    ProductDomain pd = disc_product({{1, Disc{0.0, 0.9}}});
    FitResult r = approx_to_tolerance(parse("1/(1-z1)"), pd, 1e-3);
    CHECK(r.converged);
    CHECK(r.error <= 1e-3);
    CHECK(r.degrees.at(1) <= 128);
}

TEST_CASE("approx_to_tolerance: unreachable tolerance reports best effort") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 0.9}}});
    ApproxOptions opts;
    opts.degree_cap = 4;
    FitResult r = approx_to_tolerance(parse("1/(1-z1)"), pd, 1e-9, opts);
    CHECK(!r.converged);
    CHECK(r.error > 1e-9);
    CHECK(std::isfinite(r.error));
}

TEST_CASE("monotonicity: taylor error non-increasing as degree doubles") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}});
    auto pts = validation_grid(pd, {});
    double prev = std::numeric_limits<double>::infinity();
    for (int d : {2, 4, 8, 16}) {
        CPoly p = taylor_approx(parse("exp(z1)"), {1}, {d}, {1.05});
        double err = empirical_sup_error(parse("exp(z1)"), p, pts);
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("validation honesty: denser validation moves the error by <20%") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}});
    FitResult r = lsq_approx(parse("exp(z1)"), pd, {{1, 6}}, {});
    GridSpec denser;
    denser.densify *= 2;
    denser.interior_points *= 2;
    double refined = empirical_sup_error(parse("exp(z1)"), r.poly, validation_grid(pd, denser));
    CHECK(std::abs(refined - r.error) <= 0.2 * std::max(refined, r.error));
}

TEST_CASE("exactness: random polynomial expressions are recovered coefficient-exactly") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}, {2, Disc{0.0, 1.0}}});
    for (int trial = 0; trial < 10; ++trial) {
        CPoly q;
        for (int t = 0; t < 5; ++t) {
            MultiIndex idx;
            int d1 = int(3 * (u(rng) + 1) / 2), d2 = int(3 * (u(rng) + 1) / 2);
            if (d1 > 0) idx[1] = d1;
            if (d2 > 0) idx[2] = d2;
            q.add_term(idx, Complex(u(rng), u(rng)));
        }
        FitResult r = approx_to_tolerance(poly_to_expr(q), pd, 1e-10);
        CHECK(r.converged);
        CPoly diff = r.poly - q;
        for (const auto& [idx, c] : diff.terms()) CHECK(std::abs(c) < 1e-10);
    }
}

TEST_CASE("grids: validation grid is denser than the fit grid") {
    ProductDomain pd = disc_product({{1, Disc{0.0, 1.0}}});
    GridSpec g;
    auto fit = distinguished_boundary(pd, g.boundary_per_factor, g.max_tensor_points, g.seed);
    auto val = validation_grid(pd, g);
    CHECK(val.size() >= 4 * fit.size());
    for (const auto& a : val) {
        Complex z = a.at(1);
        CHECK(std::abs(z) <= 1.0 + 1e-9);
    }
}
