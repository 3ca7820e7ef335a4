#include <doctest.h>

#include <cmath>
#include <random>

#include "merglift/geometry.hpp"

using namespace merglift;

TEST_CASE("contains: catalog membership") {
    PlanarDomain disc(Disc{0.0, 1.0});
    CHECK(disc.contains(0.0));
    CHECK(!disc.contains(1.0));  // open domain
    CHECK(disc.contains(Complex(0.3, -0.4)));

    PlanarDomain rect(Rect{0, 0, 1, 1});
    CHECK(rect.contains(Complex(0.5, 0.5)));
    CHECK(!rect.contains(Complex(1.0, 0.5)));
    CHECK(!rect.contains(Complex(-0.1, 0.5)));

    // sin(1/0.5) = sin(2) ~ 0.909 > 0.9
    PlanarDomain comb((SineComb{}));
    CHECK(comb.contains(Complex(0.5, 0.9)));
    CHECK(!comb.contains(Complex(0.5, 0.95)));
    CHECK(comb.contains(Complex(0.5, -2.0)));
    CHECK(!comb.contains(Complex(-0.1, 0.0)));
}

TEST_CASE("mobius disc: identity coefficients give the unit disc") {
    PlanarDomain m(MobiusDisc{1.0, 0.0, 0.0, 1.0});
    CHECK(m.contains(0.0));
    CHECK(m.contains(Complex(0.6, 0.6)));
    CHECK(!m.contains(Complex(0.8, 0.8)));
    // Pole of the map inside the closed disc => unbounded image, rejected.
    CHECK_THROWS_AS(PlanarDomain(MobiusDisc{1.0, 0.0, 1.0, 0.5}), GeometryError);
}

TEST_CASE("interior_point lies inside for every catalog shape") {
    std::vector<PlanarDomain> shapes = {
        PlanarDomain(Disc{Complex(3, 1), 2.0}), PlanarDomain(Rect{-1, 0, 2, 1}),
        PlanarDomain(MobiusDisc{1.0, Complex(0.5, 0.5), Complex(0.2, 0.0), 2.0}),
        PlanarDomain((SineComb{}))};
    for (const auto& d : shapes) CHECK(d.contains(d.interior_point()));
}

TEST_CASE("boundary_samples: disc points on the circle") {
    PlanarDomain disc(Disc{Complex(1, 2), 3.0});
    auto pts = disc.boundary_samples(32);
    REQUIRE(pts.size() == 32);
    for (Complex z : pts) CHECK(std::abs(std::abs(z - Complex(1, 2)) - 3.0) < 1e-12);
}

TEST_CASE("estimate_path_bound: unit disc intrinsic diameter") {
    PlanarDomain disc(Disc{0.0, 1.0}, 0.02);
    double m = estimate_path_bound(disc);
    CHECK(m == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("estimate_path_bound: unit square diagonal") {
    PlanarDomain sq(Rect{0, 0, 1, 1}, 0.02);
    double m = estimate_path_bound(sq);
    CHECK(m == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("scaling law: path bound scales linearly within 5%") {
    PlanarDomain small(Disc{0.0, 0.5}, 0.02);
    double base = estimate_path_bound(small);
    double scaled = estimate_path_bound(small.rescaled(2.0, 0.0));
    CHECK(scaled == doctest::Approx(2.0 * base).epsilon(0.05));
}

TEST_CASE("monotone refinement: halving h never drops the estimate by >10%") {
    for (PlanarDomain d : {PlanarDomain(Disc{0.0, 1.0}, 0.04), PlanarDomain(Rect{0, 0, 1, 1}, 0.04)}) {
        double coarse = estimate_path_bound(d);
        d.set_resolution(0.02);
        double fine = estimate_path_bound(d);
        CHECK(fine >= 0.9 * coarse);
    }
}

TEST_CASE("check_hypotheses: disc passes, annulus fails complement check") {
    PlanarDomain disc(Disc{0.0, 1.0}, 0.02);
    HypothesisReport ok = check_hypotheses(disc);
    CHECK(ok.complement_connected);
    CHECK(ok.interior_of_closure_equals_domain);
    CHECK(ok.passed());
    CHECK(ok.diameter <= ok.path_bound + 1e-12);

    PlanarDomain ann(Annulus{0.0, 0.4, 1.0}, 0.02);
    HypothesisReport bad = check_hypotheses(ann);
    CHECK(!bad.complement_connected);
    CHECK(!bad.passed());
}

TEST_CASE("normalize: disc(3,2) gets scale 1/8 and contains 0") {
    ProductDomain pd;
    pd.factors.push_back({1, PlanarDomain(Disc{3.0, 2.0}, 0.08), 1.0, 0.0});
    ProductDomain npd = normalize(pd);
    REQUIRE(npd.normalized);
    const auto& f = npd.factors[0];
    CHECK(f.norm_scale == doctest::Approx(1.0 / 8.0));
    CHECK(f.norm_shift == Complex(3.0, 0.0));
    CHECK(f.domain.contains(0.0));
    CHECK(*f.domain.convex_diameter() == doctest::Approx(0.5));
    CHECK(estimate_path_bound(f.domain) <= 1.0);
    // Idempotent up to the flag.
    ProductDomain again = normalize(npd);
    CHECK(again.factors[0].norm_scale == f.norm_scale);
}

TEST_CASE("normalize: every factor of a mixed product ends with M <= 1 and 0 inside") {
    ProductDomain pd;
    pd.factors.push_back({1, PlanarDomain(Disc{Complex(-2, 5), 3.0}, 0.08), 1.0, 0.0});
    pd.factors.push_back({2, PlanarDomain(Rect{0, 0, 4, 1}, 0.08), 1.0, 0.0});
    ProductDomain npd = normalize(pd);
    for (const auto& f : npd.factors) {
        CHECK(f.domain.contains(0.0));
        CHECK(estimate_path_bound(f.domain) <= 1.0);
    }
}

TEST_CASE("denormalize_poly inverts the coordinate change on evaluations") {
    ProductDomain pd;
    pd.factors.push_back({1, PlanarDomain(Disc{Complex(3, 0), 2.0}), 1.0, 0.0});
    pd.factors.push_back({2, PlanarDomain(Rect{-1, -1, 1, 1}), 1.0, 0.0});
    ProductDomain npd = normalize(pd);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CPoly p;
    p.add_term({{1, 2}, {2, 1}}, Complex(u(rng), u(rng)));
    p.add_term({{1, 1}}, Complex(u(rng), u(rng)));
    p.add_term({}, Complex(u(rng), u(rng)));
    CPoly orig = denormalize_poly(p, npd);

    for (int trial = 0; trial < 100; ++trial) {
        Assignment z = {{1, Complex(3 + u(rng), u(rng))}, {2, Complex(u(rng), u(rng))}};
        Assignment w;
        for (const auto& f : npd.factors)
            w[f.var] = f.norm_scale * (z.at(f.var) - f.norm_shift);
        Complex a = orig.eval(z), b = p.eval(w);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("product domain bookkeeping: factor lookup and subsets") {
    ProductDomain pd;
    pd.factors.push_back({1, PlanarDomain(Disc{0.0, 1.0}), 1.0, 0.0});
    pd.factors.push_back({3, PlanarDomain(Rect{0, 0, 1, 1}), 1.0, 0.0});
    CHECK(pd.var_ids() == std::vector<int>{1, 3});
    CHECK_NOTHROW(pd.factor(3));
    CHECK_THROWS_AS(pd.factor(2), GeometryError);
    ProductDomain sub = pd.subset({3});
    REQUIRE(sub.factors.size() == 1);
    CHECK(sub.factors[0].var == 3);
}

TEST_CASE("grid guards: resolution validation and oversize grids") {
    CHECK_THROWS_AS(PlanarDomain(Disc{0.0, 1.0}, -0.1), GeometryError);
    PlanarDomain big(Disc{0.0, 1.0}, 1e-4);
    CHECK_THROWS_AS(estimate_path_bound(big), GeometryError);
}
