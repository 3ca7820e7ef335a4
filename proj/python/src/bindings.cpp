// Python bindings for the main operations: expression parsing and calculus,
// polynomial lifts, geometry estimates, the chordal metric and the
// directional-derivative demo.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "merglift/chordal.hpp"
#include "merglift/config.hpp"
#include "merglift/io.hpp"
#include "merglift/lift.hpp"
#include "merglift/tail.hpp"

namespace py = pybind11;
using namespace merglift;

namespace {

MultiOrder to_multiorder(const std::map<int, int>& m) {
    MultiOrder d;
    for (const auto& [v, o] : m) d.set(v, o);
    return d;
}

ProductDomain domains_from_config(const std::string& text, double resolution) {
    RunConfig cfg = parse_config_text(text, resolution);
    std::vector<int> vars;
    for (const auto& [id, d] : cfg.domains) vars.push_back(id);
    return cfg.product(vars);
}

}  // namespace

PYBIND11_MODULE(_merglift, m) {
    m.doc() = "polynomial density toolkit for product domains";

    m.def("parse_print", [](const std::string& text) { return to_string(parse(text)); },
          "Parse an expression and return its canonical printed form.");

    m.def(
        "evaluate",
        [](const std::string& text, const std::map<int, Complex>& at) {
            Assignment a(at.begin(), at.end());
            return evaluate(parse(text), a);
        },
        py::arg("expr"), py::arg("at"));

    m.def(
        "differentiate",
        [](const std::string& text, const std::map<int, int>& orders) {
            return to_string(differentiate(parse(text), to_multiorder(orders)));
        },
        py::arg("expr"), py::arg("orders"));

    m.def(
        "numeric_derivative",
        [](const std::string& text, const std::map<int, int>& orders,
           const std::map<int, Complex>& point, double radius) {
            Assignment p(point.begin(), point.end());
            return numeric_derivative(parse(text), to_multiorder(orders), p, radius);
        },
        py::arg("expr"), py::arg("orders"), py::arg("point"), py::arg("radius") = 0.25);

    m.def(
        "chi",
        [](std::optional<Complex> a, std::optional<Complex> b) {
            SphereValue sa = a ? SphereValue(*a) : SphereValue::infinity();
            SphereValue sb = b ? SphereValue(*b) : SphereValue::infinity();
            return chi(sa, sb);
        },
        py::arg("a"), py::arg("b"), "Chordal distance; pass None for infinity.");

    m.def("counterexample_directional", &counterexample_directional, py::arg("m"));

    m.def(
        "estimate_path_bound",
        [](const std::string& domain_config, double resolution) {
            ProductDomain pd = domains_from_config(domain_config, resolution);
            std::vector<double> out;
            for (const auto& f : pd.factors) out.push_back(estimate_path_bound(f.domain));
            return out;
        },
        py::arg("domain_config"), py::arg("resolution") = 0.01,
        "Per-factor intrinsic diameter estimates for 'domain ...' config lines.");

    m.def(
        "lift",
        [](const std::string& expr_text, const std::string& domain_config, int n, double eps,
           double resolution, uint64_t seed) {
            LiftRequest req;
            req.f = parse(expr_text);
            req.pd = domains_from_config(domain_config, resolution);
            req.max_order = n;
            req.eps = eps;
            req.options.grid.seed = seed;
            ApproxReport rep = lift(req);
            py::dict out;
            out["polynomial"] = poly_to_json(rep.poly).dump();
            py::dict errs;
            for (const auto& [alpha, err] : rep.alpha_errors)
                errs[py::tuple(py::cast(alpha))] = err;
            out["alpha_errors"] = errs;
            out["max_alpha_error"] = rep.max_alpha_error();
            out["converged"] = rep.converged;
            return out;
        },
        py::arg("expr"), py::arg("domain_config"), py::arg("n"), py::arg("eps"),
        py::arg("resolution") = 0.01, py::arg("seed") = 1,
        "Run the derivative lift; returns the polynomial (JSON) and per-order errors.");
}
