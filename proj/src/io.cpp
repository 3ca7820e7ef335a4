#include "merglift/io.hpp"

namespace merglift {

using nlohmann::json;

json poly_to_json(const CPoly& p) {
    json out = json::array();
    for (const auto& [idx, c] : p.terms()) {
        json vars = json::array();
        for (const auto& [v, e] : idx) vars.push_back(json::array({v, e}));
        out.push_back({{"vars", vars}, {"re", c.real()}, {"im", c.imag()}});
    }
    return out;
}

CPoly poly_from_json(const json& j) {
    CPoly p;
    for (const auto& rec : j) {
        MultiIndex idx;
        for (const auto& ve : rec.at("vars")) idx[ve.at(0).get<int>()] = ve.at(1).get<int>();
        p.add_term(idx, Complex(rec.at("re").get<double>(), rec.at("im").get<double>()));
    }
    return p;
}

json hypothesis_report_to_json(const HypothesisReport& rep) {
    return {{"path_bound", rep.path_bound},
            {"diameter", rep.diameter},
            {"complement_connected", rep.complement_connected},
            {"interior_of_closure_equals_domain", rep.interior_of_closure_equals_domain},
            {"resolution", rep.resolution},
            {"note", "all topological checks certified at grid resolution only"}};
}

json approx_report_to_json(const ApproxReport& rep, const std::vector<int>& var_order) {
    json alphas = json::array();
    for (const auto& [alpha, err] : rep.alpha_errors) {
        json a = json::array();
        for (int o : alpha) a.push_back(o);
        alphas.push_back({{"alpha", a}, {"empirical_sup_error", err}});
    }
    json ledger = json::array();
    for (const auto& e : rep.ledger)
        ledger.push_back({{"term", e.term}, {"allocated", e.allocated}, {"achieved", e.achieved}});
    json vars = json::array();
    for (int v : var_order) vars.push_back(v);
    return {{"vars", vars},
            {"alpha_errors", alphas},
            {"budget_ledger", ledger},
            {"recursion_nodes", rep.recursion_nodes},
            {"converged", rep.converged},
            {"note", "errors are empirical sups over validation grids"}};
}

}  // namespace merglift
