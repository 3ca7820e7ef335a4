// merglift: batch front door for domain checks, derivative lifts, chordal
// approximation schedules and the unbounded-directional-derivative demo.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "merglift/chordal.hpp"
#include "merglift/config.hpp"
#include "merglift/io.hpp"
#include "merglift/lift.hpp"
#include "merglift/tail.hpp"

namespace fs = std::filesystem;
using namespace merglift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBudget = 2;
constexpr int kExitConfig = 3;
constexpr int kExitHypothesis = 4;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 1;
    double resolution = 0.01;
    int validate_density = 4;
};

int degree_cap_from_env() {
    if (const char* s = std::getenv("MERGLIFT_MAX_DEGREE")) {
        int v = std::atoi(s);
        if (v > 0) return v;
    }
    return kDefaultDegreeCap;
}

ApproxOptions make_options(const GlobalOpts& g) {
    ApproxOptions o;
    o.grid.seed = g.seed;
    o.grid.densify = g.validate_density;
    o.degree_cap = degree_cap_from_env();
    return o;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::vector<int> sorted_function_vars(const RunConfig& cfg, const Expr& f) {
    std::set<int> vs = free_vars(f);
    // Declared domains beyond the free variables still count as factors.
    for (const auto& [id, d] : cfg.domains) vs.insert(id);
    return {vs.begin(), vs.end()};
}

int cmd_check_domain(const GlobalOpts& g) {
    RunConfig cfg = load_config(g.config_path, g.resolution);
    if (cfg.domains.empty()) throw ConfigError("check-domain needs at least one domain line");
    fs::create_directories(g.out_dir);
    nlohmann::json out = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& [var, dom] : cfg.domains) {
        HypothesisReport rep = check_hypotheses(dom);
        nlohmann::json j = hypothesis_report_to_json(rep);
        j["var"] = var;
        out.push_back(j);
        std::cout << "z" << var << ": M=" << rep.path_bound
                  << " complement_connected=" << rep.complement_connected
                  << " interior_of_closure_ok=" << rep.interior_of_closure_equals_domain
                  << " (at h=" << rep.resolution << ")\n";
        if (!rep.passed()) all_pass = false;
    }
    write_text(fs::path(g.out_dir) / "hypotheses.json", out.dump(2) + "\n");
    return all_pass ? kExitOk : kExitHypothesis;
}

int cmd_lift(const GlobalOpts& g) {
    RunConfig cfg = load_config(g.config_path, g.resolution);
    Expr f;
    if (cfg.series_term) {
        if (!cfg.series_bound) throw ConfigError("series_term requires series_bound");
        SeriesFunction sf =
            series_from_template(*cfg.series_term, *cfg.series_bound, cfg.series_horizon);
        auto support = select_finite_support(sf, cfg.series_epsilon);
        f = restrict_to_finite(sf, support);
        std::cout << "series reduced to " << support.size() << " variables\n";
    } else if (cfg.function_text) {
        f = parse(*cfg.function_text);
    } else {
        throw ConfigError("lift needs a function or a series spec");
    }

    LiftRequest req;
    req.f = f;
    req.pd = cfg.product(sorted_function_vars(cfg, f));
    if (req.pd.factors.empty()) throw ConfigError("lift needs at least one variable");
    req.max_order = cfg.order_n;
    req.eps = cfg.epsilon;
    req.options = make_options(g);

    ApproxReport rep = lift(req);

    fs::create_directories(g.out_dir);
    write_text(fs::path(g.out_dir) / "polynomial.json", poly_to_json(rep.poly).dump(2) + "\n");
    write_text(fs::path(g.out_dir) / "report.json",
               approx_report_to_json(rep, req.pd.var_ids()).dump(2) + "\n");
    {
        std::ostringstream csv;
        for (int v : req.pd.var_ids()) csv << "alpha_z" << v << ",";
        csv << "empirical_sup_error\n";
        for (const auto& [alpha, err] : rep.alpha_errors) {
            for (int o : alpha) csv << o << ",";
            csv << err << "\n";
        }
        write_text(fs::path(g.out_dir) / "alpha_errors.csv", csv.str());
    }
    double worst = rep.max_alpha_error();
    std::cout << "max per-alpha empirical sup error: " << worst
              << " (budget " << req.eps << ")\n";
    return (rep.converged && worst <= req.eps) ? kExitOk : kExitBudget;
}

int cmd_chordal(const GlobalOpts& g) {
    RunConfig cfg = load_config(g.config_path, g.resolution);
    if (!cfg.function_text) throw ConfigError("chordal needs a function");
    Expr f = parse(*cfg.function_text);
    ProductDomain pd = cfg.product(sorted_function_vars(cfg, f));
    if (pd.factors.empty()) throw ConfigError("chordal needs at least one variable");

    ChordalSeq seq = chordal_approx(f, pd, cfg.schedule, make_options(g));

    fs::create_directories(g.out_dir);
    std::ostringstream csv;
    csv << "n,dilation,degree,chi_sup_error,euclid_sup_error\n";
    for (size_t n = 0; n < seq.steps.size(); ++n) {
        const ChordalStep& s = seq.steps[n];
        csv << (n + 1) << "," << s.dilation << "," << s.degree << "," << s.chi_error << ","
            << s.euclid_error << "\n";
        char name[32];
        std::snprintf(name, sizeof(name), "chordal_%02zu.json", n + 1);
        write_text(fs::path(g.out_dir) / name, poly_to_json(s.poly).dump(2) + "\n");
        std::cout << "n=" << (n + 1) << " chi_sup=" << s.chi_error
                  << " euclid_sup=" << s.euclid_error << "\n";
    }
    write_text(fs::path(g.out_dir) / "schedule.csv", csv.str());
    return kExitOk;
}

int cmd_counterexample(const GlobalOpts& g, const std::vector<int>& ms) {
    std::vector<int> values = ms.empty() ? std::vector<int>{1, 10, 100, 1000, 10000} : ms;
    fs::create_directories(g.out_dir);
    std::ostringstream csv;
    csv << "m,directional_derivative\n";
    for (int m : values) {
        double v = counterexample_directional(m);
        csv << m << "," << v << "\n";
        std::cout << "m=" << m << " value=" << v << "\n";
    }
    write_text(fs::path(g.out_dir) / "counterexample.csv", csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial density toolkit for product domains"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "path to run config");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "seed for all random sampling");
    app.add_option("--resolution", g.resolution, "grid resolution h");
    app.add_option("--validate-density", g.validate_density,
                   "validation grid density multiplier");

    auto* check = app.add_subcommand("check-domain", "run geometry hypothesis checks");
    auto* liftc = app.add_subcommand("lift", "build the derivative-approximating polynomial");
    auto* chordalc = app.add_subcommand("chordal", "chordal approximation schedule");
    auto* counter = app.add_subcommand("counterexample", "directional-derivative growth demo");
    std::vector<int> ms;
    counter->add_option("--m", ms, "values of m (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check_domain(g);
        if (liftc->parsed()) return cmd_lift(g);
        if (chordalc->parsed()) return cmd_chordal(g);
        if (counter->parsed()) return cmd_counterexample(g, ms);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
