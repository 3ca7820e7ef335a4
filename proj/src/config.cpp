#include "merglift/config.hpp"

#include <fstream>
#include <sstream>

namespace merglift {

namespace {

double read_num(std::istringstream& is, const std::string& what) {
    double v;
    if (!(is >> v)) throw ConfigError("expected number for " + what);
    return v;
}

Complex read_complex(std::istringstream& is, const std::string& what) {
    std::string tok;
    if (!(is >> tok)) throw ConfigError("expected complex for " + what);
    auto comma = tok.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(tok), 0.0);
        return Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    } catch (const std::exception&) {
        throw ConfigError("malformed complex '" + tok + "' for " + what);
    }
}

PlanarDomain parse_shape(std::istringstream& is, double resolution) {
    std::string kind;
    if (!(is >> kind)) throw ConfigError("missing domain shape");
    if (kind == "disc") {
        double cx = read_num(is, "disc cx"), cy = read_num(is, "disc cy"),
               r = read_num(is, "disc r");
        if (r <= 0) throw ConfigError("disc radius must be positive");
        return PlanarDomain(Disc{Complex(cx, cy), r}, resolution);
    }
    if (kind == "rect") {
        double x0 = read_num(is, "rect x0"), y0 = read_num(is, "rect y0"),
               x1 = read_num(is, "rect x1"), y1 = read_num(is, "rect y1");
        if (x1 <= x0 || y1 <= y0) throw ConfigError("empty rectangle");
        return PlanarDomain(Rect{x0, y0, x1, y1}, resolution);
    }
    if (kind == "mobius") {
        Complex a = read_complex(is, "mobius a"), b = read_complex(is, "mobius b"),
                c = read_complex(is, "mobius c"), d = read_complex(is, "mobius d");
        return PlanarDomain(MobiusDisc{a, b, c, d}, resolution);
    }
    if (kind == "sinecomb") return PlanarDomain(SineComb{}, resolution);
    if (kind == "annulus") {
        double cx = read_num(is, "annulus cx"), cy = read_num(is, "annulus cy"),
               r0 = read_num(is, "annulus r0"), r1 = read_num(is, "annulus r1");
        if (r0 <= 0 || r1 <= r0) throw ConfigError("need 0 < r0 < r1 for annulus");
        return PlanarDomain(Annulus{Complex(cx, cy), r0, r1}, resolution);
    }
    throw ConfigError("unknown domain shape '" + kind + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, double resolution) {
    RunConfig cfg;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        try {
            if (key == "domain") {
                std::string var;
                if (!(is >> var)) throw ConfigError("missing domain variable");
                if (var == "*") {
                    cfg.domain_template = parse_shape(is, resolution);
                } else {
                    int id = std::stoi(var);
                    cfg.domains.emplace_back(id, parse_shape(is, resolution));
                }
            } else if (key == "function") {
                std::string rest;
                std::getline(is, rest);
                cfg.function_text = rest;
            } else if (key == "n") {
                is >> cfg.order_n;
                if (cfg.order_n < 0) throw ConfigError("n must be >= 0");
            } else if (key == "epsilon") {
                is >> cfg.epsilon;
                if (cfg.epsilon <= 0) throw ConfigError("epsilon must be positive");
            } else if (key == "schedule") {
                is >> cfg.schedule;
            } else if (key == "series_term") {
                std::string rest;
                std::getline(is, rest);
                cfg.series_term = rest;
            } else if (key == "series_bound") {
                std::string kind;
                is >> kind;
                double c = read_num(is, "bound c"), p = read_num(is, "bound parameter");
                if (kind == "pseries")
                    cfg.series_bound = BoundRule::pseries(c, p);
                else if (kind == "geometric")
                    cfg.series_bound = BoundRule::geometric(c, p);
                else
                    throw ConfigError("bound catalog: pseries | geometric");
            } else if (key == "series_horizon") {
                is >> cfg.series_horizon;
            } else if (key == "series_epsilon") {
                is >> cfg.series_epsilon;
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const TailError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path, double resolution) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), resolution);
}

ProductDomain RunConfig::product(const std::vector<int>& vars) const {
    ProductDomain pd;
    for (int v : vars) {
        const PlanarDomain* found = nullptr;
        for (const auto& [id, d] : domains)
            if (id == v) found = &d;
        if (!found && domain_template) found = &*domain_template;
        if (!found) throw ConfigError("no domain declared for variable z" + std::to_string(v));
        pd.factors.push_back({v, *found});
    }
    return pd;
}

}  // namespace merglift
