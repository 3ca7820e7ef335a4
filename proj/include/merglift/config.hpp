#pragma once

#include <optional>
#include <string>

#include "merglift/geometry.hpp"
#include "merglift/tail.hpp"

namespace merglift {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed run configuration. Domain lines:
///   domain <var> disc <cx> <cy> <r>
///   domain <var> rect <x0> <y0> <x1> <y1>
///   domain <var> mobius <a> <b> <c> <d>      (complex as re or re,im)
///   domain <var> sinecomb
///   domain <var> annulus <cx> <cy> <r0> <r1>  (test-only shape)
/// A wildcard var '*' declares a template factor applied to every series
/// support variable. Other keys: function, n, epsilon, schedule,
/// series_term, series_bound (pseries c p | geometric c r), series_horizon,
/// series_epsilon.
struct RunConfig {
    std::vector<std::pair<int, PlanarDomain>> domains;
    std::optional<PlanarDomain> domain_template;
    std::optional<std::string> function_text;
    int order_n = 0;
    double epsilon = 1e-4;
    int schedule = 5;
    std::optional<std::string> series_term;
    std::optional<BoundRule> series_bound;
    int series_horizon = 50;
    double series_epsilon = 0.05;

    ProductDomain product(const std::vector<int>& vars) const;
};

RunConfig parse_config_text(const std::string& text, double resolution);
RunConfig load_config(const std::string& path, double resolution);

}  // namespace merglift
