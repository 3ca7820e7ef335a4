#pragma once

#include <nlohmann/json.hpp>

#include "merglift/chordal.hpp"
#include "merglift/geometry.hpp"
#include "merglift/lift.hpp"

namespace merglift {

/// Polynomial file format: a JSON list of term records
///   {"vars": [[id, exp], ...] (sorted), "re": <decimal>, "im": <decimal>}
/// Round-trips binary64 coefficients exactly.
nlohmann::json poly_to_json(const CPoly& p);
CPoly poly_from_json(const nlohmann::json& j);

nlohmann::json hypothesis_report_to_json(const HypothesisReport& rep);
nlohmann::json approx_report_to_json(const ApproxReport& rep,
                                     const std::vector<int>& var_order);

}  // namespace merglift
