#pragma once

#include <string>

#include <json.hpp>

#include "planefield/distributions.hpp"

namespace planefield {

using Json = nlohmann::json;

Json point_to_json(const Point& p);
Json interval_box_to_json(const std::array<Interval, 3>& box);

/// Report document {model, distribution, grid, tol, aggregates,
/// classification, worst_points, errors}; per-point records on request.
Json report_to_json(const CurvatureReport& report, bool include_points);

/// Aggregates-only view used by `classify`.
Json aggregates_to_json(const CurvatureReport& report);

/// One row per sampled point.
std::string report_to_csv(const CurvatureReport& report);

}  // namespace planefield
