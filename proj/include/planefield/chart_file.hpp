#pragma once

#include <string>

#include "planefield/models.hpp"
#include "planefield/report_io.hpp"

namespace planefield {

inline constexpr const char* kChartSchema = "planefield.chart/1";

/// Builds a model from a chart document. Domain bounds may be numbers or
/// constant expressions such as "2*pi". Throws ConfigError on malformed
/// input and the expression errors on bad formulas.
ChartModel chart_model_from_json(const Json& doc);

/// Reads and parses a chart file; ConfigError names the path on failure.
ChartModel load_chart_model(const std::string& path);

/// Serializes a model whose fields are all expression-backed; throws
/// ConfigError for callable-backed fields.
Json chart_model_to_json(const ChartModel& model);

}  // namespace planefield
