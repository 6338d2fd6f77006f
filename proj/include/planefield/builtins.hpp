#pragma once

#include <string>
#include <utility>
#include <vector>

#include "planefield/models.hpp"

namespace planefield {

/// Names accepted by builtin_model, in a fixed order.
const std::vector<std::string>& builtin_model_names();

/// Shipped example charts: "reeb", "collar", "product", "spheres",
/// "cylinders", "torus-flat" (with a second, tilted constant form), "torus-graph", "torus-graph2",
/// "torus-contact", "standard-contact". ConfigError for other names.
ChartModel builtin_model(const std::string& name);

/// The shipped examples on closed (fully periodic) charts.
std::vector<std::string> shipped_periodic_examples();

/// (model, form) pairs whose kernels are foliations, and pairs that are
/// contact forms.
std::vector<std::pair<std::string, std::string>> shipped_foliation_forms();
std::vector<std::pair<std::string, std::string>> shipped_contact_forms();

/// The periodic vector field used for quadrature convergence checks:
/// "X" on "torus-flat".
inline constexpr const char* kPeriodicProbeModel = "torus-flat";
inline constexpr const char* kPeriodicProbeField = "X";

/// "builtin:<name>" or a chart-file path.
ChartModel model_target(const std::string& target);

/// A 1-form given either by name in `m` or inline as "e1,e2,e3" over the
/// chart coordinates. The empty text selects the defining form of the
/// model's default distribution.
OneFormField form_argument(const ChartModel& m, const std::string& text);

}  // namespace planefield
