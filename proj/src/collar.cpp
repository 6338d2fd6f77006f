#include <numbers>

#include "planefield/models.hpp"

namespace planefield {

ChartModel collar_model(double eps) {
  if (!(eps > 0.0)) throw ConfigError("collar width must be positive");
  const CoordNames names{"r", "phi", "t"};
  const double two_pi = 2 * std::numbers::pi;
  const std::string f =
      "smoothstep(" + format_number(1 + eps / 2) + ", " + format_number(1 + eps) + ", r)";

  ChartModel m;
  m.model_id = "collar";
  m.chart = Chart(names, {Interval{1, 1 + 2 * eps}, Interval{0, two_pi}, Interval{0, two_pi}},
                  {false, true, true});
  m.metric = MetricField::from_strings({"1", "0", "0", "1", "0", "1"}, names);
  m.forms.emplace("alpha", OneFormField::from_strings({"1 - " + f, f, "0"}, names));
  m.vectors.emplace("dt", VectorField::from_strings({"0", "0", "1"}, names));
  m.distributions["foliation"] = DistributionSpec{DistributionSpec::Kind::Kernel, "alpha", 1, {}};
  m.parameters = {{"epsilon", eps}, {"f", f}};
  m.default_distribution = "foliation";
  return m;
}

}  // namespace planefield
