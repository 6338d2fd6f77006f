#include <cmath>
#include <numbers>

#include "planefield/models.hpp"

namespace planefield {

ReebModel reeb_solid_torus() {
  const CoordNames names{"r", "phi", "t"};
  const double two_pi = 2 * std::numbers::pi;
  const std::string f = kReebF;

  ChartModel m;
  m.model_id = "reeb";
  m.chart = Chart(names, {Interval{0, 1}, Interval{0, two_pi}, Interval{0, two_pi}}, {false, true, true},
                  {SingularLocus{0, 0.0, "core circle r = 0"}});
  m.metric = MetricField::from_strings({"1", "0", "0", kReebG, "0", "1"}, names);
  m.forms.emplace("alpha", OneFormField::from_strings({f, "0", "1 - " + f}, names));
  m.vectors.emplace("X", VectorField::from_strings({"0", "1", "0"}, names));
  m.vectors.emplace("Y", VectorField::from_strings({"1 - " + f, "0", "-" + f}, names));
  m.distributions["foliation"] = DistributionSpec{DistributionSpec::Kind::Kernel, "alpha", 1, {}};
  m.distributions["frame"] = DistributionSpec{DistributionSpec::Kind::Span, {}, 1, {"X", "Y"}};
  m.named_frames["XY"] = {"X", "Y"};
  m.parameters = {{"f", kReebF}, {"G", kReebG}};
  m.default_distribution = "foliation";

  return ReebModel{std::move(m), Expr::parse(kReebF, names), Expr::parse(kReebG, names)};
}

Mat2 closed_form_B_reeb(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("closed_form_B_reeb", r);
  const double f = smoothstep(1.0 / 3, 2.0 / 3, r);
  const double fp = smoothstep_slope(1.0 / 3, 2.0 / 3, r);
  const double s = smoothstep(0.25, 1.0 / 3, r);
  const double sp = smoothstep_slope(0.25, 1.0 / 3, r);
  const double g_prime = -sp * r * r + 2 * r * (1 - s) + sp;
  const double norm = std::sqrt(2 * f * f - 2 * f + 1);
  return {{{-0.5 * f * g_prime / norm, 0.0}, {0.0, -(1 - f) * fp / norm}}};
}

}  // namespace planefield
