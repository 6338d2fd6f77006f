#include <cmath>
#include <numbers>

#include "planefield/models.hpp"

namespace planefield {

namespace {

CoordNames surface_coords(const SurfaceChart& c) { return {c.names[0], c.names[1], "t"}; }

}  // namespace

SurfaceMetric SurfaceMetric::from_strings(const SurfaceChart& chart, const std::array<std::string, 3>& upper) {
  const CoordNames coords = surface_coords(chart);
  std::array<Expr, 3> e{Expr::parse(upper[0], coords), Expr::parse(upper[1], coords),
                        Expr::parse(upper[2], coords)};
  auto fn = [e](const JetVec3& x) {
    return Sym2Jet{e[0].eval_composed(x), e[1].eval_composed(x), e[2].eval_composed(x)};
  };
  return SurfaceMetric(chart, fn, e);
}

SurfaceMetric SurfaceMetric::identity(const SurfaceChart& chart) {
  return from_strings(chart, {"1", "0", "1"});
}

Sym2 SurfaceMetric::value(double u, double v) const {
  const Sym2Jet j = jet(u, v);
  return {j[0].value, j[1].value, j[2].value};
}

double sym2_max_diff(const Sym2& a, const Sym2& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void require_spd2(const Sym2& g, const Point& p) {
  if (!(g[0] > 0.0)) throw NotSPD(p, 1);
  if (!(sym2_det(g) > 0.0)) throw NotSPD(p, 2);
}

ChartModel product_fibration(const SurfaceMetric& g, const std::string& model_id) {
  const SurfaceChart& sc = g.chart();
  const CoordNames names = surface_coords(sc);
  const double two_pi = 2 * std::numbers::pi;

  // Positivity on a coarse lattice of the surface chart.
  constexpr int kProbe = 9;
  for (int i = 0; i < kProbe; ++i)
    for (int j = 0; j < kProbe; ++j) {
      const double u = sc.domain[0].lo + sc.domain[0].width() * i / (kProbe - 1);
      const double v = sc.domain[1].lo + sc.domain[1].width() * j / (kProbe - 1);
      require_spd2(g.value(u, v), {u, v, 0.0});
    }

  ChartModel m;
  m.model_id = model_id;
  m.chart = Chart(names, {sc.domain[0], sc.domain[1], Interval{0, two_pi}},
                  {sc.periodic[0], sc.periodic[1], true});
  if (const auto& e = g.exprs()) {
    m.metric = MetricField::from_exprs({(*e)[0], (*e)[1], Expr::number(0, names), (*e)[2],
                                        Expr::number(0, names), Expr::number(1, names)});
  } else {
    m.metric = MetricField::from_function([g](const JetVec3& x) {
      const Sym2Jet s = g.at(x);
      return JetMat3{{{s[0], s[1], Jet1(0.0)}, {s[1], s[2], Jet1(0.0)}, {Jet1(0.0), Jet1(0.0), Jet1(1.0)}}};
    });
  }
  m.forms.emplace("dt", OneFormField::from_strings({"0", "0", "1"}, names));
  m.distributions["leaves"] = DistributionSpec{DistributionSpec::Kind::Kernel, "dt", 1, {}};
  m.default_distribution = "leaves";
  return m;
}

SurfaceMetric dehn_twist_pullback(const SurfaceMetric& g, const TwistSpec& tw) {
  if (!(tw.a < tw.b)) throw DomainError("dehn_twist_pullback", "twist annulus needs a < b");
  const Interval& radial = g.chart().domain[0];
  if (tw.a < radial.lo || tw.b > radial.hi)
    throw DomainError("dehn_twist_pullback", "twist annulus [" + format_number(tw.a) + ", " +
                                                 format_number(tw.b) + "] leaves the chart");
  const double c = 2 * std::numbers::pi * tw.k;
  auto fn = [g, tw, c](const JetVec3& x) {
    const Jet1 s = smoothstep(Jet1(tw.a), Jet1(tw.b), x[0]);
    const Jet1 shear = c * smoothstep_slope(tw.a, tw.b, x[0]);
    const Sym2Jet G = g.at({x[0], x[1] + c * s, x[2]});
    // D phi = [[1, 0], [shear, 1]]
    return Sym2Jet{G[0] + 2.0 * shear * G[1] + shear * shear * G[2], G[1] + shear * G[2], G[2]};
  };
  return SurfaceMetric(g.chart(), fn);
}

}  // namespace planefield
