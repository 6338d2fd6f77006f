#include "planefield/open_book.hpp"

#include <cmath>
#include <numbers>

#include "planefield/chart_file.hpp"

namespace planefield {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

ChartModel renamed(ChartModel m, const std::string& id) {
  m.model_id = id;
  return m;
}

/// Sine of the angle between two covectors, measured with ginv.
double covector_sine(const Mat3& ginv, const Vec3& a, const Vec3& b) {
  const double ab = la::inner(ginv, a, b);
  const double aa = la::inner(ginv, a, a);
  const double bb = la::inner(ginv, b, b);
  Vec3 perp;
  for (int i = 0; i < 3; ++i) perp[i] = b[i] - ab / aa * a[i];
  return std::sqrt(std::max(0.0, la::inner(ginv, perp, perp)) / bb);
}

}  // namespace

const AtlasChart& OpenBookAtlas::chart(const std::string& name) const {
  for (const auto& c : charts)
    if (c.name == name) return c;
  throw ConfigError("atlas has no chart named '" + name + "'");
}

OpenBookAtlas open_book_demo_atlas(const OpenBookOptions& o) {
  const double eps = o.collar_eps;
  const double s_in = 1 + eps;
  const double s_out = o.page_outer;
  if (!(o.twist.a > s_in + eps && o.twist.b < s_out - eps))
    throw ConfigError("open book: the twist annulus must sit inside the page away from both collars");

  OpenBookAtlas atlas;
  atlas.charts.push_back({"reeb", renamed(reeb_solid_torus().model, "reeb"), ""});
  atlas.charts.push_back({"collar", renamed(collar_model(eps), "collar"), ""});

  SurfaceChart page;
  page.names = {"s", "theta"};
  page.domain = {Interval{s_in, s_out}, Interval{0, kTwoPi}};
  page.periodic = {false, true};
  const SurfaceMetric flat = SurfaceMetric::identity(page);
  RankOnePathOptions po;
  po.boundary_margin = eps / 2;
  const MetricPath path = rank_one_path(flat, dehn_twist_pullback(flat, o.twist), po);

  ChartModel cyl;
  cyl.model_id = "cylinder";
  const CoordNames cyl_names{"s", "theta", "tau"};
  cyl.chart = Chart(cyl_names, {page.domain[0], page.domain[1], Interval{0, kTwoPi}}, {false, true, false});
  cyl.metric = path_metric_3d(path, kTwoPi);
  cyl.forms.emplace("dtau", OneFormField::from_strings({"0", "0", "1"}, cyl_names));
  cyl.distributions["pages"] = DistributionSpec{DistributionSpec::Kind::Kernel, "dtau", 1, {}};
  cyl.default_distribution = "pages";
  cyl.parameters = {{"twist", {{"a", o.twist.a}, {"b", o.twist.b}, {"k", o.twist.k}}},
                    {"stages", path.stages()},
                    {"delta0", path.delta0()},
                    {"delta1", path.delta1()}};
  atlas.charts.push_back({"cylinder", std::move(cyl),
                          "dtau^2 + G(tau/2pi), G a rank-one path from the flat page metric to its "
                          "pullback under the page twist"});
  atlas.charts.push_back({"collar-outer", renamed(collar_model(eps), "collar-outer"), ""});
  atlas.charts.push_back({"reeb-outer", renamed(reeb_solid_torus().model, "reeb-outer"), ""});

  const double d = o.overlap_depth;
  const Interval circle{0, kTwoPi};
  const std::string twist_angle = "theta + " + format_number(kTwoPi * o.twist.k) + "*smoothstep(" +
                                  format_number(o.twist.a) + ", " + format_number(o.twist.b) + ", s)";
  const std::string flip = format_number(s_out + 1 + eps) + " - s";
  atlas.transitions = {
      {"reeb", "collar", {"r", "phi", "t"}, {Interval{1 - d, 1}, circle, circle}},
      {"collar", "cylinder", {"r", "t", "phi"}, {Interval{1 + eps, 1 + 2 * eps}, circle, circle}},
      {"cylinder", "cylinder", {"s", twist_angle, "tau - " + format_number(kTwoPi)},
       {page.domain[0], circle, Interval{kTwoPi * (1 - d), kTwoPi}}},
      {"cylinder", "collar-outer", {flip, "tau", "-theta"}, {Interval{s_out - eps, s_out}, circle, circle}},
      {"reeb-outer", "collar-outer", {"r", "phi", "t"}, {Interval{1 - d, 1}, circle, circle}},
  };
  return atlas;
}

OverlapResult check_overlap(const OpenBookAtlas& atlas, const TransitionMap& t, const std::array<int, 3>& grid) {
  const ChartModel& a = atlas.chart(t.from).model;
  const ChartModel& b = atlas.chart(t.to).model;
  const CoordNames& names = a.chart.names();
  const std::array<Expr, 3> psi{Expr::parse(t.map[0], names), Expr::parse(t.map[1], names),
                                Expr::parse(t.map[2], names)};
  const OneFormField& alpha_a = a.form(a.distributions.at(a.default_distribution).form);
  const OneFormField& alpha_b = b.form(b.distributions.at(b.default_distribution).form);

  OverlapResult out;
  out.from = t.from;
  out.to = t.to;
  const Chart region(names, t.region, {false, false, false});
  for (const Point& p : lattice_points(region, t.region, grid)) {
    Point q;
    Mat3 jac;
    for (int i = 0; i < 3; ++i) {
      const Jet1 e = psi[i].eval_jet(p);
      q[i] = e.value;
      for (int k = 0; k < 3; ++k) jac[i][k] = e.d(k);
    }
    const Mat3 ga = metric_at(a.metric, p).g;
    const Mat3 gb = metric_at(b.metric, q).g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double pulled = 0.0;
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) pulled += jac[k][i] * gb[k][l] * jac[l][j];
        out.max_metric_mismatch = std::max(out.max_metric_mismatch, std::fabs(ga[i][j] - pulled));
      }
    const Vec3 fa = alpha_a.value(p);
    const Vec3 fb = alpha_b.value(q);
    Vec3 pulled_form{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) pulled_form[i] += jac[k][i] * fb[k];
    out.max_leaf_tangency = std::max(out.max_leaf_tangency, covector_sine(la::inverse(ga), fa, pulled_form));
    ++out.samples;
  }
  return out;
}

AtlasReport assemble_open_book_demo(const OpenBookOptions& o) {
  const OpenBookAtlas atlas = open_book_demo_atlas(o);
  AtlasReport r;
  r.mismatch_tol = o.mismatch_tol;
  r.parabolic_tol = o.parabolic_tol;
  for (const AtlasChart& c : atlas.charts) {
    ClassifyOptions co;
    co.jobs = o.jobs;
    co.model_id = c.name;
    const CurvatureReport cr =
        classify(c.model.metric, c.model.distribution(), c.model.chart, o.classify_grid, o.parabolic_tol, co);
    r.charts.push_back({c.name, cr.classification, cr.max_abs_extrinsic_curvature, cr.errors.size()});
  }
  for (const TransitionMap& t : atlas.transitions) {
    OverlapResult ov = check_overlap(atlas, t, o.overlap_grid);
    if (ov.max_metric_mismatch > o.mismatch_tol)
      throw OverlapMismatch(t.from + "->" + t.to, ov.max_metric_mismatch, o.mismatch_tol);
    r.overlaps.push_back(std::move(ov));
  }
  return r;
}

Json atlas_report_to_json(const AtlasReport& r) {
  Json charts = Json::array();
  for (const auto& c : r.charts)
    charts.push_back({{"name", c.name},
                      {"classification", to_string(c.classification)},
                      {"max_abs_extrinsic_curvature", c.max_abs_extrinsic_curvature},
                      {"errors", c.errors}});
  Json overlaps = Json::array();
  double worst = 0.0;
  for (const auto& ov : r.overlaps) {
    overlaps.push_back({{"from", ov.from},
                        {"to", ov.to},
                        {"max_metric_mismatch", ov.max_metric_mismatch},
                        {"max_leaf_tangency", ov.max_leaf_tangency},
                        {"samples", ov.samples}});
    worst = std::max(worst, ov.max_metric_mismatch);
  }
  return {{"schema", "planefield.atlas_report/1"},
          {"mismatch_tol", r.mismatch_tol},
          {"parabolic_tol", r.parabolic_tol},
          {"max_metric_mismatch", worst},
          {"charts", charts},
          {"overlaps", overlaps}};
}

Json atlas_to_json(const OpenBookAtlas& atlas) {
  Json charts = Json::array();
  for (const AtlasChart& c : atlas.charts) {
    Json entry{{"name", c.name}};
    if (c.metric_note.empty()) {
      entry["chart"] = chart_model_to_json(c.model);
    } else {
      const Chart& ch = c.model.chart;
      entry["coords"] = Json::array({ch.names()[0], ch.names()[1], ch.names()[2]});
      entry["domain"] = interval_box_to_json(ch.domain());
      entry["periodic"] = Json::array({ch.periodic()[0], ch.periodic()[1], ch.periodic()[2]});
      entry["metric_note"] = c.metric_note;
      entry["parameters"] = c.model.parameters;
    }
    charts.push_back(std::move(entry));
  }
  Json transitions = Json::array();
  for (const TransitionMap& t : atlas.transitions)
    transitions.push_back({{"from", t.from},
                           {"to", t.to},
                           {"map", Json::array({t.map[0], t.map[1], t.map[2]})},
                           {"region", interval_box_to_json(t.region)}});
  return {{"schema", "planefield.atlas/1"}, {"charts", charts}, {"transitions", transitions}};
}

}  // namespace planefield
