#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "planefield/builtins.hpp"
#include "planefield/chart_file.hpp"
#include "planefield/contact_scan.hpp"
#include "planefield/open_book.hpp"
#include "planefield/transfer.hpp"

using namespace planefield;

namespace {

double max_entry(const Mat2& b) {
  return std::max({std::fabs(b[0][0]), std::fabs(b[0][1]), std::fabs(b[1][0]), std::fabs(b[1][1])});
}

Mat2 reeb_numeric_b(const ReebModel& m, double r, double phi = 0.7, double t = 1.9) {
  const Point p{r, phi, t};
  return second_fundamental_form(m.model.metric, m.model.distribution("foliation"), p, m.model.frame("XY", p));
}

SurfaceChart annulus() {
  SurfaceChart c;
  c.names = {"r", "theta"};
  c.domain = {Interval{1, 3}, Interval{0, 2 * std::numbers::pi}};
  c.periodic = {false, true};
  return c;
}

}  // namespace

TEST_CASE("Reeb profile plateaus") {
  const ReebModel m = reeb_solid_torus();
  for (double r : {0.0, 0.1, 0.2, 1.0 / 3}) CHECK(m.f.eval({r, 0, 0}) == 0.0);
  for (double r : {2.0 / 3, 0.8, 1.0}) CHECK(m.f.eval({r, 0, 0}) == 1.0);
  for (double r : {0.05, 0.2, 0.25}) CHECK(m.G.eval({r, 0, 0}) == doctest::Approx(r * r).epsilon(1e-15));
  for (double r : {1.0 / 3, 0.5, 1.0}) CHECK(m.G.eval({r, 0, 0}) == 1.0);
  double prev = m.G.eval({0.25, 0, 0});
  for (int i = 1; i <= 40; ++i) {
    const double r = 0.25 + (1.0 / 3 - 0.25) * i / 40.0;
    const double g = m.G.eval({r, 0, 0});
    CHECK(g > prev);
    prev = g;
  }
  const MetricSample s = metric_at(m.model.metric, {0.5, 0, 0});
  CHECK(s.g == la::identity3());
  CHECK(metric_at(m.model.metric, {0.2, 0, 0}).g[1][1] == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("Reeb second fundamental form") {
  const ReebModel m = reeb_solid_torus();
  CHECK(max_entry(reeb_numeric_b(m, 0.2)) == 0.0);
  CHECK(max_entry(reeb_numeric_b(m, 0.9)) <= 1e-15);
  const Mat2 mid = reeb_numeric_b(m, 0.5);
  CHECK(std::fabs(mid[0][0]) <= 1e-15);
  CHECK(std::fabs(la::det(mid)) <= 1e-14);

  CHECK(max_entry(closed_form_B_reeb(0.2)) == 0.0);
  // B22 at r = 1/2: f = 1/2, |n| = sqrt(1/2), f' from an independent difference quotient
  const double fprime =
      oracle::central_difference([&](const Point& q) { return m.f.eval(q); }, {0.5, 0, 0}, 0, 1e-5);
  const Mat2 cf = closed_form_B_reeb(0.5);
  CHECK(cf[1][1] == doctest::Approx(-0.5 * fprime / std::sqrt(0.5)).epsilon(1e-8));
  CHECK(cf[1][1] == doctest::Approx(mid[1][1]).epsilon(1e-12));
  CHECK_THROWS_AS((void)closed_form_B_reeb(0.0), DomainError);
  CHECK_THROWS_AS((void)closed_form_B_reeb(1.2), DomainError);

  for (int i = 1; i <= 200; ++i) {
    const double r = i / 200.0;
    const Mat2 num = reeb_numeric_b(m, r);
    const Mat2 ref = closed_form_B_reeb(r);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(std::fabs(num[a][b] - ref[a][b]) <= 1e-9);
    CHECK(std::fabs(ref[0][0] * ref[1][1]) <= 1e-12);
  }
}

TEST_CASE("Reeb foliation is integrable and parabolic") {
  const ReebModel m = reeb_solid_torus();
  const Distribution xi = m.model.distribution();
  const CurvatureReport r = classify(m.model.metric, xi, m.model.chart, {24, 6, 6}, kDefaultParabolicTol);
  CHECK(r.classification == Classification::Parabolic);
  CHECK(r.errors.empty());
  CHECK(r.max_abs_frobenius_residual <= 1e-10);
  CHECK(r.max_abs_contact_volume <= 1e-12);
  CHECK(r.box[0].lo == doctest::Approx(1e-3));
}

TEST_CASE("collar model") {
  const double eps = 0.1;
  const ChartModel c = collar_model(eps);
  const Distribution xi = c.distribution();
  for (int i = 0; i <= 40; ++i) {
    const Point p{1 + 2 * eps * i / 40.0, 0.3, 2.0};
    const PointCurvature pc = curvature_at(c.metric, xi, p);
    CHECK(la::values(tangent_frame_jets(xi, p).t) == Vec3{0, 0, 1});
    CHECK(std::fabs(pc.b[1][0]) <= 1e-10);
    CHECK(std::fabs(pc.b[1][1]) <= 1e-10);
    CHECK(std::fabs(la::det(pc.b)) <= 1e-10);
    CHECK(std::fabs(pc.frobenius_residual) <= 1e-10);
  }
  CHECK(c.form("alpha").value({1.02, 0, 0}) == Vec3{1, 0, 0});
  CHECK(c.form("alpha").value({1.15, 0, 0}) == Vec3{0, 1, 0});
  CHECK_THROWS_AS((void)collar_model(0.0), ConfigError);
}

TEST_CASE("product fibrations are totally geodesic") {
  SurfaceChart sc;
  sc.domain = {Interval{0, 2 * std::numbers::pi}, Interval{0, 2 * std::numbers::pi}};
  sc.periodic = {true, true};
  for (const auto& g : {SurfaceMetric::identity(sc), SurfaceMetric::from_strings(sc, {"1 + sin(u)^2/2", "0", "1"})}) {
    const ChartModel m = product_fibration(g);
    const CurvatureReport r = classify(m.metric, m.distribution(), m.chart, {6, 6, 4}, kDefaultParabolicTol);
    CHECK(r.classification == Classification::Parabolic);
    CHECK(r.mean_curvature.max == 0.0);
    CHECK(r.mean_curvature.min == 0.0);
    for (const auto& pc : r.points) CHECK(max_entry(pc.b) == 0.0);
  }
  CHECK_THROWS_AS((void)product_fibration(SurfaceMetric::from_strings(sc, {"-1", "0", "1"})), NotSPD);
}

TEST_CASE("Dehn twist pullback") {
  const SurfaceMetric g = SurfaceMetric::from_strings(
      annulus(), {"2 + sin(theta)", "0.3*cos(theta)", "1.5 + 0.5*sin(r)"});
  const TwistSpec tw{1.5, 2.5, 1};
  const SurfaceMetric h = dehn_twist_pullback(g, tw);
  for (double r : {1.0, 1.2, 1.5}) CHECK(sym2_max_diff(h.value(r, 0.4), g.value(r, 0.4)) == 0.0);
  // beyond b the map is a full turn, so H = G again
  for (double r : {2.5, 2.8}) CHECK(sym2_max_diff(h.value(r, 0.4), g.value(r, 0.4)) <= 1e-12);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ur(1.0, 3.0), ut(0.0, 2 * std::numbers::pi);
  const double c = 2 * std::numbers::pi;
  for (int i = 0; i < 50; ++i) {
    const double r = ur(rng), th = ut(rng);
    const double moved = th + c * smoothstep(tw.a, tw.b, r);
    CHECK(std::fabs(sym2_det(h.value(r, th)) - sym2_det(g.value(r, moved))) <= 1e-10);

    // finite-difference Jacobian of the twist map
    const double e = 1e-6;
    const double dth_dr =
        (smoothstep(tw.a, tw.b, r + e) - smoothstep(tw.a, tw.b, r - e)) / (2 * e) * c;
    const Sym2 G = g.value(r, moved);
    const Sym2 expect{G[0] + 2 * dth_dr * G[1] + dth_dr * dth_dr * G[2], G[1] + dth_dr * G[2], G[2]};
    CHECK(sym2_max_diff(h.value(r, th), expect) <= 1e-6 * (1 + dth_dr * dth_dr));

    const SurfaceMetric back = dehn_twist_pullback(h, TwistSpec{tw.a, tw.b, -1});
    CHECK(sym2_max_diff(back.value(r, th), g.value(r, th)) <= 1e-9);
  }
  const SurfaceMetric k0 = dehn_twist_pullback(g, TwistSpec{1.5, 2.5, 0});
  CHECK(sym2_max_diff(k0.value(2.0, 1.0), g.value(2.0, 1.0)) == 0.0);
  CHECK_THROWS_AS((void)dehn_twist_pullback(g, TwistSpec{2.5, 1.5, 1}), DomainError);
  CHECK_THROWS_AS((void)dehn_twist_pullback(g, TwistSpec{0.5, 1.5, 1}), DomainError);
}

TEST_CASE("chart files round-trip") {
  const ChartModel m = reeb_solid_torus().model;
  const Json doc = chart_model_to_json(m);
  CHECK(doc["schema"] == kChartSchema);
  const ChartModel back = chart_model_from_json(Json::parse(doc.dump()));
  CHECK(back.model_id == "reeb");
  CHECK(back.chart.periodic() == m.chart.periodic());
  CHECK(back.chart.singular_loci().size() == 1);
  for (double r : {0.1, 0.3, 0.5, 0.7}) {
    const Point p{r, 1, 2};
    const PointCurvature a = curvature_at(m.metric, m.distribution(), p);
    const PointCurvature b = curvature_at(back.metric, back.distribution(), p);
    CHECK(a.b == b.b);
    CHECK(a.mean_curvature == b.mean_curvature);
  }
  CHECK(chart_model_to_json(back) == doc);

  Json domain_exprs = doc;
  domain_exprs["domain"][1] = Json::array({0, "2*pi"});
  CHECK(chart_model_from_json(domain_exprs).chart.domain()[1].hi == doctest::Approx(2 * std::numbers::pi));

  try {
    (void)load_chart_model("/nonexistent/missing.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
  }
  Json bad = doc;
  bad["metric"] = Json::array({"1", "0"});
  CHECK_THROWS_AS((void)chart_model_from_json(bad), ConfigError);
  bad = doc;
  bad["distributions"]["foliation"] = {{"kernel", "beta"}};
  CHECK_THROWS_AS((void)chart_model_from_json(bad), ConfigError);
  bad = doc;
  bad["forms"]["alpha"][0] = "sin(";
  CHECK_THROWS_AS((void)chart_model_from_json(bad), SyntaxError);

  ChartModel callable = m;
  callable.metric = MetricField::from_function([](const JetVec3&) { return la::Mat3T<Jet1>{}; });
  CHECK_THROWS_AS((void)chart_model_to_json(callable), ConfigError);
}

TEST_CASE("shipped examples") {
  for (const auto& name : builtin_model_names()) {
    const ChartModel m = builtin_model(name);
    CHECK(m.model_id == name);
    CHECK_NOTHROW((void)m.distribution());
    CHECK_NOTHROW((void)chart_model_from_json(chart_model_to_json(m)));
  }
  CHECK_THROWS_AS((void)builtin_model("klein-bottle"), ConfigError);
  const auto periodic = shipped_periodic_examples();
  CHECK(periodic == std::vector<std::string>{"product", "torus-flat", "torus-graph", "torus-graph2", "torus-contact"});

  // contact / integrable dichotomy
  for (const auto& [model, form] : shipped_foliation_forms()) {
    const ChartModel m = builtin_model(model);
    const CurvatureReport r =
        classify(m.metric, Distribution::kernel(m.form(form)), m.chart, {5, 5, 5}, kDefaultParabolicTol);
    INFO(model);
    CHECK(r.errors.empty());
    CHECK(r.max_abs_frobenius_residual < 1e-10);
    CHECK(r.max_abs_contact_volume <= 1e-12);
  }
  for (const auto& [model, form] : shipped_contact_forms()) {
    const ChartModel m = builtin_model(model);
    const CurvatureReport r =
        classify(m.metric, Distribution::kernel(m.form(form)), m.chart, {5, 5, 5}, kDefaultParabolicTol);
    INFO(model);
    CHECK(r.min_abs_contact_volume > 0.1);
  }
}

TEST_CASE("metric transfer") {
  const CoordNames xyz{"x", "y", "z"};
  const Chart torus(xyz, {Interval{0, 1}, Interval{0, 1}, Interval{0, 1}}, {true, true, true});
  const MetricField g = MetricField::from_strings(
      {"1.2 + 0.2*sin(2*pi*y)", "0.1*cos(2*pi*z)", "0", "1 + 0.3*cos(2*pi*x)^2", "0", "1"}, xyz);
  const auto xi = Distribution::kernel(OneFormField::from_strings({"0.3*sin(2*pi*x)", "0", "1"}, xyz));

  const TransferResult same = transfer_metric(g, xi, xi, torus, {4, 4, 4});
  CHECK(same.report.max_residual <= 1e-12);
  CHECK(same.report.min_transversality == doctest::Approx(1.0));
  for (const Point p : {Point{0.1, 0.2, 0.3}, Point{0.7, 0.5, 0.9}}) {
    const Mat3 a = metric_at(g, p).g;
    const Mat3 b = metric_at(same.metric, p).g;
    CHECK(la::max_abs_diff(a, b) <= 1e-13);
  }

  const auto flat_xi = Distribution::kernel(OneFormField::from_strings({"0", "0", "1"}, xyz));
  const auto tilted = Distribution::kernel(OneFormField::from_strings(
      {"0", format_number(-std::sin(0.1)), format_number(std::cos(0.1))}, xyz));
  const TransferResult t = transfer_metric(MetricField::euclidean(), flat_xi, tilted, torus, {4, 4, 4});
  CHECK(t.report.points.size() == 64);
  CHECK(t.report.max_abs_det_b_tilde <= 1e-12);
  CHECK(t.report.max_residual <= 1e-12);
  CHECK(t.report.min_transversality == doctest::Approx(std::cos(0.1)));
  const Json j = transfer_report_to_json(t.report, false);
  CHECK(j.contains("max_abs_det_b_tilde"));
  CHECK(j.contains("max_residual"));

  const auto vertical = Distribution::kernel(OneFormField::from_strings({"1", "0", "0"}, xyz));
  try {
    (void)transfer_metric(MetricField::euclidean(), flat_xi, vertical, torus, {2, 2, 2});
    FAIL("expected NotTransverse");
  } catch (const NotTransverse& e) {
    CHECK(e.point() == Point{0, 0, 0});
    CHECK(e.angle() == 0.0);
  }
}

TEST_CASE("open book demo assembles") {
  OpenBookOptions o;
  o.classify_grid = {8, 6, 6};
  o.jobs = 2;
  const AtlasReport r = assemble_open_book_demo(o);
  REQUIRE(r.charts.size() == 5);
  for (const auto& c : r.charts) {
    INFO(c.name);
    CHECK(c.classification == Classification::Parabolic);
    CHECK(c.errors == 0);
  }
  REQUIRE(r.overlaps.size() == 5);
  for (const auto& ov : r.overlaps) {
    INFO(ov.from << "->" << ov.to);
    CHECK(ov.max_metric_mismatch <= 1e-9);
    CHECK(ov.max_leaf_tangency <= 1e-10);
  }
  CHECK(r.overlaps[0].max_metric_mismatch <= 1e-12);

  const Json atlas = atlas_to_json(open_book_demo_atlas());
  CHECK(atlas["charts"].size() == 5);
  CHECK(atlas["transitions"].size() == 5);
  CHECK(atlas["charts"][2].contains("metric_note"));

  OpenBookOptions strict = o;
  strict.mismatch_tol = 1e-30;
  strict.classify_grid = {2, 2, 2};
  CHECK_THROWS_AS((void)assemble_open_book_demo(strict), OverlapMismatch);
}

TEST_CASE("contact deformation scan") {
  CHECK(parse_s_range("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_s_range("0.5:2:1") == std::vector<double>{0.5});
  CHECK_THROWS_AS((void)parse_s_range("0:1"), ConfigError);
  CHECK_THROWS_AS((void)parse_s_range("0:1:x"), ConfigError);
  CHECK_THROWS_AS((void)parse_s_range("0:1:0"), ConfigError);

  const ChartModel torus = builtin_model("torus-flat");
  const OneFormField dz = torus.form("dz");
  const CoordNames& names = torus.chart.names();
  const auto zero = OneFormField::from_strings({"0", "0", "0"}, names);
  const std::vector<double> s{-0.5, 0.0, 0.5, 1.0};
  const ScanReport flat = contact_deformation_scan(torus.metric, torus.chart, dz, zero, s, {4, 4, 4});
  for (const auto& row : flat.rows) {
    CHECK(row.min_contact_volume == 0.0);
    CHECK(row.max_contact_volume == 0.0);
    CHECK(row.max_tilt_angle == 0.0);
  }

  const auto helix = OneFormField::from_strings({"cos(2*pi*z)", "sin(2*pi*z)", "0"}, names);
  const ScanReport scan =
      contact_deformation_scan(torus.metric, torus.chart, dz, helix, parse_s_range("0:0.4:5"), {4, 4, 8}, 3);
  double prev_tilt = -1.0;
  for (const auto& row : scan.rows) {
    const double expect = -2 * std::numbers::pi * row.s * row.s;
    CHECK(row.min_contact_volume == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    CHECK(row.max_contact_volume == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    CHECK(row.max_tilt_angle == doctest::Approx(std::atan(row.s)).epsilon(1e-12));
    CHECK(row.max_tilt_angle > prev_tilt);
    CHECK(row.min_normal_angle > 0.0);
    prev_tilt = row.max_tilt_angle;
  }
  CHECK(scan.rows[0].max_tilt_angle == 0.0);

  const ChartModel reeb = builtin_model("reeb");
  const auto dphi = OneFormField::from_strings({"0", "1", "0"}, reeb.chart.names());
  const ScanReport rs = contact_deformation_scan(reeb.metric, reeb.chart, reeb.form("alpha"), dphi, {0.5}, {31, 4, 4});
  CHECK(rs.rows[0].min_contact_volume >= -1e-15);
  CHECK(rs.rows[0].max_contact_volume > 1.0);
  CHECK(scan_report_to_json(rs)["rows"].size() == 1);
}
