#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "planefield/builtins.hpp"
#include "planefield/chart_file.hpp"
#include "planefield/contact_scan.hpp"
#include "planefield/metric_path.hpp"
#include "planefield/open_book.hpp"
#include "planefield/transfer.hpp"
#include "planefield/verify.hpp"

namespace planefield {

namespace {

struct Measurement {
  std::optional<double> value;
  std::optional<Classification> classification;
  Json details = Json::object();
};

using Operation = std::function<Measurement(const CheckSpec&, int jobs)>;

ChartModel load_target(const std::string& target) {
  if (target.empty()) throw ConfigError("this operation needs a target model");
  return model_target(target);
}

GridCounts grid_or(const CheckSpec& c, GridCounts fallback) { return c.grid.value_or(fallback); }

std::string param_string(const CheckSpec& c, const char* key, const std::string& fallback = {}) {
  return c.params.contains(key) ? c.params[key].get<std::string>() : fallback;
}

double param_double(const CheckSpec& c, const char* key, double fallback) {
  return c.params.contains(key) ? c.params[key].get<double>() : fallback;
}

int param_int(const CheckSpec& c, const char* key, int fallback) {
  return c.params.contains(key) ? c.params[key].get<int>() : fallback;
}

/// Parabolic tolerance for report-style checks: the check's tolerance when
/// it is a classification check, otherwise the default.
double classify_tol(const CheckSpec& c) {
  using K = Expectation::Kind;
  const bool cls = c.expectation.kind == K::Classification || c.expectation.kind == K::NotClassification;
  return cls ? c.tolerance : param_double(c, "parabolic_tol", kDefaultParabolicTol);
}

CurvatureReport classify_target(const CheckSpec& c, int jobs, GridCounts fallback) {
  const ChartModel m = load_target(c.target);
  ClassifyOptions o;
  o.jobs = jobs;
  o.model_id = m.model_id;
  o.distribution = m.resolve_name(param_string(c, "distribution"));
  return classify(m.metric, m.distribution(o.distribution), m.chart, grid_or(c, fallback), classify_tol(c), o);
}

Json errors_json(const CurvatureReport& r) {
  return {{"points", r.points.size()}, {"errors", r.errors.size()}};
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Measurement op_classify(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {16, 16, 16});
  Measurement m;
  m.value = r.max_abs_extrinsic_curvature;
  m.classification = r.classification;
  m.details = aggregates_to_json(r);
  return m;
}

Measurement op_max_abs_ke(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {16, 16, 16});
  return {r.max_abs_extrinsic_curvature, r.classification, errors_json(r)};
}

Measurement op_frobenius_max(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {12, 12, 12});
  return {r.max_abs_frobenius_residual, std::nullopt, errors_json(r)};
}

Measurement op_frobenius_min(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {12, 12, 12});
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : r.points) lo = std::min(lo, std::fabs(p.frobenius_residual));
  return {r.points.empty() ? 0.0 : lo, std::nullopt, errors_json(r)};
}

Measurement op_cv_min_abs(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {12, 12, 12});
  return {r.min_abs_contact_volume, std::nullopt,
          {{"min", r.contact_volume.min}, {"max", r.contact_volume.max}}};
}

Measurement op_cv_max_abs(const CheckSpec& c, int jobs) {
  const CurvatureReport r = classify_target(c, jobs, {12, 12, 12});
  return {r.max_abs_contact_volume, std::nullopt,
          {{"min", r.contact_volume.min}, {"max", r.contact_volume.max}}};
}

Measurement op_integral_h(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target);
  QuadratureOptions q;
  q.jobs = jobs;
  q.assume_compact_support = c.params.value("assume_compact_support", false);
  const MeanCurvatureIntegral r =
      integral_mean_curvature(m.metric, m.distribution(param_string(c, "distribution")), m.chart,
                              grid_or(c, {64, 64, 64}), q);
  return {std::fabs(r.integral), std::nullopt,
          {{"integral", r.integral}, {"max_pointwise_defect", r.max_pointwise_defect}}};
}

Measurement op_h_defect(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target);
  QuadratureOptions q;
  q.jobs = jobs;
  q.assume_compact_support = true;
  const MeanCurvatureIntegral r = integral_mean_curvature(
      m.metric, m.distribution(param_string(c, "distribution")), m.chart, grid_or(c, {16, 16, 16}), q);
  return {r.max_pointwise_defect, std::nullopt, {{"integral", r.integral}}};
}

Measurement op_div_integral(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target);
  const VectorField& x = m.vector(param_string(c, "field", kPeriodicProbeField));
  QuadratureOptions q;
  q.jobs = jobs;
  const double v = integrate_scalar(
      m.chart, m.metric, [&](const Point& p) { return divergence(m.metric, x, p); }, grid_or(c, {64, 64, 64}), q);
  return {std::fabs(v), std::nullopt, {{"integral", v}}};
}

Measurement op_reeb_closed_form(const CheckSpec& c, int) {
  const ReebModel reeb = reeb_solid_torus();
  const int n = param_int(c, "samples", 200);
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double r = static_cast<double>(i) / n;
    const Point p{r, 0.7, 1.9};
    const Mat2 num =
        second_fundamental_form(reeb.model.metric, reeb.model.distribution("foliation"), p, reeb.model.frame("XY", p));
    const Mat2 ref = closed_form_B_reeb(r);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) worst = std::max(worst, std::fabs(num[a][b] - ref[a][b]));
  }
  return {worst, std::nullopt, {{"samples", n}}};
}

Measurement op_reeb_geodesic_regions(const CheckSpec& c, int) {
  const ReebModel reeb = reeb_solid_torus();
  const int n = param_int(c, "samples", 100);
  double worst = 0.0;
  for (const auto& [lo, hi] : {std::pair{0.01, 0.33}, std::pair{0.67, 1.0}})
    for (int i = 0; i <= n; ++i) {
      const Point p{lo + (hi - lo) * i / n, 0.4, 2.2};
      const Mat2 b = second_fundamental_form(reeb.model.metric, reeb.model.distribution(), p);
      worst = std::max({worst, std::fabs(b[0][0]), std::fabs(b[0][1]), std::fabs(b[1][1])});
    }
  return {worst, std::nullopt, {{"intervals", Json::array({Json::array({0.01, 0.33}), Json::array({0.67, 1.0})})}}};
}

Measurement op_collar_t_row(const CheckSpec& c, int jobs) {
  const ChartModel m = c.target.empty() ? collar_model(param_double(c, "epsilon", 0.1)) : load_target(c.target);
  ClassifyOptions o;
  o.jobs = jobs;
  const CurvatureReport r = classify(m.metric, m.distribution(), m.chart, grid_or(c, {41, 4, 4}),
                                     kDefaultParabolicTol, o);
  double worst = 0.0;
  for (const auto& p : r.points) worst = std::max({worst, std::fabs(p.b[1][0]), std::fabs(p.b[1][1])});
  return {worst, r.classification, {{"max_abs_det_b", r.max_abs_extrinsic_curvature}}};
}

Measurement op_product(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target.empty() ? "builtin:product" : c.target);
  ClassifyOptions o;
  o.jobs = jobs;
  const CurvatureReport r = classify(m.metric, m.distribution(), m.chart, grid_or(c, {12, 12, 6}),
                                     kDefaultParabolicTol, o);
  double worst = 0.0;
  for (const auto& p : r.points) worst = std::max({worst, std::fabs(p.b[0][0]), std::fabs(p.b[0][1]), std::fabs(p.b[1][1])});
  return {worst, r.classification, errors_json(r)};
}

SurfaceChart twist_annulus() {
  SurfaceChart sc;
  sc.names = {"s", "theta"};
  sc.domain = {Interval{1.1, 3.0}, Interval{0, 2 * std::numbers::pi}};
  sc.periodic = {false, true};
  return sc;
}

TwistSpec twist_params(const CheckSpec& c) {
  return TwistSpec{param_double(c, "a", 1.5), param_double(c, "b", 2.5), param_int(c, "k", 1)};
}

Measurement op_twist_roundtrip(const CheckSpec& c, int) {
  const SurfaceMetric g = SurfaceMetric::from_strings(twist_annulus(), {"2 + sin(theta)", "0.3*cos(theta)", "1.5 + 0.5*sin(s)"});
  const TwistSpec tw = twist_params(c);
  const SurfaceMetric h = dehn_twist_pullback(g, tw);
  const SurfaceMetric back = dehn_twist_pullback(h, TwistSpec{tw.a, tw.b, -tw.k});
  double roundtrip = 0.0, det_defect = 0.0;
  const int n = param_int(c, "samples", 40);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = 1.1 + 1.9 * i / n;
      const double th = 2 * std::numbers::pi * j / n;
      roundtrip = std::max(roundtrip, sym2_max_diff(back.value(s, th), g.value(s, th)));
      const double moved = th + 2 * std::numbers::pi * tw.k * smoothstep(tw.a, tw.b, s);
      det_defect = std::max(det_defect, std::fabs(sym2_det(h.value(s, th)) - sym2_det(g.value(s, moved))));
    }
  return {roundtrip, std::nullopt, {{"max_det_defect", det_defect}}};
}

SurfaceChart unit_square() {
  SurfaceChart sc;
  sc.domain = {Interval{0, 1}, Interval{0, 1}};
  sc.periodic = {true, true};
  return sc;
}

/// Seeded SPD pair on the periodic unit square agreeing outside a disk.
std::pair<SurfaceMetric, SurfaceMetric> random_spd_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  const auto num = [&](double lo, double hi) { return format_number(lo + (hi - lo) * u(rng)); };
  const std::string a = num(0.8, 1.2), b = num(-0.2, 0.2), d = num(0.8, 1.2);
  const std::array<std::string, 3> g{a + " + 0.2*sin(2*pi*u)", b, d + " + 0.2*cos(2*pi*v)"};
  const std::array<std::string, 3> k{num(2, 3), num(-0.5, 0.5), num(2, 3)};
  const std::string bump = "(1 - smoothstep(0.04, 0.16, (u - 0.5)^2 + (v - 0.5)^2))";
  std::array<std::string, 3> h;
  for (int i = 0; i < 3; ++i) h[i] = "(" + g[i] + ") + " + bump + "*(" + k[i] + " - (" + g[i] + "))";
  return {SurfaceMetric::from_strings(unit_square(), g), SurfaceMetric::from_strings(unit_square(), h)};
}

std::array<int, 3> path_grid(const CheckSpec& c) {
  const GridCounts g = grid_or(c, {17, 17, 17});
  return {g[0], g[1], g[2]};
}

Measurement op_path_rank_one(const CheckSpec& c, int jobs) {
  const int pairs = param_int(c, "pairs", 20);
  const auto seed0 = static_cast<std::uint64_t>(param_int(c, "seed", 1));
  double worst = 0.0, collars = 0.0;
  std::size_t crossings = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto [g, h] = random_spd_pair(seed0 + static_cast<std::uint64_t>(i));
    const MetricPathReport r = verify_metric_path(rank_one_path(g, h), path_grid(c), jobs);
    worst = std::max(worst, r.max_abs_det_dt);
    collars = std::max({collars, r.collar_start_residual, r.collar_end_residual});
    crossings += r.crossings_excluded;
  }
  return {worst, std::nullopt, {{"pairs", pairs}, {"max_collar_residual", collars}, {"crossings_excluded", crossings}}};
}

Measurement op_path_straight_line(const CheckSpec& c, int jobs) {
  const int pairs = param_int(c, "pairs", 20);
  const auto seed0 = static_cast<std::uint64_t>(param_int(c, "seed", 1));
  double weakest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const auto [g, h] = random_spd_pair(seed0 + static_cast<std::uint64_t>(i));
    weakest = std::min(weakest, verify_metric_path(MetricPath::straight_line(g, h), path_grid(c), jobs).max_abs_det_dt);
  }
  return {weakest, std::nullopt, {{"pairs", pairs}}};
}

Measurement op_path_twist(const CheckSpec& c, int jobs) {
  const SurfaceMetric flat = SurfaceMetric::identity(twist_annulus());
  const MetricPath path = rank_one_path(flat, dehn_twist_pullback(flat, twist_params(c)));
  const MetricPathReport r = verify_metric_path(path, path_grid(c), jobs);
  return {r.max_abs_det_dt,
          std::nullopt,
          {{"stages", r.stages},
           {"collar_start_residual", r.collar_start_residual},
           {"collar_end_residual", r.collar_end_residual},
           {"boundary_residual", r.boundary_residual},
           {"leafwise_residual", r.leafwise_residual},
           {"min_eigenvalue", r.min_eigenvalue},
           {"crossings_excluded", r.crossings_excluded}}};
}

OpenBookOptions open_book_options(const CheckSpec& c, int jobs) {
  OpenBookOptions o;
  o.jobs = jobs;
  o.classify_grid = grid_or(c, o.classify_grid);
  o.parabolic_tol = param_double(c, "parabolic_tol", kDefaultParabolicTol);
  // the mismatch bound is judged by the expectation, not by an exception
  o.mismatch_tol = std::numeric_limits<double>::infinity();
  return o;
}

Measurement op_open_book_mismatch(const CheckSpec& c, int jobs) {
  const AtlasReport r = assemble_open_book_demo(open_book_options(c, jobs));
  double worst = 0.0, tangency = 0.0;
  for (const auto& ov : r.overlaps) {
    worst = std::max(worst, ov.max_metric_mismatch);
    tangency = std::max(tangency, ov.max_leaf_tangency);
  }
  return {worst, std::nullopt, {{"max_leaf_tangency", tangency}, {"overlaps", r.overlaps.size()}}};
}

Measurement op_open_book_charts(const CheckSpec& c, int jobs) {
  OpenBookOptions o = open_book_options(c, jobs);
  o.parabolic_tol = classify_tol(c);
  const AtlasReport r = assemble_open_book_demo(o);
  Classification overall = Classification::Parabolic;
  double worst = 0.0;
  Json charts = Json::object();
  for (const auto& ch : r.charts) {
    charts[ch.name] = to_string(ch.classification);
    worst = std::max(worst, ch.max_abs_extrinsic_curvature);
    if (ch.classification != Classification::Parabolic && overall == Classification::Parabolic)
      overall = ch.classification;
  }
  return {worst, overall, {{"charts", charts}}};
}

Measurement op_transfer(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target.empty() ? "builtin:torus-flat" : c.target);
  const Distribution xi = m.distribution(param_string(c, "xi"));
  if (!c.params.contains("eta")) throw ConfigError("transfer_metric needs params.eta (a form)");
  const Distribution eta = Distribution::kernel(form_argument(m, param_string(c, "eta")));
  const TransferResult r = transfer_metric(m.metric, xi, eta, m.chart, grid_or(c, {6, 6, 6}), jobs);
  return {r.report.max_residual, std::nullopt, transfer_report_to_json(r.report, false)};
}

Measurement op_contact_scan(const CheckSpec& c, int jobs) {
  const ChartModel m = load_target(c.target);
  ScanReport r = contact_deformation_scan(m.metric, m.chart, form_argument(m, param_string(c, "alpha")),
                                                form_argument(m, param_string(c, "beta")),
                                                parse_s_range(param_string(c, "s_range", "0:1:5")),
                                                grid_or(c, {8, 8, 8}), jobs);
  r.model_id = m.model_id;
  r.alpha = param_string(c, "alpha");
  r.beta = param_string(c, "beta");
  // weakest contact volume among the s != 0 rows (0 if the sign changes)
  double weakest = std::numeric_limits<double>::infinity();
  for (const ScanRow& row : r.rows) {
    if (row.s == 0.0) continue;
    const bool one_sign = row.min_contact_volume > 0.0 || row.max_contact_volume < 0.0;
    weakest = std::min(weakest, one_sign ? std::min(std::fabs(row.min_contact_volume), std::fabs(row.max_contact_volume)) : 0.0);
  }
  if (!std::isfinite(weakest)) weakest = 0.0;
  return {weakest, std::nullopt, scan_report_to_json(r)};
}

const std::map<std::string, Operation>& operations() {
  static const std::map<std::string, Operation> ops{
      {"classify", op_classify},
      {"max_abs_extrinsic_curvature", op_max_abs_ke},
      {"frobenius_residual_max", op_frobenius_max},
      {"frobenius_residual_min_abs", op_frobenius_min},
      {"contact_volume_min_abs", op_cv_min_abs},
      {"contact_volume_max_abs", op_cv_max_abs},
      {"integral_mean_curvature", op_integral_h},
      {"mean_curvature_defect", op_h_defect},
      {"divergence_integral", op_div_integral},
      {"reeb_closed_form", op_reeb_closed_form},
      {"reeb_geodesic_regions", op_reeb_geodesic_regions},
      {"collar_t_row", op_collar_t_row},
      {"product_fibration", op_product},
      {"twist_roundtrip", op_twist_roundtrip},
      {"metric_path_rank_one", op_path_rank_one},
      {"metric_path_straight_line", op_path_straight_line},
      {"metric_path_twist", op_path_twist},
      {"open_book_mismatch", op_open_book_mismatch},
      {"open_book_charts", op_open_book_charts},
      {"transfer_metric", op_transfer},
      {"contact_scan", op_contact_scan},
  };
  return ops;
}

// ---------------------------------------------------------------------------
// Expectations
// ---------------------------------------------------------------------------

const std::map<std::string, Expectation::Kind>& expectation_kinds() {
  using K = Expectation::Kind;
  static const std::map<std::string, K> kinds{{"at_most", K::AtMost},
                                              {"at_least", K::AtLeast},
                                              {"equals", K::Equals},
                                              {"classification", K::Classification},
                                              {"not_classification", K::NotClassification},
                                              {"report", K::Report}};
  return kinds;
}

std::string kind_name(Expectation::Kind k) {
  for (const auto& [name, kind] : expectation_kinds())
    if (kind == k) return name;
  return "?";
}

bool judge(const Expectation& e, double tol, const Measurement& m) {
  using K = Expectation::Kind;
  switch (e.kind) {
    case K::AtMost:
      return m.value && *m.value <= tol;
    case K::AtLeast:
      return m.value && *m.value >= e.value;
    case K::Equals:
      return m.value && std::fabs(*m.value - e.value) <= tol;
    case K::Classification:
      return m.classification && to_string(*m.classification) == e.label;
    case K::NotClassification:
      return m.classification && to_string(*m.classification) != e.label;
    case K::Report:
      return true;
  }
  return false;
}

Json check_to_json(const CheckResult& r) {
  Json e{{"kind", kind_name(r.expectation.kind)}};
  using K = Expectation::Kind;
  if (r.expectation.kind == K::AtLeast || r.expectation.kind == K::Equals) e["value"] = r.expectation.value;
  if (r.expectation.kind == K::Classification || r.expectation.kind == K::NotClassification)
    e["value"] = r.expectation.label;
  Json j{{"name", r.name},
         {"operation", r.operation},
         {"target", r.target},
         {"passed", r.passed},
         {"tolerance", r.tolerance},
         {"expectation", e},
         {"measured", r.measured ? Json(*r.measured) : Json(nullptr)},
         {"details", r.details}};
  if (r.classification) j["classification"] = *r.classification;
  if (r.error_kind) j["error"] = {{"kind", *r.error_kind}, {"message", r.error_message}};
  return j;
}

}  // namespace

const std::vector<std::string>& suite_operations() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, op] : operations()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteSpec parse_suite(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("suite: top level must be an object");
  SuiteSpec s;
  s.suite = doc.value("suite", std::string{"unnamed"});
  const Json checks = doc.value("checks", Json::array());
  if (!checks.is_array()) throw ConfigError("suite: 'checks' must be an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& c = checks[i];
    const std::string where = "suite check #" + std::to_string(i + 1);
    if (!c.is_object()) throw ConfigError(where + " must be an object");
    CheckSpec spec;
    spec.name = c.value("name", "check-" + std::to_string(i + 1));
    spec.target = c.value("target", std::string{});
    spec.operation = c.value("operation", std::string{});
    if (operations().count(spec.operation) == 0)
      throw ConfigError(where + " ('" + spec.name + "'): unknown operation '" + spec.operation + "'");
    spec.params = c.value("params", Json::object());
    if (c.contains("grid")) {
      const Json& g = c["grid"];
      if (!g.is_array() || g.size() != 3) throw ConfigError(where + ": grid must be three counts");
      GridCounts counts;
      for (int k = 0; k < 3; ++k) {
        counts[k] = g[k].get<int>();
        if (counts[k] < 1) throw ConfigError(where + ": grid counts must be positive");
      }
      spec.grid = counts;
    }
    if (!c.contains("tolerance") || !c["tolerance"].is_number())
      throw ConfigError(where + " ('" + spec.name + "'): missing numeric tolerance");
    spec.tolerance = c["tolerance"].get<double>();
    if (!(spec.tolerance > 0.0))
      throw ConfigError(where + " ('" + spec.name + "'): tolerance must be positive");
    const Json e = c.value("expectation", Json{{"kind", "at_most"}});
    const std::string kind = e.value("kind", std::string{"at_most"});
    const auto it = expectation_kinds().find(kind);
    if (it == expectation_kinds().end()) throw ConfigError(where + ": unknown expectation kind '" + kind + "'");
    spec.expectation.kind = it->second;
    using K = Expectation::Kind;
    if (spec.expectation.kind == K::AtLeast || spec.expectation.kind == K::Equals) {
      if (!e.contains("value") || !e["value"].is_number()) throw ConfigError(where + ": expectation needs a numeric value");
      spec.expectation.value = e["value"].get<double>();
    }
    if (spec.expectation.kind == K::Classification || spec.expectation.kind == K::NotClassification) {
      if (!e.contains("value") || !e["value"].is_string())
        throw ConfigError(where + ": expectation needs a classification name");
      spec.expectation.label = to_string(classification_from_string(e["value"].get<std::string>()));
    }
    s.checks.push_back(std::move(spec));
  }
  return s;
}

SuiteSpec load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suite file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const Json::parse_error& e) {
    throw ConfigError("suite file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_suite(doc);
}

SuiteReport run_suite(const SuiteSpec& spec, const SuiteOptions& options) {
  SuiteReport report;
  report.suite = spec.suite;
  if (spec.checks.empty()) report.note = "no checks; the suite passes vacuously";
  for (const CheckSpec& c : spec.checks) {
    CheckResult r;
    r.name = c.name;
    r.operation = c.operation;
    r.target = c.target;
    r.tolerance = c.tolerance;
    r.expectation = c.expectation;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Measurement m = operations().at(c.operation)(c, options.jobs);
      r.measured = m.value;
      if (m.classification) r.classification = to_string(*m.classification);
      r.details = m.details;
      r.passed = judge(c.expectation, c.tolerance, m);
    } catch (const Error& e) {
      r.error_kind = e.kind();
      r.error_message = e.what();
    } catch (const std::exception& e) {
      r.error_kind = "InternalError";
      r.error_message = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.passed = report.passed && r.passed;
    report.checks.push_back(std::move(r));
  }
  return report;
}

Json suite_report_to_json(const SuiteReport& report, bool include_timings) {
  Json checks = Json::array();
  std::size_t failed = 0;
  for (const auto& c : report.checks) {
    checks.push_back(check_to_json(c));
    if (!c.passed) ++failed;
  }
  Json j{{"schema", "planefield.suite_report/1"},
         {"suite", report.suite},
         {"passed", report.passed},
         {"total", report.checks.size()},
         {"failed", failed},
         {"checks", checks}};
  if (!report.note.empty()) j["note"] = report.note;
  if (include_timings) {
    Json t = Json::object();
    for (const auto& c : report.checks) t[c.name] = c.seconds;
    j["timings"] = t;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Built-in suites
// ---------------------------------------------------------------------------

namespace {

Json check(const std::string& name, const std::string& target, const std::string& op, double tol,
           Json expectation = Json{{"kind", "at_most"}}, Json params = Json::object(), Json grid = nullptr) {
  Json c{{"name", name}, {"target", target}, {"operation", op}, {"tolerance", tol},
         {"expectation", std::move(expectation)}, {"params", std::move(params)}};
  if (!grid.is_null()) c["grid"] = std::move(grid);
  return c;
}

Json cls(const std::string& label) { return {{"kind", "classification"}, {"value", label}}; }

const std::map<std::string, std::function<Json()>>& suite_table() {
  static const std::map<std::string, std::function<Json()>> table{
      {"reeb-parabolic",
       [] {
         return Json::array({
             check("reeb classifies parabolic", "builtin:reeb", "classify", 1e-8, cls("parabolic"), Json::object(),
                   {64, 16, 16}),
             check("reeb max |K_e|", "builtin:reeb", "max_abs_extrinsic_curvature", 1e-8, Json{{"kind", "at_most"}},
                   Json::object(), {64, 16, 16}),
             check("reeb closed form", "", "reeb_closed_form", 1e-9),
             check("reeb totally geodesic regions", "", "reeb_geodesic_regions", 1e-10),
             check("reeb foliation integrable", "builtin:reeb", "frobenius_residual_max", 1e-10),
             check("collar t-row of B", "builtin:collar", "collar_t_row", 1e-10),
             check("collar classifies parabolic", "builtin:collar", "classify", 1e-8, cls("parabolic")),
         });
       }},
      {"metric-path-interface",
       [] {
         return Json::array({
             check("straight line is not parabolic", "", "metric_path_straight_line", 1.0,
                   Json{{"kind", "at_least"}, {"value", 1e-3}}),
             check("rank-one paths are parabolic", "", "metric_path_rank_one", 1e-8),
             check("rank-one path to a twisted metric", "", "metric_path_twist", 1e-8),
             check("twist round trip", "", "twist_roundtrip", 1e-9),
         });
       }},
      {"open-book-assembly",
       [] {
         return Json::array({
             check("overlap metric mismatch", "", "open_book_mismatch", 1e-9),
             check("every chart parabolic", "", "open_book_charts", 1e-8, cls("parabolic")),
         });
       }},
      {"fibration-product",
       [] {
         return Json::array({
             check("product leaves totally geodesic", "builtin:product", "product_fibration", 1e-12),
             check("product classifies parabolic", "builtin:product", "classify", 1e-8, cls("parabolic")),
         });
       }},
      {"mean-curvature-divergence",
       [] {
         Json out = Json::array();
         for (const char* m : {"torus-graph", "torus-graph2", "torus-contact"}) {
           out.push_back(check(std::string(m) + " |integral H|", std::string("builtin:") + m, "integral_mean_curvature",
                               1e-6));
           out.push_back(check(std::string(m) + " H + div n", std::string("builtin:") + m, "mean_curvature_defect", 1e-9));
         }
         out.push_back(check("periodic divergence integral", "builtin:torus-flat", "divergence_integral", 1e-10));
         return out;
       }},
      {"no-elliptic",
       [] {
         Json out = Json::array();
         for (const auto& m : shipped_periodic_examples())
           out.push_back(check(m + " is not elliptic", "builtin:" + m, "classify", 1e-8,
                               Json{{"kind", "not_classification"}, {"value", "elliptic"}}));
         out.push_back(check("round spheres are elliptic", "builtin:spheres", "classify", 1e-8, cls("elliptic")));
         return out;
       }},
      {"metric-transfer",
       [] {
         return Json::array({
             check("tilted plane field on the flat torus", "builtin:torus-flat", "transfer_metric", 1.0,
                   Json{{"kind", "report"}}, Json{{"eta", "tilted"}}),
         });
       }},
      {"contact-scan",
       [] {
         return Json::array({
             check("standard contact volume", "builtin:standard-contact", "contact_volume_min_abs", 1e-12,
                   Json{{"kind", "equals"}, {"value", 2.0}}),
             check("standard contact is not integrable", "builtin:standard-contact", "frobenius_residual_min_abs", 1.0,
                   Json{{"kind", "at_least"}, {"value", 0.4}}),
             check("helical deformation of the flat foliation", "builtin:torus-flat", "contact_scan", 1.0,
                   Json{{"kind", "at_least"}, {"value", 1e-6}},
                   Json{{"alpha", "dz"}, {"beta", "cos(2*pi*z),sin(2*pi*z),0"}, {"s_range", "-0.5:0.5:5"}}, {4, 4, 8}),
         });
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_suite_names() {
  static const std::vector<std::string> names{"reeb-parabolic",       "metric-path-interface",
                                              "open-book-assembly",   "fibration-product",
                                              "mean-curvature-divergence", "no-elliptic",
                                              "metric-transfer",      "contact-scan"};
  return names;
}

Json builtin_suite_json(const std::string& name) {
  const auto it = suite_table().find(name);
  if (it == suite_table().end()) throw ConfigError("unknown builtin suite '" + name + "'");
  return {{"suite", name}, {"checks", it->second()}};
}

SuiteSpec builtin_suite(const std::string& name) { return parse_suite(builtin_suite_json(name)); }

}  // namespace planefield
