#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "planefield/distributions.hpp"
#include "planefield/parallel.hpp"
#include "planefield/report_io.hpp"

namespace planefield {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Elliptic: return "elliptic";
    case Classification::Parabolic: return "parabolic";
    case Classification::Hyperbolic: return "hyperbolic";
    case Classification::Mixed: return "mixed";
    case Classification::Empty: return "empty";
  }
  return "empty";
}

Classification classification_from_string(const std::string& s) {
  for (auto c : {Classification::Elliptic, Classification::Parabolic, Classification::Hyperbolic,
                 Classification::Mixed, Classification::Empty})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown classification '" + s + "'");
}

Classification classify_range(double min_ke, double max_ke, double tol) {
  if (std::fmax(std::fabs(min_ke), std::fabs(max_ke)) <= tol) return Classification::Parabolic;
  if (max_ke <= -tol) return Classification::Hyperbolic;
  if (min_ke >= tol) return Classification::Elliptic;
  return Classification::Mixed;
}

namespace {

Aggregate aggregate(const std::vector<double>& v) {
  Aggregate a;
  if (v.empty()) return a;
  a.min = *std::min_element(v.begin(), v.end());
  a.max = *std::max_element(v.begin(), v.end());
  a.mean = pairwise_sum(v) / static_cast<double>(v.size());
  return a;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

}  // namespace

void finalize_report(CurvatureReport& r) {
  const std::size_t n = r.points.size();
  std::vector<double> h(n), ke(n), fr(n), cv(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = r.points[i].mean_curvature;
    ke[i] = r.points[i].extrinsic_curvature;
    fr[i] = r.points[i].frobenius_residual;
    cv[i] = r.points[i].contact_volume;
  }
  r.mean_curvature = aggregate(h);
  r.extrinsic_curvature = aggregate(ke);
  r.frobenius_residual = aggregate(fr);
  r.contact_volume = aggregate(cv);
  r.max_abs_extrinsic_curvature = max_abs(ke);
  r.max_abs_frobenius_residual = max_abs(fr);
  r.max_abs_contact_volume = max_abs(cv);
  r.min_abs_contact_volume = 0.0;
  if (n) {
    r.min_abs_contact_volume = std::fabs(cv[0]);
    for (double x : cv) r.min_abs_contact_volume = std::fmin(r.min_abs_contact_volume, std::fabs(x));
  }
  r.classification = n ? classify_range(r.extrinsic_curvature.min, r.extrinsic_curvature.max, r.tol)
                       : Classification::Empty;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(ke[a]) > std::fabs(ke[b]);
  });
  order.resize(std::min<std::size_t>(n, 10));
  r.worst_points = std::move(order);
}

CurvatureReport classify(const MetricField& g, const Distribution& xi, const Chart& chart,
                         const GridCounts& grid, double tol, const ClassifyOptions& options) {
  if (!(tol > 0.0)) throw ConfigError("classification tolerance must be > 0");
  CurvatureReport r;
  r.model_id = options.model_id;
  r.distribution = options.distribution;
  r.grid = grid;
  r.box = options.box ? *options.box : chart.sample_box();
  r.tol = tol;

  const auto pts = lattice_points(chart, r.box, grid);
  std::vector<std::optional<PointCurvature>> slots(pts.size());
  std::vector<std::optional<PointError>> failures(pts.size());
  parallel_for(pts.size(), options.jobs, [&](std::size_t i) {
    try {
      slots[i] = curvature_at(g, xi, pts[i]);
    } catch (const Error& e) {
      failures[i] = PointError{pts[i], e.kind(), e.what()};
    }
  });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (slots[i]) r.points.push_back(*slots[i]);
    if (failures[i]) r.errors.push_back(*failures[i]);
  }
  finalize_report(r);
  return r;
}

MeanCurvatureIntegral integral_mean_curvature(const MetricField& g, const Distribution& xi,
                                              const Chart& chart, const GridCounts& grid,
                                              const QuadratureOptions& options) {
  if (!chart.all_periodic() && !options.assume_compact_support)
    throw ConfigError("mean curvature integral needs a fully periodic (closed) chart");
  const auto pts = midpoints(chart.domain(), grid);
  for (const auto& p : pts)
    if (const auto* l = chart.singular_at(p)) throw SingularSample(p, chart.names()[l->coordinate]);

  std::vector<double> h(pts.size()), defect(pts.size());
  parallel_for(pts.size(), options.jobs, [&](std::size_t i) {
    const PointCurvature c = curvature_at(g, xi, pts[i]);
    const double vol = std::sqrt(la::det(la::values(g.jet(pts[i]))));
    h[i] = c.mean_curvature * vol;
    defect[i] = std::fabs(c.mean_curvature + c.normal_divergence);
  });
  double cell = 1.0;
  for (int k = 0; k < 3; ++k) cell *= chart.domain()[k].width() / grid[k];
  MeanCurvatureIntegral out;
  out.integral = cell * pairwise_sum(h);
  for (double d : defect) out.max_pointwise_defect = std::fmax(out.max_pointwise_defect, d);
  return out;
}

bool elliptic_obstruction_violated(const CurvatureReport& report, const Chart& chart) {
  return chart.all_periodic() && report.classification == Classification::Elliptic;
}

// --- serialization ---------------------------------------------------------

Json point_to_json(const Point& p) { return Json::array({p[0], p[1], p[2]}); }

Json interval_box_to_json(const std::array<Interval, 3>& box) {
  Json out = Json::array();
  for (const auto& iv : box) out.push_back(Json::array({iv.lo, iv.hi}));
  return out;
}

namespace {

Json aggregate_json(const Aggregate& a) { return {{"min", a.min}, {"max", a.max}, {"mean", a.mean}}; }

Json mat2_json(const Mat2& m) {
  return Json::array({Json::array({m[0][0], m[0][1]}), Json::array({m[1][0], m[1][1]})});
}

Json point_record(const PointCurvature& c) {
  return {{"p", point_to_json(c.p)},
          {"frame", Json::array({point_to_json(c.frame_s), point_to_json(c.frame_t)})},
          {"normal", point_to_json(c.normal)},
          {"B", mat2_json(c.b)},
          {"gram", mat2_json(c.gram)},
          {"H", c.mean_curvature},
          {"K_e", c.extrinsic_curvature},
          {"frobenius_residual", c.frobenius_residual},
          {"contact_volume", c.contact_volume}};
}

}  // namespace

Json aggregates_to_json(const CurvatureReport& r) {
  return {{"H", aggregate_json(r.mean_curvature)},
          {"K_e", aggregate_json(r.extrinsic_curvature)},
          {"frobenius_residual", aggregate_json(r.frobenius_residual)},
          {"contact_volume", aggregate_json(r.contact_volume)},
          {"max_abs_K_e", r.max_abs_extrinsic_curvature},
          {"max_abs_frobenius_residual", r.max_abs_frobenius_residual},
          {"max_abs_contact_volume", r.max_abs_contact_volume},
          {"min_abs_contact_volume", r.min_abs_contact_volume},
          {"valid_points", r.points.size()},
          {"invalid_points", r.errors.size()}};
}

Json report_to_json(const CurvatureReport& r, bool include_points) {
  Json worst = Json::array();
  for (std::size_t i : r.worst_points) {
    const auto& c = r.points[i];
    worst.push_back({{"p", point_to_json(c.p)}, {"K_e", c.extrinsic_curvature}, {"H", c.mean_curvature}});
  }
  Json errors = Json::array();
  for (const auto& e : r.errors)
    errors.push_back({{"p", point_to_json(e.p)}, {"kind", e.kind}, {"message", e.message}});
  Json out = {{"schema", "planefield.curvature_report/1"},
              {"model", r.model_id},
              {"distribution", r.distribution},
              {"grid", Json::array({r.grid[0], r.grid[1], r.grid[2]})},
              {"box", interval_box_to_json(r.box)},
              {"tol", r.tol},
              {"aggregates", aggregates_to_json(r)},
              {"classification", to_string(r.classification)},
              {"worst_points", worst},
              {"errors", errors}};
  if (include_points) {
    Json pts = Json::array();
    for (const auto& c : r.points) pts.push_back(point_record(c));
    out["points"] = std::move(pts);
  }
  return out;
}

std::string report_to_csv(const CurvatureReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "x0,x1,x2,B11,B12,B22,gram11,gram12,gram22,H,K_e,frobenius_residual,contact_volume\n";
  for (const auto& c : r.points) {
    os << c.p[0] << ',' << c.p[1] << ',' << c.p[2] << ',' << c.b[0][0] << ',' << c.b[0][1] << ','
       << c.b[1][1] << ',' << c.gram[0][0] << ',' << c.gram[0][1] << ',' << c.gram[1][1] << ','
       << c.mean_curvature << ',' << c.extrinsic_curvature << ',' << c.frobenius_residual << ','
       << c.contact_volume << '\n';
  }
  return os.str();
}

}  // namespace planefield
