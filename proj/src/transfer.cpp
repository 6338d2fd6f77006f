#include "planefield/transfer.hpp"

#include <cmath>
#include <optional>

#include "planefield/parallel.hpp"

namespace planefield {

namespace {

using JV = JetVec3;

JV scale(const Jet1& c, const JV& v) { return {c * v[0], c * v[1], c * v[2]}; }
JV minus(const JV& a, const JV& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

constexpr double kMinTransversality = 1e-8;

struct TransferFrame {
  JV x1, x2, n, px1, px2;
  double transversality = 0.0;
};

TransferFrame build_frame(const JetMat3& g, const Distribution& xi, const Distribution& eta, const Point& p) {
  TransferFrame f;
  f.n = normal_jets(g, xi, p);
  const FrameJets base = tangent_frame_jets(xi, p);
  f.x1 = scale(1.0 / sqrt(la::inner(g, base.s, base.s)), base.s);
  const JV t = minus(base.t, scale(la::inner(g, base.t, f.x1), f.x1));
  f.x2 = scale(1.0 / sqrt(la::inner(g, t, t)), t);
  const JV m = normal_jets(g, eta, p);
  f.transversality = std::fabs(la::inner(g, f.n, m).value);
  if (f.transversality < kMinTransversality) throw NotTransverse(p, std::asin(f.transversality));
  f.px1 = minus(f.x1, scale(la::inner(g, f.x1, m), m));
  f.px2 = minus(f.x2, scale(la::inner(g, f.x2, m), m));
  return f;
}

/// g~ at p with partials in the chart coordinates.
JetMat3 transferred_at(const MetricField& g, const Distribution& xi, const Distribution& eta, const Point& p) {
  const TransferFrame f = build_frame(metric_jet(g, p), xi, eta, p);
  JetMat3 frame;
  for (int i = 0; i < 3; ++i) {
    frame[i][0] = f.px1[i];
    frame[i][1] = f.px2[i];
    frame[i][2] = f.n[i];
  }
  const JetMat3 inv = la::inverse(frame);
  JetMat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = inv[0][i] * inv[0][j] + inv[1][i] * inv[1][j] + inv[2][i] * inv[2][j];
  return out;
}

Jet1 compose(const Jet1& inner, const JV& x) {
  Jet1 out(inner.value);
  for (int k = 0; k < 3; ++k)
    for (int s = 0; s < 3; ++s) out.grad[k] += inner.grad[s] * x[s].grad[k];
  return out;
}

}  // namespace

MetricField transfer_metric_field(const MetricField& g, const Distribution& xi, const Distribution& eta) {
  return MetricField::from_function([g, xi, eta](const JV& x) {
    const JetMat3 at = transferred_at(g, xi, eta, la::values(x));
    JetMat3 out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[i][j] = compose(at[i][j], x);
    return out;
  });
}

TransferResult transfer_metric(const MetricField& g, const Distribution& xi, const Distribution& eta,
                               const Chart& chart, const GridCounts& grid, int jobs) {
  const MetricField tilde = transfer_metric_field(g, xi, eta);
  TransferReport r;
  r.grid = grid;
  r.box = chart.sample_box();
  const std::vector<Point> pts = lattice_points(chart, r.box, grid);
  r.points.resize(pts.size());
  std::vector<std::optional<NotTransverse>> failures(pts.size());

  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    const Point& p = pts[i];
    try {
      const MetricSample ms = metric_at(g, p);
      const TransferFrame f = build_frame(metric_jet(g, p), xi, eta, p);
      const PointCurvature before = curvature_with_frame(ms, FrameJets{f.x1, f.x2}, f.n);
      const PointCurvature after = curvature_with_frame(metric_at(tilde, p), FrameJets{f.px1, f.px2}, f.n);
      TransferPoint tp;
      tp.p = p;
      tp.transversality = f.transversality;
      tp.det_b_tilde = la::det(after.b);
      tp.extrinsic_curvature_tilde = after.extrinsic_curvature;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) tp.residual = std::max(tp.residual, std::fabs(after.b[a][b] - before.b[a][b]));
      r.points[i] = tp;
    } catch (const NotTransverse& e) {
      failures[i] = e;
    }
  });
  for (const auto& f : failures)
    if (f) throw *f;

  r.min_transversality = r.points.empty() ? 0.0 : 1.0;
  for (const TransferPoint& tp : r.points) {
    r.max_abs_det_b_tilde = std::max(r.max_abs_det_b_tilde, std::fabs(tp.det_b_tilde));
    r.max_abs_extrinsic_curvature_tilde =
        std::max(r.max_abs_extrinsic_curvature_tilde, std::fabs(tp.extrinsic_curvature_tilde));
    r.max_residual = std::max(r.max_residual, tp.residual);
    r.min_transversality = std::min(r.min_transversality, tp.transversality);
  }
  return TransferResult{tilde, std::move(r)};
}

Json transfer_report_to_json(const TransferReport& r, bool include_points) {
  Json j{{"schema", "planefield.transfer_report/1"},
         {"grid", Json::array({r.grid[0], r.grid[1], r.grid[2]})},
         {"box", interval_box_to_json(r.box)},
         {"samples", r.points.size()},
         {"max_abs_det_b_tilde", r.max_abs_det_b_tilde},
         {"max_abs_extrinsic_curvature_tilde", r.max_abs_extrinsic_curvature_tilde},
         {"max_residual", r.max_residual},
         {"min_transversality", r.min_transversality}};
  if (include_points) {
    Json pts = Json::array();
    for (const auto& tp : r.points)
      pts.push_back({{"p", point_to_json(tp.p)},
                     {"transversality", tp.transversality},
                     {"det_b_tilde", tp.det_b_tilde},
                     {"extrinsic_curvature_tilde", tp.extrinsic_curvature_tilde},
                     {"residual", tp.residual}});
    j["points"] = pts;
  }
  return j;
}

}  // namespace planefield
