#include "planefield/metric_path.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "planefield/parallel.hpp"

namespace planefield {

namespace {

Sym2 values(const Sym2Jet& s) { return {s[0].value, s[1].value, s[2].value}; }

Sym2Jet operator+(const Sym2Jet& a, const Sym2Jet& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Sym2Jet operator-(const Sym2Jet& a, const Sym2Jet& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Sym2Jet operator*(const Jet1& c, const Sym2Jet& a) { return {c * a[0], c * a[1], c * a[2]}; }

double min_eigenvalue(const Sym2& g) {
  const double m = 0.5 * (g[0] + g[2]);
  const double d = 0.5 * (g[0] - g[2]);
  return m - std::hypot(d, g[1]);
}

/// Spectral split of a symmetric 2x2 field into two rank-one parts.
struct Split {
  Sym2Jet c1;
  Sym2Jet c2;
  bool crossing = false;
};

Split spectral_split(const Sym2Jet& d, double gap) {
  const Jet1 m = 0.5 * (d[0] + d[2]);
  const Jet1 half = 0.5 * (d[0] - d[2]);
  const double h = std::hypot(half.value, d[1].value);
  const double scale = std::fabs(m.value) + h;
  if (scale == 0.0) return {d, Sym2Jet{}, false};
  if (h < gap * scale) {
    // Nearly isotropic: no preferred eigenvector. The split keeps C1 + C2 = D.
    return {Sym2Jet{d[0], d[1], Jet1(0.0)}, Sym2Jet{Jet1(0.0), Jet1(0.0), d[2]}, true};
  }
  const Jet1 hj = sqrt(half * half + d[1] * d[1]);
  const Jet1 mu1 = m + hj;
  const Jet1 mu2 = m - hj;
  const Jet1 inv = 1.0 / (2.0 * hj);
  // mu1 (D - mu2 I) / (mu1 - mu2) and mu2 (mu1 I - D) / (mu1 - mu2)
  const Sym2Jet c1{mu1 * (d[0] - mu2) * inv, mu1 * d[1] * inv, mu1 * (d[2] - mu2) * inv};
  const Sym2Jet c2{mu2 * (mu1 - d[0]) * inv, -1.0 * mu2 * d[1] * inv, mu2 * (mu1 - d[2]) * inv};
  return {c1, c2, false};
}

std::vector<double> axis_nodes(const Interval& iv, int n, bool periodic) {
  std::vector<double> out;
  if (n <= 1) return {0.5 * (iv.lo + iv.hi)};
  for (int i = 0; i < n; ++i)
    out.push_back(periodic ? iv.lo + iv.width() * i / n : iv.lo + iv.width() * i / (n - 1));
  return out;
}

}  // namespace

MetricPath MetricPath::straight_line(const SurfaceMetric& g, const SurfaceMetric& h) {
  auto fn = [g, h](const JetVec3& x) {
    const Sym2Jet a = g.at(x);
    const Sym2Jet b = h.at(x);
    return a + x[2] * (b - a);
  };
  return MetricPath(g.chart(), fn, 0.0, 0.0, 0.0);
}

MetricPath MetricPath::constant(const SurfaceMetric& g, double delta0, double delta1) {
  return MetricPath(g.chart(), [g](const JetVec3& x) { return g.at(x); }, delta0, delta1, 0.0);
}

MetricPath rank_one_path(const SurfaceMetric& g, const SurfaceMetric& h, const RankOnePathOptions& opt) {
  if (!(opt.delta0 >= 0 && opt.delta1 >= 0 && opt.delta0 + opt.delta1 < 1))
    throw ConfigError("rank_one_path: collar margins must satisfy delta0 + delta1 < 1");
  const SurfaceChart& chart = g.chart();
  const double gap = opt.crossing_gap;

  const auto us = axis_nodes(chart.domain[0], opt.validation_grid[0], chart.periodic[0]);
  const auto vs = axis_nodes(chart.domain[1], opt.validation_grid[1], chart.periodic[1]);

  struct Node {
    double u, v;
    Sym2 g, c1, c2;
  };
  std::vector<Node> nodes;
  std::vector<std::array<double, 2>> crossings;
  double size1 = 0.0, size2 = 0.0;
  for (double u : us)
    for (double v : vs) {
      const JetVec3 x = seed({u, v, 0.0});
      const Sym2Jet gj = g.at(x);
      const Split s = spectral_split(h.at(x) - gj, gap);
      if (s.crossing) crossings.push_back({u, v});
      nodes.push_back({u, v, values(gj), values(s.c1), values(s.c2)});
      for (int i = 0; i < 3; ++i) {
        size1 = std::max(size1, std::fabs(s.c1[i].value));
        size2 = std::max(size2, std::fabs(s.c2[i].value));
      }
    }

  std::vector<int> comps;
  if (size1 > 0.0) comps.push_back(0);
  if (size2 > 0.0) comps.push_back(1);

  const double t0 = opt.delta0;
  const double span = 1.0 - opt.delta0 - opt.delta1;
  int depth = 0;
  if (!comps.empty()) {
    for (;; ++depth) {
      const int rounds = 1 << depth;
      const int windows = rounds * static_cast<int>(comps.size());
      bool ok = true;
      double fail_t = 0, fail_u = 0, fail_v = 0;
      for (const Node& n : nodes) {
        Sym2 acc = n.g;
        for (int w = 0; w < windows && ok; ++w) {
          const Sym2& c = comps[static_cast<std::size_t>(w) % comps.size()] == 0 ? n.c1 : n.c2;
          for (int i = 0; i < 3; ++i) acc[i] += c[i] / rounds;
          if (!(acc[0] > 0.0 && sym2_det(acc) > 0.0)) {
            ok = false;
            fail_t = t0 + span * (w + 1) / windows;
            fail_u = n.u;
            fail_v = n.v;
          }
        }
        if (!ok) break;
      }
      if (ok) break;
      if (depth >= opt.max_depth) throw NonSPDPath(fail_t, fail_u, fail_v, depth);
    }
  }

  const int rounds = 1 << depth;
  const int windows = rounds * static_cast<int>(comps.size());
  auto fn = [g, h, comps, rounds, windows, t0, span, gap](const JetVec3& x) {
    const Sym2Jet gj = g.at(x);
    if (windows == 0) return gj;
    const Split s = spectral_split(h.at(x) - gj, gap);
    Jet1 weight[2]{Jet1(0.0), Jet1(0.0)};
    for (int w = 0; w < windows; ++w) {
      const double a = t0 + span * w / windows;
      const double b = t0 + span * (w + 1) / windows;
      weight[comps[static_cast<std::size_t>(w) % comps.size()]] += smoothstep(Jet1(a), Jet1(b), x[2]);
    }
    const double inv = 1.0 / rounds;
    return gj + (inv * weight[0]) * s.c1 + (inv * weight[1]) * s.c2;
  };
  auto crossing_fn = [g, h, gap](double u, double v) {
    const JetVec3 x = seed({u, v, 0.0});
    return spectral_split(h.at(x) - g.at(x), gap).crossing;
  };
  MetricPath path(chart, fn, opt.delta0, opt.delta1, opt.boundary_margin, crossing_fn);
  path.set_construction(windows, depth, std::move(crossings));
  return path;
}

MetricField path_metric_3d(const MetricPath& path, double time_scale) {
  return MetricField::from_function([path, time_scale](const JetVec3& x) {
    const Sym2Jet s = path.at({x[0], x[1], x[2] / time_scale});
    return JetMat3{{{s[0], s[1], Jet1(0.0)}, {s[1], s[2], Jet1(0.0)}, {Jet1(0.0), Jet1(0.0), Jet1(1.0)}}};
  });
}

MetricPathReport verify_metric_path(const MetricPath& path, const std::array<int, 3>& grid, int jobs) {
  for (int n : grid)
    if (n < 2) throw ConfigError("verify_metric_path needs at least 2 samples per axis");
  const SurfaceChart& chart = path.chart();
  const auto us = axis_nodes(chart.domain[0], grid[0], chart.periodic[0]);
  const auto vs = axis_nodes(chart.domain[1], grid[1], chart.periodic[1]);
  const MetricField g3 = path_metric_3d(path);
  const Distribution leaves = Distribution::kernel(OneFormField::from_function(
      [](const JetVec3&) { return JetVec3{Jet1(0.0), Jet1(0.0), Jet1(1.0)}; }));

  const auto in_band = [&](double u, double v) {
    const double m = path.boundary_margin();
    if (m <= 0) return false;
    const std::array<double, 2> c{u, v};
    for (int k = 0; k < 2; ++k) {
      if (chart.periodic[k]) continue;
      if (c[k] - chart.domain[k].lo < m || chart.domain[k].hi - c[k] < m) return true;
    }
    return false;
  };

  struct Column {
    double det = 0, start = 0, end = 0, band = 0, leaf = 0, min_eig = 0;
    bool crossing = false;
    std::optional<Point> not_spd;
    int minor = 0;
  };
  std::vector<Column> cols(us.size() * vs.size());
  parallel_for(cols.size(), jobs, [&](std::size_t idx) {
    const double u = us[idx / vs.size()];
    const double v = vs[idx % vs.size()];
    Column c;
    c.crossing = path.crossing(u, v);
    c.min_eig = std::numeric_limits<double>::infinity();
    const Sym2 first = values(path.at(u, v, 0.0));
    const Sym2 last = values(path.at(u, v, 1.0));
    const bool band = in_band(u, v);
    for (int k = 0; k < grid[2]; ++k) {
      const double t = static_cast<double>(k) / (grid[2] - 1);
      const Sym2Jet j = path.at(u, v, t);
      const Sym2 val = values(j);
      const Sym2 dt{j[0].d(2), j[1].d(2), j[2].d(2)};
      const double eig = min_eigenvalue(val);
      c.min_eig = std::min(c.min_eig, eig);
      if (!(eig > 0.0)) {
        c.not_spd = Point{u, v, t};
        c.minor = val[0] > 0.0 ? 2 : 1;
        break;
      }
      if (!c.crossing) c.det = std::max(c.det, std::fabs(sym2_det(dt)));
      if (t <= path.delta0()) c.start = std::max(c.start, sym2_max_diff(val, first));
      if (t >= 1.0 - path.delta1()) c.end = std::max(c.end, sym2_max_diff(val, last));
      if (band) c.band = std::max(c.band, std::max({std::fabs(dt[0]), std::fabs(dt[1]), std::fabs(dt[2])}));
      const Mat2 b = second_fundamental_form(g3, leaves, {u, v, t});
      c.leaf = std::max({c.leaf, std::fabs(b[0][0] + 0.5 * dt[0]), std::fabs(b[0][1] + 0.5 * dt[1]),
                         std::fabs(b[1][1] + 0.5 * dt[2])});
    }
    cols[idx] = c;
  });

  MetricPathReport r;
  r.grid = grid;
  r.stages = path.stages();
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const Column& c : cols) {
    if (c.not_spd) throw NotSPD(*c.not_spd, c.minor);
    r.max_abs_det_dt = std::max(r.max_abs_det_dt, c.det);
    r.collar_start_residual = std::max(r.collar_start_residual, c.start);
    r.collar_end_residual = std::max(r.collar_end_residual, c.end);
    r.boundary_residual = std::max(r.boundary_residual, c.band);
    r.leafwise_residual = std::max(r.leafwise_residual, c.leaf);
    r.min_eigenvalue = std::min(r.min_eigenvalue, c.min_eig);
    if (c.crossing) ++r.crossings_excluded;
  }
  r.samples = cols.size() * static_cast<std::size_t>(grid[2]);
  return r;
}

}  // namespace planefield
