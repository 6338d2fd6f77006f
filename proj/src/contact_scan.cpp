#include "planefield/contact_scan.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "planefield/parallel.hpp"

namespace planefield {

namespace {

double parse_double(std::string_view s, const std::string& whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("--s-range '" + whole + "': '" + std::string(s) + "' is not a number");
  return v;
}

}  // namespace

std::vector<double> parse_s_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
    throw ConfigError("--s-range must look like a:b:n, got '" + text + "'");
  const std::string_view t(text);
  const double a = parse_double(t.substr(0, c1), text);
  const double b = parse_double(t.substr(c1 + 1, c2 - c1 - 1), text);
  const double nd = parse_double(t.substr(c2 + 1), text);
  const int n = static_cast<int>(nd);
  if (n < 1 || static_cast<double>(n) != nd) throw ConfigError("--s-range count must be a positive integer");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

ScanReport contact_deformation_scan(const MetricField& g, const Chart& chart, const OneFormField& alpha0,
                                    const OneFormField& beta, const std::vector<double>& s_values,
                                    const GridCounts& grid, int jobs) {
  ScanReport r;
  r.grid = grid;
  r.box = chart.sample_box();
  const std::vector<Point> pts = lattice_points(chart, r.box, grid);
  const Distribution xi0 = Distribution::kernel(alpha0);

  struct Base {
    Mat3 ginv;
    Vec3 n0;
    JetVec3 a0, b;
  };
  std::vector<Base> base(pts.size());
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    const MetricSample m = metric_at(g, pts[i]);
    base[i] = Base{m.inverse, normal_field(g, xi0, pts[i]), alpha0.jet(pts[i]), beta.jet(pts[i])};
  });

  for (double s : s_values) {
    struct Sample {
      double cv = 0.0, normal = 0.0, tilt = 0.0;
      bool degenerate = false;
    };
    std::vector<Sample> samples(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t i) {
      const Base& b = base[i];
      JetVec3 a;
      for (int k = 0; k < 3; ++k) a[k] = b.a0[k] + s * b.b[k];
      const Vec3 av = la::values(a);
      Sample out;
      out.cv = wedge3(av, exterior_derivative(a));
      const double norm2 = la::inner(b.ginv, av, av);
      if (!(norm2 > 1e-24)) {
        out.degenerate = true;
      } else {
        const double norm = std::sqrt(norm2);
        out.normal = std::asin(std::min(1.0, std::fabs(la::dot(av, b.n0)) / norm));
        const Vec3 a0 = la::values(b.a0);
        const double a0a0 = la::inner(b.ginv, a0, a0);
        const double along = la::inner(b.ginv, av, a0) / a0a0;
        Vec3 perp;
        for (int k = 0; k < 3; ++k) perp[k] = av[k] - along * a0[k];
        const double perp_norm = std::sqrt(std::max(0.0, la::inner(b.ginv, perp, perp)));
        out.tilt = std::atan2(perp_norm, std::fabs(along) * std::sqrt(a0a0));
      }
      samples[i] = out;
    });
    ScanRow row;
    row.s = s;
    row.min_contact_volume = std::numeric_limits<double>::infinity();
    row.max_contact_volume = -std::numeric_limits<double>::infinity();
    row.min_normal_angle = std::numeric_limits<double>::infinity();
    for (const Sample& x : samples) {
      row.min_contact_volume = std::min(row.min_contact_volume, x.cv);
      row.max_contact_volume = std::max(row.max_contact_volume, x.cv);
      if (x.degenerate) {
        ++row.degenerate_points;
        continue;
      }
      row.min_normal_angle = std::min(row.min_normal_angle, x.normal);
      row.max_tilt_angle = std::max(row.max_tilt_angle, x.tilt);
    }
    if (samples.empty()) row.min_contact_volume = row.max_contact_volume = 0.0;
    if (!std::isfinite(row.min_normal_angle)) row.min_normal_angle = 0.0;
    r.rows.push_back(row);
  }
  return r;
}

Json scan_report_to_json(const ScanReport& r) {
  Json rows = Json::array();
  for (const ScanRow& row : r.rows)
    rows.push_back({{"s", row.s},
                    {"min_contact_volume", row.min_contact_volume},
                    {"max_contact_volume", row.max_contact_volume},
                    {"min_normal_angle", row.min_normal_angle},
                    {"max_tilt_angle", row.max_tilt_angle},
                    {"degenerate_points", row.degenerate_points}});
  return {{"schema", "planefield.scan_report/1"},
          {"model", r.model_id},
          {"alpha", r.alpha},
          {"beta", r.beta},
          {"grid", Json::array({r.grid[0], r.grid[1], r.grid[2]})},
          {"box", interval_box_to_json(r.box)},
          {"rows", rows}};
}

}  // namespace planefield
