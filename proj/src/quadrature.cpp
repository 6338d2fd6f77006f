#include <cmath>

#include "planefield/geometry.hpp"
#include "planefield/parallel.hpp"

namespace planefield {

double integrate_scalar(const Chart& chart, const MetricField& g,
                        const std::function<double(const Point&)>& f, const GridCounts& counts,
                        const QuadratureOptions& options) {
  if (!chart.all_periodic() && !options.assume_compact_support)
    throw ConfigError("midpoint quadrature needs a fully periodic chart or compactly supported integrand");
  for (int n : counts)
    if (n < 1) throw ConfigError("quadrature grid counts must be positive");

  const auto pts = midpoints(chart.domain(), counts);
  for (const auto& p : pts)
    if (const auto* l = chart.singular_at(p)) throw SingularSample(p, chart.names()[l->coordinate]);

  std::vector<double> values(pts.size());
  parallel_for(pts.size(), options.jobs, [&](std::size_t i) {
    const MetricSample m = metric_at(g, pts[i]);
    values[i] = f(pts[i]) * std::sqrt(m.det);
  });
  double cell = 1.0;
  for (int k = 0; k < 3; ++k) cell *= chart.domain()[k].width() / counts[k];
  return cell * pairwise_sum(values);
}

}  // namespace planefield
