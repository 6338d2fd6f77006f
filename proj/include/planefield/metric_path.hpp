#pragma once

#include <functional>
#include <vector>

#include "planefield/models.hpp"

namespace planefield {

/// A family G_t of surface metrics, t in [0, 1]. The evaluator receives
/// jets (u, v, t), so the t-partial comes out exactly in slot 2.
class MetricPath {
 public:
  using Fn = std::function<Sym2Jet(const JetVec3&)>;
  using CrossingFn = std::function<bool(double, double)>;

  MetricPath() = default;
  MetricPath(SurfaceChart chart, Fn fn, double delta0, double delta1, double boundary_margin,
             CrossingFn crossing = {})
      : chart_(std::move(chart)),
        fn_(std::move(fn)),
        crossing_(std::move(crossing)),
        delta0_(delta0),
        delta1_(delta1),
        boundary_margin_(boundary_margin) {}

  /// (1 - t) G + t H with no collars.
  static MetricPath straight_line(const SurfaceMetric& g, const SurfaceMetric& h);
  /// G_t = G for every t.
  static MetricPath constant(const SurfaceMetric& g, double delta0 = 0.1, double delta1 = 0.1);

  Sym2Jet at(double u, double v, double t) const { return fn_(seed({u, v, t})); }
  Sym2Jet at(const JetVec3& x) const { return fn_(x); }
  /// True where the construction could not guarantee smoothness in (u, v).
  bool crossing(double u, double v) const { return crossing_ && crossing_(u, v); }

  const SurfaceChart& chart() const { return chart_; }
  double delta0() const { return delta0_; }
  double delta1() const { return delta1_; }
  /// Width of the band along non-periodic chart edges that must stay fixed.
  double boundary_margin() const { return boundary_margin_; }
  /// Number of rank-one stages (0 for paths not built stage-wise).
  int stages() const { return stages_; }
  /// Subdivision depth used by the rank-one constructor.
  int depth() const { return depth_; }
  /// Validation-lattice points flagged as eigenvalue crossings.
  const std::vector<std::array<double, 2>>& crossings_found() const { return crossings_found_; }

  void set_construction(int stages, int depth, std::vector<std::array<double, 2>> crossings) {
    stages_ = stages;
    depth_ = depth;
    crossings_found_ = std::move(crossings);
  }

 private:
  SurfaceChart chart_;
  Fn fn_;
  CrossingFn crossing_;
  double delta0_ = 0.0;
  double delta1_ = 0.0;
  double boundary_margin_ = 0.0;
  int stages_ = 0;
  int depth_ = 0;
  std::vector<std::array<double, 2>> crossings_found_;
};

struct RankOnePathOptions {
  double delta0 = 0.1;
  double delta1 = 0.1;
  double boundary_margin = 0.05;
  /// Surface lattice used for the positivity check and crossing scan.
  std::array<int, 2> validation_grid{33, 33};
  int max_depth = 8;
  /// Relative eigenvalue gap below which a point is flagged as a crossing.
  double crossing_gap = 1e-8;
};

/// Path from G to H built from rank-one stages. D = H - G is split
/// pointwise into its two spectral components C_i = mu_i u_i u_i^T; each
/// stage moves one component along a smoothstep window in t, so
/// d/dt G_t always has rank one. At depth d the components are added in
/// 2^d alternating rounds of size 1/2^d. The first depth whose partial
/// sums are positive definite on the validation lattice wins; otherwise
/// NonSPDPath is thrown. Components that vanish identically are skipped.
MetricPath rank_one_path(const SurfaceMetric& g, const SurfaceMetric& h, const RankOnePathOptions& options = {});

struct MetricPathReport {
  std::array<int, 3> grid{};
  /// max |det d_t G_t| over samples away from flagged crossings.
  double max_abs_det_dt = 0.0;
  /// max |G_t - G_0| for t <= delta0 and |G_t - G_1| for t >= 1 - delta1.
  double collar_start_residual = 0.0;
  double collar_end_residual = 0.0;
  /// max |d_t G_t| on the boundary band.
  double boundary_residual = 0.0;
  /// Smallest eigenvalue of G_t seen.
  double min_eigenvalue = 0.0;
  /// max |B - (-1/2) d_t G_t| for the leaves t = const of dt^2 + G_t.
  double leafwise_residual = 0.0;
  std::size_t samples = 0;
  std::size_t crossings_excluded = 0;
  int stages = 0;
};

/// Samples the path on a (u, v, t) lattice. Throws NotSPD at the first
/// sample where G_t fails to be positive definite.
MetricPathReport verify_metric_path(const MetricPath& path, const std::array<int, 3>& grid, int jobs = 1);

/// dt^2 + G_t on (u, v, t) as a 3-metric (for classification and gluing).
MetricField path_metric_3d(const MetricPath& path, double time_scale = 1.0);

}  // namespace planefield
