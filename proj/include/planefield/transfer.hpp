#pragma once

#include <vector>

#include "planefield/distributions.hpp"
#include "planefield/report_io.hpp"

namespace planefield {

/// Pointwise comparison between the plane field xi (metric g) and the
/// transversal plane field eta (transferred metric).
struct TransferPoint {
  Point p{};
  /// sin of the angle between the normal of xi and the plane eta.
  double transversality = 0.0;
  double det_b_tilde = 0.0;
  double extrinsic_curvature_tilde = 0.0;
  /// max_ij |B~_eta(PX_i, PX_j) - B_xi(X_i, X_j)|.
  double residual = 0.0;
};

struct TransferReport {
  GridCounts grid{};
  std::array<Interval, 3> box{};
  std::vector<TransferPoint> points;
  double max_abs_det_b_tilde = 0.0;
  double max_abs_extrinsic_curvature_tilde = 0.0;
  double max_residual = 0.0;
  double min_transversality = 0.0;
};

/// Metric g~ in which {P X1, P X2, n} is orthonormal: (X1, X2) is the
/// g-orthonormal frame of xi from Gram-Schmidt on its default frame, n the
/// unit normal of xi and P the g-orthogonal projection onto eta. Throws
/// NotTransverse where n lies (numerically) in eta.
MetricField transfer_metric_field(const MetricField& g, const Distribution& xi, const Distribution& eta);

struct TransferResult {
  MetricField metric;
  TransferReport report;
};

/// Builds g~ and reports, on the chart lattice, det B~ of eta (with unit
/// normal n) and its deviation from B of xi under P.
TransferResult transfer_metric(const MetricField& g, const Distribution& xi, const Distribution& eta,
                               const Chart& chart, const GridCounts& grid, int jobs = 1);

Json transfer_report_to_json(const TransferReport& report, bool include_points);

}  // namespace planefield
