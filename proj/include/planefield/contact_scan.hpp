#pragma once

#include <string>
#include <vector>

#include "planefield/distributions.hpp"
#include "planefield/report_io.hpp"

namespace planefield {

/// Statistics of alpha_s = alpha0 + s beta over the chart lattice.
struct ScanRow {
  double s = 0.0;
  double min_contact_volume = 0.0;
  double max_contact_volume = 0.0;
  /// min over points of the angle between n0 (unit normal of ker alpha0)
  /// and the plane ker alpha_s; positive means ker alpha_s is transverse to n0.
  double min_normal_angle = 0.0;
  /// max over points of the angle between the planes ker alpha_s and ker alpha0.
  double max_tilt_angle = 0.0;
  /// Points where alpha_s vanished (excluded from the angles).
  std::size_t degenerate_points = 0;
};

struct ScanReport {
  std::string model_id;
  std::string alpha;
  std::string beta;
  GridCounts grid{};
  std::array<Interval, 3> box{};
  std::vector<ScanRow> rows;
};

/// "a:b:n" -> n evenly spaced values from a to b inclusive (n >= 1).
std::vector<double> parse_s_range(const std::string& text);

ScanReport contact_deformation_scan(const MetricField& g, const Chart& chart, const OneFormField& alpha0,
                                    const OneFormField& beta, const std::vector<double>& s_values,
                                    const GridCounts& grid, int jobs = 1);

Json scan_report_to_json(const ScanReport& report);

}  // namespace planefield
