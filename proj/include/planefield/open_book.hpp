#pragma once

#include <string>
#include <vector>

#include "planefield/metric_path.hpp"
#include "planefield/report_io.hpp"

namespace planefield {

struct AtlasChart {
  std::string name;
  ChartModel model;
  /// Human-readable origin of the metric when it is not expression-backed.
  std::string metric_note;
};

/// psi: chart `from` -> chart `to`, as three expressions in the coordinates
/// of `from`, checked on `region` (in `from` coordinates).
struct TransitionMap {
  std::string from;
  std::string to;
  std::array<std::string, 3> map;
  std::array<Interval, 3> region{};
};

struct OpenBookOptions {
  double collar_eps = 0.1;
  /// Outer radius of the annulus page (inner radius is 1 + collar_eps).
  double page_outer = 3.0;
  TwistSpec twist{1.5, 2.5, 1};
  double overlap_depth = 0.05;
  std::array<int, 3> overlap_grid{6, 6, 6};
  GridCounts classify_grid{12, 8, 8};
  double mismatch_tol = 1e-9;
  double parabolic_tol = kDefaultParabolicTol;
  int jobs = 1;
};

struct OpenBookAtlas {
  std::vector<AtlasChart> charts;
  std::vector<TransitionMap> transitions;
  const AtlasChart& chart(const std::string& name) const;
};

/// Charts: "reeb", "collar", "cylinder" (mapping cylinder of the page
/// twist, metric dtau^2 + G_{tau/2pi} from rank_one_path(I, twist^* I)),
/// "collar-outer" and "reeb-outer"; transitions glue them in a ring, with
/// the monodromy as the cylinder's self-gluing.
OpenBookAtlas open_book_demo_atlas(const OpenBookOptions& options = {});

struct OverlapResult {
  std::string from;
  std::string to;
  double max_metric_mismatch = 0.0;
  /// max sine of the angle between the two foliations' defining forms.
  double max_leaf_tangency = 0.0;
  std::size_t samples = 0;
};

struct ChartSummary {
  std::string name;
  Classification classification = Classification::Empty;
  double max_abs_extrinsic_curvature = 0.0;
  std::size_t errors = 0;
};

struct AtlasReport {
  std::vector<ChartSummary> charts;
  std::vector<OverlapResult> overlaps;
  double mismatch_tol = 0.0;
  double parabolic_tol = 0.0;
};

/// Compares metric g_A with psi^* g_B and the two foliations on one overlap.
OverlapResult check_overlap(const OpenBookAtlas& atlas, const TransitionMap& t, const std::array<int, 3>& grid);

/// Classifies every chart and checks every overlap. Throws OverlapMismatch
/// if some overlap's metric mismatch exceeds options.mismatch_tol.
AtlasReport assemble_open_book_demo(const OpenBookOptions& options = {});

Json atlas_report_to_json(const AtlasReport& report);
/// Charts (as chart documents where possible) and transition maps.
Json atlas_to_json(const OpenBookAtlas& atlas);

}  // namespace planefield
