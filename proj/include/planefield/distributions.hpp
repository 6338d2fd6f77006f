#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "planefield/geometry.hpp"

namespace planefield {

/// xi = ker(alpha); the unit normal is sign * (g-dual of alpha), normalized.
struct KernelForm {
  OneFormField alpha;
  int sign = 1;
};

/// xi = span(S, T); the unit normal follows the right-handed covector S x T.
struct Span {
  VectorField s;
  VectorField t;
};

class Distribution {
 public:
  Distribution() = default;
  Distribution(KernelForm k) : rep_(std::move(k)) {}  // NOLINT
  Distribution(Span s) : rep_(std::move(s)) {}        // NOLINT

  static Distribution kernel(OneFormField alpha, int sign = 1) {
    return KernelForm{std::move(alpha), sign >= 0 ? 1 : -1};
  }
  static Distribution span(VectorField s, VectorField t) { return Span{std::move(s), std::move(t)}; }

  const KernelForm* as_kernel() const { return std::get_if<KernelForm>(&rep_); }
  const Span* as_span() const { return std::get_if<Span>(&rep_); }

  /// Same plane field with the co-orientation reversed (kernel form only).
  Distribution flipped() const;

 private:
  std::variant<KernelForm, Span> rep_;
};

/// Two tangent vector fields near p, with exact first partials.
struct FrameJets {
  JetVec3 s;
  JetVec3 t;
};

using JetMat2 = std::array<std::array<Jet1, 2>, 2>;

/// (S', T') = (S, T) A, i.e. S' = A00 S + A10 T, T' = A01 S + A11 T.
/// A may vary from point to point (jets).
FrameJets reframe(const FrameJets& frame, const JetMat2& a);

/// Deterministic local frame of xi. For a kernel form the coordinate k with
/// the largest |alpha_k| is solved for: v_j = e_j - (alpha_j / alpha_k) e_k
/// for the other two axes j in increasing order.
FrameJets tangent_frame_jets(const Distribution& xi, const Point& p);
std::pair<Vec3, Vec3> tangent_frame(const MetricField& g, const Distribution& xi, const Point& p);

/// A 1-form whose kernel is xi (alpha itself, or S x T for a span).
JetVec3 defining_form_jets(const Distribution& xi, const Point& p);

/// Unit normal with exact partials.
JetVec3 normal_jets(const JetMat3& g, const Distribution& xi, const Point& p);
Vec3 normal_field(const MetricField& g, const Distribution& xi, const Point& p);

/// Everything the curvature functionals produce at one point.
struct PointCurvature {
  Point p{};
  Vec3 frame_s{};
  Vec3 frame_t{};
  Vec3 normal{};
  Mat2 b{};
  Mat2 gram{};
  double mean_curvature = 0.0;
  double extrinsic_curvature = 0.0;
  double frobenius_residual = 0.0;
  double contact_volume = 0.0;
  double normal_divergence = 0.0;
};

/// Core evaluation with an explicit frame and unit normal (both jets).
PointCurvature curvature_with_frame(const MetricSample& m, const FrameJets& frame,
                                    const JetVec3& normal);

/// Full pointwise evaluation; `frame` overrides the default tangent frame.
PointCurvature curvature_at(const MetricField& g, const Distribution& xi, const Point& p,
                            const std::optional<FrameJets>& frame = std::nullopt);

Mat2 second_fundamental_form(const MetricField& g, const Distribution& xi, const Point& p,
                             const std::optional<FrameJets>& frame = std::nullopt);
double mean_curvature(const MetricField& g, const Distribution& xi, const Point& p);
double extrinsic_curvature(const MetricField& g, const Distribution& xi, const Point& p);
double frobenius_residual(const MetricField& g, const Distribution& xi, const Point& p);
/// wedge3(alpha, d alpha) at p.
double contact_volume(const OneFormField& alpha, const Point& p);

// ---------------------------------------------------------------------------
// Grid classification
// ---------------------------------------------------------------------------

enum class Classification { Elliptic, Parabolic, Hyperbolic, Mixed, Empty };

std::string to_string(Classification c);
Classification classification_from_string(const std::string& s);

/// Parabolic if max |K_e| <= tol, hyperbolic if max K_e <= -tol, elliptic
/// if min K_e >= tol, otherwise mixed.
Classification classify_range(double min_ke, double max_ke, double tol);

inline constexpr double kDefaultParabolicTol = 1e-8;

struct Aggregate {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct PointError {
  Point p{};
  std::string kind;
  std::string message;
};

struct CurvatureReport {
  std::string model_id;
  std::string distribution;
  GridCounts grid{};
  std::array<Interval, 3> box{};
  double tol = kDefaultParabolicTol;

  std::vector<PointCurvature> points;
  std::vector<PointError> errors;

  Aggregate mean_curvature;
  Aggregate extrinsic_curvature;
  Aggregate frobenius_residual;
  Aggregate contact_volume;
  double max_abs_extrinsic_curvature = 0.0;
  double max_abs_frobenius_residual = 0.0;
  double max_abs_contact_volume = 0.0;
  double min_abs_contact_volume = 0.0;
  Classification classification = Classification::Empty;
  /// Indices into `points`, largest |K_e| first (at most 10).
  std::vector<std::size_t> worst_points;
};

struct ClassifyOptions {
  int jobs = 1;
  std::optional<std::array<Interval, 3>> box;  // default: chart.sample_box()
  std::string model_id;
  std::string distribution;
};

/// Samples the lattice, evaluates every point (per-point errors are
/// collected, not fatal) and aggregates with a fixed reduction order.
CurvatureReport classify(const MetricField& g, const Distribution& xi, const Chart& chart,
                         const GridCounts& grid, double tol, const ClassifyOptions& options = {});

/// Recomputes aggregates and classification from `points` (used by
/// classify and by tests that build reports by hand).
void finalize_report(CurvatureReport& report);

struct MeanCurvatureIntegral {
  double integral = 0.0;
  /// max |H + div n| over the quadrature nodes.
  double max_pointwise_defect = 0.0;
};

MeanCurvatureIntegral integral_mean_curvature(const MetricField& g, const Distribution& xi,
                                              const Chart& chart, const GridCounts& grid,
                                              const QuadratureOptions& options = {});

/// True when a report on a closed (fully periodic) chart claims an elliptic
/// distribution. Mean curvature integrates to zero there, whereas K_e > 0
/// forces H to keep one sign, so such a report always signals a defect.
bool elliptic_obstruction_violated(const CurvatureReport& report, const Chart& chart);

}  // namespace planefield
