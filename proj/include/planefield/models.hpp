#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "planefield/distributions.hpp"

namespace planefield {

/// How a named distribution of a model is built from its named fields.
struct DistributionSpec {
  enum class Kind { Kernel, Span } kind = Kind::Kernel;
  std::string form;                  // Kernel
  int sign = 1;                      // Kernel
  std::array<std::string, 2> span;   // Span: two vector-field names
};

/// A chart together with a metric and named forms, vector fields and
/// distributions. This is the in-memory form of a chart file.
struct ChartModel {
  std::string model_id;
  Chart chart;
  MetricField metric;
  std::map<std::string, OneFormField> forms;
  std::map<std::string, VectorField> vectors;
  std::map<std::string, DistributionSpec> distributions;
  std::map<std::string, std::array<std::string, 2>> named_frames;
  nlohmann::json parameters = nlohmann::json::object();
  std::string default_distribution;

  /// Resolves `name` (a declared distribution, else a form taken as its
  /// kernel). The empty name selects `default_distribution`.
  Distribution distribution(const std::string& name = {}) const;
  /// The distribution's name after defaulting.
  std::string resolve_name(const std::string& name) const;
  const OneFormField& form(const std::string& name) const;
  const VectorField& vector(const std::string& name) const;
  /// Jets of a named frame at p (vector names looked up in `vectors`).
  FrameJets frame(const std::string& name, const Point& p) const;
};

// ---------------------------------------------------------------------------
// Surface metrics. A surface metric is a symmetric 2x2 field evaluated on a
// jet triple (u, v, t); plain surface metrics ignore the third slot, paths
// of metrics use it for the time parameter.
// ---------------------------------------------------------------------------

/// Upper triangle (g11, g12, g22).
using Sym2Jet = std::array<Jet1, 3>;
using Sym2 = std::array<double, 3>;

struct SurfaceChart {
  std::array<std::string, 2> names{"u", "v"};
  std::array<Interval, 2> domain{};
  std::array<bool, 2> periodic{false, false};
};

class SurfaceMetric {
 public:
  using Fn = std::function<Sym2Jet(const JetVec3&)>;

  SurfaceMetric() = default;
  SurfaceMetric(SurfaceChart chart, Fn fn, std::optional<std::array<Expr, 3>> exprs = std::nullopt)
      : chart_(std::move(chart)), fn_(std::move(fn)), exprs_(std::move(exprs)) {}

  /// Expressions over (u, v) named by the chart.
  static SurfaceMetric from_strings(const SurfaceChart& chart, const std::array<std::string, 3>& upper);
  static SurfaceMetric identity(const SurfaceChart& chart);

  Sym2Jet at(const JetVec3& x) const { return fn_(x); }
  Sym2Jet jet(double u, double v) const { return fn_(seed({u, v, 0.0})); }
  Sym2 value(double u, double v) const;

  const SurfaceChart& chart() const { return chart_; }
  const std::optional<std::array<Expr, 3>>& exprs() const { return exprs_; }

 private:
  SurfaceChart chart_;
  Fn fn_;
  std::optional<std::array<Expr, 3>> exprs_;
};

inline double sym2_det(const Sym2& g) { return g[0] * g[2] - g[1] * g[1]; }
/// max |a_i - b_i| over the three stored entries.
double sym2_max_diff(const Sym2& a, const Sym2& b);
/// Throws NotSPD if a 2x2 value is not positive definite.
void require_spd2(const Sym2& g, const Point& p);

// ---------------------------------------------------------------------------
// Solid torus with a Reeb-type parabolic foliation
// ---------------------------------------------------------------------------

struct ReebModel {
  ChartModel model;
  Expr f;  // smoothstep(1/3, 2/3, r)
  Expr G;  // (1 - smoothstep(1/4, 1/3, r)) r^2 + smoothstep(1/4, 1/3, r)
};

inline constexpr const char* kReebF = "smoothstep(1/3, 2/3, r)";
inline constexpr const char* kReebG = "(1 - smoothstep(1/4, 1/3, r))*r^2 + smoothstep(1/4, 1/3, r)";

/// Chart (r, phi, t) in [0,1] x [0,2pi]^2, metric diag(1, G, 1), foliation
/// alpha = f dr + (1 - f) dt. Distributions: "foliation" (ker alpha) and
/// "frame" (span of X = d_phi, Y = (1-f) d_r - f d_t). Named frame "XY".
ReebModel reeb_solid_torus();

/// Second fundamental form in the frame (X, Y) with unit normal
/// g^{-1}alpha / |alpha|: diag(-f G'/2, -(1-f) f') / sqrt(2f^2 - 2f + 1).
/// Throws DomainError for r outside (0, 1].
Mat2 closed_form_B_reeb(double r);

/// Collar [1, 1+2eps] x T^2 with the flat metric and
/// alpha = (1 - f) dr + f dphi, f = smoothstep(1 + eps/2, 1 + eps, r).
ChartModel collar_model(double eps);

/// dt^2 + G on Sigma x S^1 (t in [0, 2pi], periodic) with leaves Sigma x {t}.
/// Coordinates are the surface names followed by "t".
ChartModel product_fibration(const SurfaceMetric& g, const std::string& model_id = "product");

/// Twist of the annulus chart (r, theta): phi(r, theta) = (r, theta + 2 pi k s(r)),
/// s = smoothstep(a, b, r).
struct TwistSpec {
  double a = 1.0;
  double b = 2.0;
  int k = 1;
};

/// H = D phi^T G(phi) D phi with the exact Jacobian. DomainError if a >= b.
SurfaceMetric dehn_twist_pullback(const SurfaceMetric& g, const TwistSpec& twist);

}  // namespace planefield
