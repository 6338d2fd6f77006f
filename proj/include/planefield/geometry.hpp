#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planefield/errors.hpp"
#include "planefield/expr.hpp"
#include "planefield/jet.hpp"
#include "planefield/linalg.hpp"

namespace planefield {

using la::Mat2;
using la::Mat3;
using la::Vec3;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

struct SingularLocus {
  int coordinate = 0;
  double value = 0.0;
  std::string note;
};

/// Samplers stay this far from a singular locus sitting on a domain edge.
inline constexpr double kDefaultSingularMargin = 1e-3;

/// A rectangular coordinate chart of a 3-manifold.
class Chart {
 public:
  /// Unit cube in (x, y, z), nothing periodic.
  Chart() : Chart({"x", "y", "z"}, {Interval{}, Interval{}, Interval{}}, {false, false, false}) {}
  Chart(CoordNames names, std::array<Interval, 3> domain, std::array<bool, 3> periodic,
        std::vector<SingularLocus> singular_loci = {});

  const CoordNames& names() const { return names_; }
  const std::array<Interval, 3>& domain() const { return domain_; }
  const std::array<bool, 3>& periodic() const { return periodic_; }
  const std::vector<SingularLocus>& singular_loci() const { return loci_; }

  bool all_periodic() const { return periodic_[0] && periodic_[1] && periodic_[2]; }
  /// Index of a coordinate name, or -1.
  int index_of(const std::string& name) const;

  /// Domain with singular loci on an edge pulled in by `margin`.
  std::array<Interval, 3> sample_box(double margin = kDefaultSingularMargin) const;

  /// The locus `p` lies on (within `eps`), if any.
  const SingularLocus* singular_at(const Point& p, double eps = 1e-12) const;

 private:
  CoordNames names_;
  std::array<Interval, 3> domain_;
  std::array<bool, 3> periodic_;
  std::vector<SingularLocus> loci_;
};

/// Per-axis sample counts.
using GridCounts = std::array<int, 3>;

/// Lattice nodes over `box`: non-periodic axes include both ends, periodic
/// axes use n equal steps without the duplicate endpoint. Points on a
/// singular locus of `chart` are dropped. Order: first axis slowest.
std::vector<Point> lattice_points(const Chart& chart, const std::array<Interval, 3>& box,
                                  const GridCounts& counts);

/// Cell midpoints of `box`, first axis slowest.
std::vector<Point> midpoints(const std::array<Interval, 3>& box, const GridCounts& counts);

// ---------------------------------------------------------------------------
// Fields. Each is evaluated on jet-valued coordinates so it composes with
// coordinate changes; `jet(p)` seeds the chart coordinates at p.
// ---------------------------------------------------------------------------

template <typename Tag>
class ComponentField {
 public:
  using Fn = std::function<JetVec3(const JetVec3&)>;

  ComponentField() = default;

  static ComponentField from_exprs(std::array<Expr, 3> components) {
    ComponentField f;
    f.fn_ = [components](const JetVec3& x) {
      return JetVec3{components[0].eval_composed(x), components[1].eval_composed(x), components[2].eval_composed(x)};
    };
    f.exprs_ = std::move(components);
    return f;
  }

  static ComponentField from_strings(const std::array<std::string, 3>& text,
                                     const CoordNames& coords) {
    return from_exprs({Expr::parse(text[0], coords), Expr::parse(text[1], coords),
                       Expr::parse(text[2], coords)});
  }

  static ComponentField from_function(Fn fn) {
    ComponentField f;
    f.fn_ = std::move(fn);
    return f;
  }

  JetVec3 at(const JetVec3& x) const { return fn_(x); }
  JetVec3 jet(const Point& p) const { return fn_(seed(p)); }
  Vec3 value(const Point& p) const { return la::values(jet(p)); }

  bool valid() const { return static_cast<bool>(fn_); }
  const std::optional<std::array<Expr, 3>>& exprs() const { return exprs_; }

 private:
  Fn fn_;
  std::optional<std::array<Expr, 3>> exprs_;
};

/// Contravariant components X^i.
using VectorField = ComponentField<struct VectorFieldTag>;
/// Covariant components alpha_i.
using OneFormField = ComponentField<struct OneFormFieldTag>;

/// Symmetric 3x3 metric g_ij over a chart.
class MetricField {
 public:
  using Fn = std::function<JetMat3(const JetVec3&)>;

  MetricField() = default;

  /// Upper triangle, row-major: g00 g01 g02 g11 g12 g22.
  static MetricField from_exprs(std::array<Expr, 6> upper);
  static MetricField from_strings(const std::array<std::string, 6>& upper,
                                  const CoordNames& coords);
  static MetricField from_function(Fn fn);
  static MetricField euclidean();

  JetMat3 at(const JetVec3& x) const { return fn_(x); }
  JetMat3 jet(const Point& p) const { return fn_(seed(p)); }

  /// Constant rescaling g -> c^2 g.
  MetricField scaled(double c) const;

  bool valid() const { return static_cast<bool>(fn_); }
  const std::optional<std::array<Expr, 6>>& exprs() const { return exprs_; }

 private:
  Fn fn_;
  std::optional<std::array<Expr, 6>> exprs_;
};

/// Metric value and exact first partials at a point.
struct MetricSample {
  Point p{};
  Mat3 g{};
  Mat3 inverse{};
  std::array<Mat3, 3> dg{};  // dg[k][i][j] = d_k g_ij
  double det = 0.0;
};

/// Throws NotSPD (with the failing leading minor) if the matrix is not
/// symmetric positive definite.
void require_spd(const Mat3& g, const Point& p);

MetricSample metric_at(const MetricField& g, const Point& p);

/// Jet-valued metric with the SPD check applied to its value.
JetMat3 metric_jet(const MetricField& g, const Point& p);

/// gamma[k][i][j] = Christoffel symbol of the second kind.
using Christoffel = std::array<Mat3, 3>;

Christoffel christoffel(const MetricSample& m);
Christoffel christoffel(const MetricField& g, const Point& p);

/// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j.
Vec3 covariant_derivative(const Christoffel& gamma, const Vec3& x, const JetVec3& y);
Vec3 covariant_derivative(const MetricField& g, const VectorField& x, const VectorField& y,
                          const Point& p);

/// (d alpha)_ij = d_i alpha_j - d_j alpha_i.
Mat3 exterior_derivative(const JetVec3& alpha);
Mat3 d_oneform(const OneFormField& alpha, const Point& p);

/// Coefficient of dx1^dx2^dx3 in alpha ^ omega, where omega is given by its
/// antisymmetric coefficient matrix (omega = 1/2 omega_ij dx^i ^ dx^j).
double wedge3(const Vec3& alpha, const Mat3& omega);

/// div X = (1/sqrt det g) d_i (sqrt det g X^i).
double divergence(const MetricSample& m, const JetVec3& x);
double divergence(const MetricField& g, const VectorField& x, const Point& p);

struct QuadratureOptions {
  int jobs = 1;
  /// Caller asserts the integrand vanishes near non-periodic boundaries.
  bool assume_compact_support = false;
};

/// Midpoint rule for the integral of f * sqrt(det g) over the chart
/// domain, with fixed-order pairwise summation. Throws ConfigError when
/// the chart has a non-periodic axis and compact support is not asserted,
/// SingularSample when a midpoint lies on a singular locus.
double integrate_scalar(const Chart& chart, const MetricField& g,
                        const std::function<double(const Point&)>& f, const GridCounts& counts,
                        const QuadratureOptions& options = {});

}  // namespace planefield
