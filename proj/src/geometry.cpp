#include "planefield/geometry.hpp"

#include <cmath>

namespace planefield {

Chart::Chart(CoordNames names, std::array<Interval, 3> domain, std::array<bool, 3> periodic,
             std::vector<SingularLocus> singular_loci)
    : names_(std::move(names)),
      domain_(domain),
      periodic_(periodic),
      loci_(std::move(singular_loci)) {
  for (int k = 0; k < 3; ++k) {
    if (!(domain_[k].lo < domain_[k].hi))
      throw ConfigError("chart axis '" + names_[k] + "' needs lower < upper");
  }
  for (const auto& l : loci_)
    if (l.coordinate < 0 || l.coordinate > 2) throw ConfigError("singular locus coordinate out of range");
}

int Chart::index_of(const std::string& name) const {
  for (int k = 0; k < 3; ++k)
    if (names_[k] == name) return k;
  return -1;
}

std::array<Interval, 3> Chart::sample_box(double margin) const {
  auto box = domain_;
  for (const auto& l : loci_) {
    auto& iv = box[l.coordinate];
    const double eps = 1e-12 * (1.0 + std::fabs(l.value));
    if (std::fabs(l.value - iv.lo) <= eps) iv.lo = l.value + margin;
    if (std::fabs(l.value - iv.hi) <= eps) iv.hi = l.value - margin;
  }
  return box;
}

const SingularLocus* Chart::singular_at(const Point& p, double eps) const {
  for (const auto& l : loci_)
    if (std::fabs(p[l.coordinate] - l.value) <= eps * (1.0 + std::fabs(l.value))) return &l;
  return nullptr;
}

namespace {

std::vector<double> axis_nodes(const Interval& iv, int n, bool periodic) {
  std::vector<double> xs;
  if (n <= 1) {
    xs.push_back(0.5 * (iv.lo + iv.hi));
    return xs;
  }
  xs.reserve(static_cast<std::size_t>(n));
  const double step = iv.width() / (periodic ? n : n - 1);
  for (int i = 0; i < n; ++i) xs.push_back(iv.lo + step * i);
  if (!periodic) xs.back() = iv.hi;
  return xs;
}

}  // namespace

std::vector<Point> lattice_points(const Chart& chart, const std::array<Interval, 3>& box,
                                  const GridCounts& counts) {
  std::array<std::vector<double>, 3> axes;
  for (int k = 0; k < 3; ++k) axes[k] = axis_nodes(box[k], counts[k], chart.periodic()[k]);
  std::vector<Point> out;
  out.reserve(axes[0].size() * axes[1].size() * axes[2].size());
  for (double a : axes[0])
    for (double b : axes[1])
      for (double c : axes[2]) {
        const Point p{a, b, c};
        if (!chart.singular_at(p)) out.push_back(p);
      }
  return out;
}

std::vector<Point> midpoints(const std::array<Interval, 3>& box, const GridCounts& counts) {
  std::array<std::vector<double>, 3> axes;
  for (int k = 0; k < 3; ++k) {
    const double h = box[k].width() / counts[k];
    for (int i = 0; i < counts[k]; ++i) axes[k].push_back(box[k].lo + h * (i + 0.5));
  }
  std::vector<Point> out;
  out.reserve(axes[0].size() * axes[1].size() * axes[2].size());
  for (double a : axes[0])
    for (double b : axes[1])
      for (double c : axes[2]) out.push_back({a, b, c});
  return out;
}

// --- metric ----------------------------------------------------------------

MetricField MetricField::from_exprs(std::array<Expr, 6> upper) {
  MetricField m;
  m.fn_ = [upper](const JetVec3& x) {
    std::array<Jet1, 6> v;
    for (std::size_t i = 0; i < 6; ++i) v[i] = upper[i].eval_composed(x);
    return JetMat3{{{v[0], v[1], v[2]}, {v[1], v[3], v[4]}, {v[2], v[4], v[5]}}};
  };
  m.exprs_ = std::move(upper);
  return m;
}

MetricField MetricField::from_strings(const std::array<std::string, 6>& upper,
                                      const CoordNames& coords) {
  std::array<Expr, 6> e{Expr::parse(upper[0], coords), Expr::parse(upper[1], coords),
                        Expr::parse(upper[2], coords), Expr::parse(upper[3], coords),
                        Expr::parse(upper[4], coords), Expr::parse(upper[5], coords)};
  return from_exprs(std::move(e));
}

MetricField MetricField::from_function(Fn fn) {
  MetricField m;
  m.fn_ = std::move(fn);
  return m;
}

MetricField MetricField::euclidean() {
  return from_function([](const JetVec3&) {
    return JetMat3{{{Jet1(1.0), Jet1(0.0), Jet1(0.0)},
                    {Jet1(0.0), Jet1(1.0), Jet1(0.0)},
                    {Jet1(0.0), Jet1(0.0), Jet1(1.0)}}};
  });
}

MetricField MetricField::scaled(double c) const {
  const Fn inner = fn_;
  const double c2 = c * c;
  return from_function([inner, c2](const JetVec3& x) {
    JetMat3 g = inner(x);
    for (auto& row : g)
      for (auto& e : row) e = e * Jet1(c2);
    return g;
  });
}

void require_spd(const Mat3& g, const Point& p) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double scale = std::fabs(g[i][j]) + std::fabs(g[j][i]) + 1e-300;
      if (std::fabs(g[i][j] - g[j][i]) > 1e-12 * scale) throw NotSPD(p, 0);
    }
  const double m1 = g[0][0];
  const double m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const double m3 = la::det(g);
  if (!(m1 > 0.0)) throw NotSPD(p, 1);
  if (!(m2 > 0.0)) throw NotSPD(p, 2);
  if (!(m3 > 0.0)) throw NotSPD(p, 3);
}

MetricSample metric_at(const MetricField& g, const Point& p) {
  const JetMat3 j = g.jet(p);
  MetricSample m;
  m.p = p;
  m.g = la::values(j);
  require_spd(m.g, p);
  for (int k = 0; k < 3; ++k) m.dg[k] = la::partial(j, k);
  m.inverse = la::inverse(m.g);
  m.det = la::det(m.g);
  return m;
}

JetMat3 metric_jet(const MetricField& g, const Point& p) {
  JetMat3 j = g.jet(p);
  require_spd(la::values(j), p);
  return j;
}

Christoffel christoffel(const MetricSample& m) {
  // first kind: c[l][i][j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  Christoffel first{};
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        first[l][i][j] = 0.5 * (m.dg[i][j][l] + m.dg[j][i][l] - m.dg[l][i][j]);
  Christoffel gamma{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += m.inverse[k][l] * first[l][i][j];
        gamma[k][i][j] = s;
      }
  return gamma;
}

Christoffel christoffel(const MetricField& g, const Point& p) { return christoffel(metric_at(g, p)); }

Vec3 covariant_derivative(const Christoffel& gamma, const Vec3& x, const JetVec3& y) {
  Vec3 out{};
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      s += x[i] * y[k].d(i);
      for (int j = 0; j < 3; ++j) s += gamma[k][i][j] * x[i] * y[j].value;
    }
    out[k] = s;
  }
  return out;
}

Vec3 covariant_derivative(const MetricField& g, const VectorField& x, const VectorField& y,
                          const Point& p) {
  return covariant_derivative(christoffel(g, p), x.value(p), y.jet(p));
}

Mat3 exterior_derivative(const JetVec3& alpha) {
  Mat3 w{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) w[i][j] = alpha[j].d(i) - alpha[i].d(j);
  return w;
}

Mat3 d_oneform(const OneFormField& alpha, const Point& p) { return exterior_derivative(alpha.jet(p)); }

double wedge3(const Vec3& a, const Mat3& w) {
  return a[0] * w[1][2] + a[1] * w[2][0] + a[2] * w[0][1];
}

double divergence(const MetricSample& m, const JetVec3& x) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    // d_i log sqrt(det g) = 1/2 tr(g^-1 d_i g)
    double half_trace = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) half_trace += m.inverse[a][b] * m.dg[i][b][a];
    s += x[i].d(i) + 0.5 * half_trace * x[i].value;
  }
  return s;
}

double divergence(const MetricField& g, const VectorField& x, const Point& p) {
  return divergence(metric_at(g, p), x.jet(p));
}

}  // namespace planefield
