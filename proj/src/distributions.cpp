#include "planefield/distributions.hpp"

#include <cmath>

namespace planefield {

namespace {

constexpr double kFormVanishing = 1e-12;
constexpr double kSpanDegeneracy = 1e-12;

JetVec3 unit_axis(int k) {
  JetVec3 v{Jet1(0.0), Jet1(0.0), Jet1(0.0)};
  v[k] = Jet1(1.0);
  return v;
}

int dominant_axis(const JetVec3& alpha) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(alpha[i].value) > std::fabs(alpha[k].value)) k = i;
  return k;
}

double max_abs(const JetVec3& v) {
  return std::fmax(std::fabs(v[0].value), std::fmax(std::fabs(v[1].value), std::fabs(v[2].value)));
}

}  // namespace

Distribution Distribution::flipped() const {
  if (const auto* k = as_kernel()) return KernelForm{k->alpha, -k->sign};
  const auto* s = as_span();
  return Span{s->t, s->s};
}

FrameJets reframe(const FrameJets& f, const JetMat2& a) {
  FrameJets out;
  for (int i = 0; i < 3; ++i) {
    out.s[i] = a[0][0] * f.s[i] + a[1][0] * f.t[i];
    out.t[i] = a[0][1] * f.s[i] + a[1][1] * f.t[i];
  }
  return out;
}

FrameJets tangent_frame_jets(const Distribution& xi, const Point& p) {
  if (const auto* span = xi.as_span()) {
    FrameJets f{span->s.jet(p), span->t.jet(p)};
    const Vec3 s = la::values(f.s), t = la::values(f.t);
    const double ss = la::dot(s, s), tt = la::dot(t, t), st = la::dot(s, t);
    if (!(ss * tt - st * st > kSpanDegeneracy * ss * tt) || ss == 0.0 || tt == 0.0)
      throw DegenerateDistribution(p, "spanning fields are linearly dependent");
    return f;
  }
  const JetVec3 alpha = xi.as_kernel()->alpha.jet(p);
  if (max_abs(alpha) <= kFormVanishing) throw DegenerateDistribution(p, "defining form vanishes");
  const int k = dominant_axis(alpha);
  std::array<JetVec3, 2> v;
  int slot = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == k) continue;
    JetVec3 e = unit_axis(j);
    e[k] = -(alpha[j] / alpha[k]);
    v[slot++] = e;
  }
  return {v[0], v[1]};
}

std::pair<Vec3, Vec3> tangent_frame(const MetricField& g, const Distribution& xi, const Point& p) {
  (void)metric_at(g, p);  // the frame is metric-free, but p must be a valid metric point
  const FrameJets f = tangent_frame_jets(xi, p);
  return {la::values(f.s), la::values(f.t)};
}

JetVec3 defining_form_jets(const Distribution& xi, const Point& p) {
  if (const auto* k = xi.as_kernel()) return k->alpha.jet(p);
  const FrameJets f = tangent_frame_jets(xi, p);
  return la::cross(f.s, f.t);
}

JetVec3 normal_jets(const JetMat3& g, const Distribution& xi, const Point& p) {
  JetVec3 form;
  Jet1 sign(1.0);
  if (const auto* k = xi.as_kernel()) {
    form = k->alpha.jet(p);
    if (max_abs(form) <= kFormVanishing) throw DegenerateDistribution(p, "defining form vanishes");
    sign = Jet1(static_cast<double>(k->sign));
  } else {
    const FrameJets f = tangent_frame_jets(xi, p);
    form = la::cross(f.s, f.t);
  }
  const la::Mat3T<Jet1> ginv = la::inverse(g);
  const JetVec3 raised = la::mul(ginv, form);
  const Jet1 norm = sqrt(la::dot(form, raised));
  return la::scale(raised, sign / norm);
}

Vec3 normal_field(const MetricField& g, const Distribution& xi, const Point& p) {
  return la::values(normal_jets(metric_jet(g, p), xi, p));
}

PointCurvature curvature_with_frame(const MetricSample& m, const FrameJets& frame,
                                    const JetVec3& normal) {
  const Christoffel gamma = christoffel(m);
  const Vec3 s = la::values(frame.s), t = la::values(frame.t), n = la::values(normal);
  const std::array<Vec3, 2> e{s, t};
  const std::array<const JetVec3*, 2> ej{&frame.s, &frame.t};

  // nabla_{e_a} e_b
  std::array<std::array<Vec3, 2>, 2> nab;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) nab[a][b] = covariant_derivative(gamma, e[a], *ej[b]);

  PointCurvature out;
  out.p = m.p;
  out.frame_s = s;
  out.frame_t = t;
  out.normal = n;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      out.b[a][b] = 0.5 * (la::inner(m.g, nab[a][b], n) + la::inner(m.g, nab[b][a], n));
      out.gram[a][b] = la::inner(m.g, e[a], e[b]);
    }
  const double gram_det = la::det(out.gram);
  if (!(gram_det > 0.0)) throw DegenerateDistribution(m.p, "frame Gram determinant not positive");
  const Mat2 gi = la::inverse(out.gram);
  out.mean_curvature = gi[0][0] * out.b[0][0] + gi[0][1] * out.b[1][0] + gi[1][0] * out.b[0][1] +
                       gi[1][1] * out.b[1][1];
  out.extrinsic_curvature = la::det(out.b) / gram_det;
  const Vec3 bracket = la::sub(nab[0][1], nab[1][0]);
  out.frobenius_residual = la::inner(m.g, bracket, n) / std::sqrt(gram_det);
  out.normal_divergence = divergence(m, normal);
  return out;
}

PointCurvature curvature_at(const MetricField& g, const Distribution& xi, const Point& p,
                            const std::optional<FrameJets>& frame) {
  const JetMat3 gj = g.jet(p);
  MetricSample m;
  m.p = p;
  m.g = la::values(gj);
  require_spd(m.g, p);
  for (int k = 0; k < 3; ++k) m.dg[k] = la::partial(gj, k);
  m.inverse = la::inverse(m.g);
  m.det = la::det(m.g);

  const FrameJets f = frame ? *frame : tangent_frame_jets(xi, p);
  const JetVec3 n = normal_jets(gj, xi, p);
  PointCurvature out = curvature_with_frame(m, f, n);
  const JetVec3 form = defining_form_jets(xi, p);
  out.contact_volume = wedge3(la::values(form), exterior_derivative(form));
  return out;
}

Mat2 second_fundamental_form(const MetricField& g, const Distribution& xi, const Point& p,
                             const std::optional<FrameJets>& frame) {
  return curvature_at(g, xi, p, frame).b;
}

double mean_curvature(const MetricField& g, const Distribution& xi, const Point& p) {
  return curvature_at(g, xi, p).mean_curvature;
}

double extrinsic_curvature(const MetricField& g, const Distribution& xi, const Point& p) {
  return curvature_at(g, xi, p).extrinsic_curvature;
}

double frobenius_residual(const MetricField& g, const Distribution& xi, const Point& p) {
  return curvature_at(g, xi, p).frobenius_residual;
}

double contact_volume(const OneFormField& alpha, const Point& p) {
  const JetVec3 a = alpha.jet(p);
  return wedge3(la::values(a), exterior_derivative(a));
}

}  // namespace planefield
