#include "planefield/jet.hpp"

#include "planefield/errors.hpp"

namespace planefield {

namespace {

// exp(-1/u) underflows to 0 well before 1/u reaches this; cutting off here
// keeps sigma'(u) = sigma(u)/u^2 from forming 0 * inf.
constexpr double kSigmaCutoff = 1.0 / 740.0;

// Value plus first and second derivative along one variable.
struct Hyper {
  double v, d1, d2;
};

Hyper operator+(Hyper a, Hyper b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Hyper operator*(Hyper a, Hyper b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Hyper reciprocal(Hyper a) {
  const double r = 1.0 / a.v;
  return {r, -a.d1 * r * r, (2.0 * a.d1 * a.d1 * r - a.d2) * r * r};
}

// sigma(u(w)) where u = c0 + c1 * w is affine.
Hyper sigma(double u, double du) {
  if (u <= kSigmaCutoff) return {0.0, 0.0, 0.0};
  const double e = std::exp(-1.0 / u);
  const double s1 = e / (u * u);                          // d sigma / du
  const double s2 = e * (1.0 - 2.0 * u) / (u * u * u * u);  // d^2 sigma / du^2
  return {e, s1 * du, s2 * du * du};
}

// smoothstep in the normalized variable w with derivatives up to second order.
Hyper unit_step(double w) {
  if (w <= 0.0) return {0.0, 0.0, 0.0};
  if (w >= 1.0) return {1.0, 0.0, 0.0};
  const Hyper p = sigma(w, 1.0);
  const Hyper q = sigma(1.0 - w, -1.0);
  return p * reciprocal(p + q);
}

void check_interval(double a, double b) {
  if (!(a < b))
    throw DomainError("smoothstep", "requires a < b, got a=" + std::to_string(a) +
                                        ", b=" + std::to_string(b));
}

Jet1 sigma_jet(const Jet1& u) {
  if (u.value <= kSigmaCutoff) return Jet1(0.0);
  const double e = std::exp(-1.0 / u.value);
  return chain(u, e, e / (u.value * u.value));
}

}  // namespace

double smoothstep(double a, double b, double x) {
  check_interval(a, b);
  return unit_step((x - a) / (b - a)).v;
}

Jet1 smoothstep(const Jet1& a, const Jet1& b, const Jet1& x) {
  check_interval(a.value, b.value);
  const Jet1 w = (x - a) / (b - a);
  if (w.value <= 0.0) return Jet1(0.0);
  if (w.value >= 1.0) return Jet1(1.0);
  const Jet1 p = sigma_jet(w);
  const Jet1 q = sigma_jet(Jet1(1.0) - w);
  return p / (p + q);
}

double smoothstep_slope(double a, double b, double x) {
  check_interval(a, b);
  return unit_step((x - a) / (b - a)).d1 / (b - a);
}

Jet1 smoothstep_slope(double a, double b, const Jet1& x) {
  check_interval(a, b);
  const double span = b - a;
  const Hyper h = unit_step((x.value - a) / span);
  return chain(x, h.d1 / span, h.d2 / (span * span));
}

}  // namespace planefield
