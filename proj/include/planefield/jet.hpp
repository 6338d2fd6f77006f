#pragma once

#include <array>
#include <cmath>

namespace planefield {

/// First-order jet: a value together with its exact partials with respect
/// to the three chart coordinates (fixed slot order).
struct Jet1 {
  double value = 0.0;
  std::array<double, 3> grad{0.0, 0.0, 0.0};

  constexpr Jet1() = default;
  constexpr Jet1(double v) : value(v) {}  // NOLINT: constants promote implicitly
  constexpr Jet1(double v, std::array<double, 3> g) : value(v), grad(g) {}

  static constexpr Jet1 variable(double v, int slot) {
    Jet1 j(v);
    j.grad[static_cast<std::size_t>(slot)] = 1.0;
    return j;
  }

  constexpr double d(int slot) const { return grad[static_cast<std::size_t>(slot)]; }
};

using JetVec3 = std::array<Jet1, 3>;
using JetMat3 = std::array<std::array<Jet1, 3>, 3>;

/// Seeds the three coordinates of `p` as independent variables.
inline JetVec3 seed(const std::array<double, 3>& p) {
  return {Jet1::variable(p[0], 0), Jet1::variable(p[1], 1), Jet1::variable(p[2], 2)};
}

// chain-rule helper: f(a) with f'(a) = slope
constexpr Jet1 chain(const Jet1& a, double value, double slope) {
  return Jet1(value, {slope * a.grad[0], slope * a.grad[1], slope * a.grad[2]});
}

constexpr Jet1 operator-(const Jet1& a) { return chain(a, -a.value, -1.0); }

constexpr Jet1 operator+(const Jet1& a, const Jet1& b) {
  return Jet1(a.value + b.value,
              {a.grad[0] + b.grad[0], a.grad[1] + b.grad[1], a.grad[2] + b.grad[2]});
}

constexpr Jet1 operator-(const Jet1& a, const Jet1& b) {
  return Jet1(a.value - b.value,
              {a.grad[0] - b.grad[0], a.grad[1] - b.grad[1], a.grad[2] - b.grad[2]});
}

constexpr Jet1 operator*(const Jet1& a, const Jet1& b) {
  return Jet1(a.value * b.value, {a.grad[0] * b.value + a.value * b.grad[0],
                                  a.grad[1] * b.value + a.value * b.grad[1],
                                  a.grad[2] * b.value + a.value * b.grad[2]});
}

constexpr Jet1 operator/(const Jet1& a, const Jet1& b) {
  const double q = a.value / b.value;
  const double inv = 1.0 / b.value;
  return Jet1(q, {(a.grad[0] - q * b.grad[0]) * inv, (a.grad[1] - q * b.grad[1]) * inv,
                  (a.grad[2] - q * b.grad[2]) * inv});
}

inline Jet1& operator+=(Jet1& a, const Jet1& b) { return a = a + b; }
inline Jet1& operator-=(Jet1& a, const Jet1& b) { return a = a - b; }
inline Jet1& operator*=(Jet1& a, const Jet1& b) { return a = a * b; }
inline Jet1& operator/=(Jet1& a, const Jet1& b) { return a = a / b; }

inline double value_of(double x) { return x; }
inline double value_of(const Jet1& x) { return x.value; }

inline Jet1 sin(const Jet1& a) { return chain(a, std::sin(a.value), std::cos(a.value)); }
inline Jet1 cos(const Jet1& a) { return chain(a, std::cos(a.value), -std::sin(a.value)); }
inline Jet1 exp(const Jet1& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e);
}
inline Jet1 log(const Jet1& a) { return chain(a, std::log(a.value), 1.0 / a.value); }

/// sqrt; at 0 the gradient is 0 when the argument is stationary (otherwise inf).
inline Jet1 sqrt(const Jet1& a) {
  const double s = std::sqrt(a.value);
  if (s == 0.0 && a.grad == std::array<double, 3>{0.0, 0.0, 0.0}) return Jet1(0.0);
  return chain(a, s, 0.5 / s);
}

/// Integer power by repeated squaring on the value, exact slope n a^(n-1).
template <typename S>
S pow_int(const S& a, long n);

template <>
inline double pow_int(const double& a, long n) {
  return std::pow(a, static_cast<double>(n));
}

template <>
inline Jet1 pow_int(const Jet1& a, long n) {
  if (n == 0) return Jet1(1.0);
  const double v = std::pow(a.value, static_cast<double>(n));
  const double slope = static_cast<double>(n) * std::pow(a.value, static_cast<double>(n - 1));
  return chain(a, v, slope);
}

/// a^b with b non-constant or non-integer; requires a > 0.
inline Jet1 pow_real(const Jet1& a, const Jet1& b) {
  const double v = std::pow(a.value, b.value);
  const double la = std::log(a.value);
  Jet1 out(v);
  for (int k = 0; k < 3; ++k)
    out.grad[static_cast<std::size_t>(k)] =
        v * (b.value / a.value * a.d(k) + la * b.d(k));
  return out;
}

inline double pow_real(double a, double b) { return std::pow(a, b); }

// ---------------------------------------------------------------------------
// smoothstep: exp-based C-infinity transition, 0 for x <= a, 1 for x >= b.
//   sigma(u) = exp(-1/u) for u > 0, else 0;  s = sigma(w) / (sigma(w) + sigma(1-w))
// Throws DomainError when a >= b.
// ---------------------------------------------------------------------------

double smoothstep(double a, double b, double x);
Jet1 smoothstep(const Jet1& a, const Jet1& b, const Jet1& x);

/// Derivative ds/dx of smoothstep(a, b, .) for constant a, b.
double smoothstep_slope(double a, double b, double x);

/// s'(x) as a jet: value s'(x), gradient s''(x) * grad(x). Constant a, b.
Jet1 smoothstep_slope(double a, double b, const Jet1& x);

}  // namespace planefield
