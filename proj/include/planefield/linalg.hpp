#pragma once

#include <array>
#include <cmath>

#include "planefield/jet.hpp"

// Fixed-size 2x2 / 3x3 helpers, generic over double and Jet1.
namespace planefield::la {

template <typename S>
using Vec3T = std::array<S, 3>;
template <typename S>
using Mat3T = std::array<std::array<S, 3>, 3>;
template <typename S>
using Mat2T = std::array<std::array<S, 2>, 2>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using Mat2 = Mat2T<double>;

template <typename S>
S det(const Mat3T<S>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <typename S>
S det(const Mat2T<S>& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

template <typename S>
Mat3T<S> inverse(const Mat3T<S>& m) {
  const S d = det(m);
  Mat3T<S> r;
  r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
  r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
  r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
  return r;
}

template <typename S>
Mat2T<S> inverse(const Mat2T<S>& m) {
  const S d = det(m);
  return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

template <typename S>
Vec3T<S> mul(const Mat3T<S>& m, const Vec3T<S>& v) {
  Vec3T<S> r;
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

template <typename S>
S dot(const Vec3T<S>& a, const Vec3T<S>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// g(a, b) for a bilinear form g.
template <typename S>
S inner(const Mat3T<S>& g, const Vec3T<S>& a, const Vec3T<S>& b) {
  return dot(a, mul(g, b));
}

/// Coordinate cross product; for vectors S, T this is the covector
/// eps_ijk S^j T^k annihilating both.
template <typename S>
Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <typename S>
Vec3T<S> scale(const Vec3T<S>& a, const S& s) {
  return {a[0] * s, a[1] * s, a[2] * s};
}

template <typename S>
Vec3T<S> add(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <typename S>
Vec3T<S> sub(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 values(const Vec3T<Jet1>& v) { return {v[0].value, v[1].value, v[2].value}; }

inline Mat3 values(const Mat3T<Jet1>& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].value;
  return r;
}

/// Partial of every component along coordinate slot k.
inline Vec3 partial(const Vec3T<Jet1>& v, int k) { return {v[0].d(k), v[1].d(k), v[2].d(k)}; }

inline Mat3 partial(const Mat3T<Jet1>& m, int k) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].d(k);
  return r;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::fmax(m, std::fabs(a[i][j] - b[i][j]));
  return m;
}

inline Mat3 transpose_mul_mul(const Mat3& j, const Mat3& g) {
  // j^T g j
  Mat3 r{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) s += j[i][a] * g[i][k] * j[k][b];
      r[a][b] = s;
    }
  return r;
}

constexpr Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

}  // namespace planefield::la
