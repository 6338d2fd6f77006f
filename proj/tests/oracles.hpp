#pragma once

// Test-only reference computations. Nothing here shares code with the jet
// or connection paths it is used to check.

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

using Point = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double central_difference(const std::function<double(const Point&)>& f, Point p, int axis,
                                 double h = 1e-6) {
  Point a = p, b = p;
  a[axis] += h;
  b[axis] -= h;
  return (f(a) - f(b)) / (2.0 * h);
}

inline Mat3 inverse(const Mat3& m) {
  const double d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a0 = (j + 1) % 3, a1 = (j + 2) % 3, b0 = (i + 1) % 3, b1 = (i + 2) % 3;
      r[i][j] = (m[a0][b0] * m[a1][b1] - m[a0][b1] * m[a1][b0]) / d;
    }
  return r;
}

/// Christoffel symbols gamma[k][i][j] from a metric given as a plain
/// function, differentiated by central differences.
inline std::array<Mat3, 3> christoffel_fd(const std::function<Mat3(const Point&)>& g, const Point& p,
                                          double h = 1e-5) {
  std::array<Mat3, 3> dg{};
  for (int k = 0; k < 3; ++k) {
    Point a = p, b = p;
    a[k] += h;
    b[k] -= h;
    const Mat3 ga = g(a), gb = g(b);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[k][i][j] = (ga[i][j] - gb[i][j]) / (2 * h);
  }
  const Mat3 gi = inverse(g(p));
  std::array<Mat3, 3> out{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int l = 0; l < 3; ++l) s += 0.5 * gi[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        out[k][i][j] = s;
      }
  return out;
}

}  // namespace oracle
