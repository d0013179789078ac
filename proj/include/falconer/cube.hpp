#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace falconer {

/// Index of a dyadic cube within its level grid. For dim 1 only x is used.
using CubeIndex = std::array<std::uint64_t, 2>;

/// Half-open dyadic cube [i*w, (i+1)*w) x [j*w, (j+1)*w), w = 2^{-level*T}.
struct DyadicCube {
  int dim = 2;       // 1 or 2
  int level = 0;     // j >= 0
  int T = 1;
  CubeIndex index{0, 0};

  double side() const { return std::ldexp(1.0, -level * T); }
  double diameter() const { return side() * (dim == 2 ? std::sqrt(2.0) : 1.0); }

  double lo(int axis) const { return static_cast<double>(index[axis]) * side(); }
  double hi(int axis) const { return static_cast<double>(index[axis] + 1) * side(); }
  std::array<double, 2> center() const {
    return {lo(0) + 0.5 * side(), dim == 2 ? lo(1) + 0.5 * side() : 0.0};
  }

  DyadicCube parent() const {
    if (level == 0) throw std::invalid_argument("root cube has no parent");
    return {dim, level - 1, T, {index[0] >> T, index[1] >> T}};
  }

  /// Ancestor at a coarser level j <= level.
  DyadicCube ancestor(int j) const {
    if (j < 0 || j > level) throw std::invalid_argument("ancestor: bad level");
    int shift = (level - j) * T;
    return {dim, j, T, {index[0] >> shift, index[1] >> shift}};
  }

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

/// The unique level-j cube containing x (left-closed convention).
/// Throws std::domain_error if x is outside [0,1)^dim.
template <std::size_t D>
DyadicCube cube_of_point(const std::array<double, D>& x, int j, int T) {
  static_assert(D == 1 || D == 2);
  if (j < 0 || T < 1) throw std::invalid_argument("cube_of_point: bad level or base");
  if (j * T > 62) throw std::invalid_argument("cube_of_point: level too deep for 64-bit index");
  DyadicCube q{static_cast<int>(D), j, T, {0, 0}};
  const double scale = std::ldexp(1.0, j * T);
  const std::uint64_t top = static_cast<std::uint64_t>(scale) - 1;
  for (std::size_t a = 0; a < D; ++a) {
    if (!(x[a] >= 0.0 && x[a] < 1.0))
      throw std::domain_error("cube_of_point: point outside [0,1)^d");
    // x*scale can round up to scale for x just below 1
    q.index[a] = std::min(static_cast<std::uint64_t>(std::floor(x[a] * scale)), top);
  }
  return q;
}

/// Euclidean distance from a point to the closed rectangle [ax0,ax1]x[ay0,ay1].
inline double point_rect_distance(double px, double py, double ax0, double ax1,
                                  double ay0, double ay1) {
  double dx = px < ax0 ? ax0 - px : (px > ax1 ? px - ax1 : 0.0);
  double dy = py < ay0 ? ay0 - py : (py > ay1 ? py - ay1 : 0.0);
  return std::sqrt(dx * dx + dy * dy);
}

/// Max distance from a point to the closed rectangle (attained at a corner).
inline double point_rect_max_distance(double px, double py, double ax0, double ax1,
                                      double ay0, double ay1) {
  double dx = std::max(std::abs(px - ax0), std::abs(px - ax1));
  double dy = std::max(std::abs(py - ay0), std::abs(py - ay1));
  return std::sqrt(dx * dx + dy * dy);
}

/// Distance between two closed axis-aligned rectangles.
inline double rect_rect_distance(double a0, double a1, double b0, double b1,
                                 double c0, double c1, double d0, double d1) {
  double dx = std::max({0.0, c0 - a1, a0 - c1});
  double dy = std::max({0.0, d0 - b1, b0 - d1});
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace falconer
