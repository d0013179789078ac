#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "falconer/drop.hpp"
#include "falconer/energy.hpp"
#include "falconer/measure.hpp"
#include "falconer/regularity.hpp"

namespace falconer {

/// Covering of a (pinned) distance set by closed intervals, one per source
/// cube or cube pair, rasterized onto level-`level` dyadic intervals.
/// Distances can exceed 1, so rasterized cell indices may exceed 2^{T level}.
struct DistanceCover {
  std::optional<std::array<double, 2>> pin;
  std::vector<std::array<double, 2>> intervals;  // merged, sorted by lo
  int T = 1;
  int level = 0;
  std::set<std::uint64_t> cells;

  std::size_t count() const { return cells.size(); }

  DyadicSet rasterized() const {
    std::set<CubeIndex> leaves;
    for (auto c : cells) leaves.insert({c, 0});
    return DyadicSet(T, 1, level, std::move(leaves));
  }
};

namespace detail {

inline std::vector<std::array<double, 2>> merge_intervals(
    std::vector<std::array<double, 2>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::array<double, 2>> out;
  for (auto& i : iv) {
    if (!out.empty() && i[0] <= out.back()[1]) {
      out.back()[1] = std::max(out.back()[1], i[1]);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

inline void rasterize_intervals(DistanceCover& cover) {
  const double w = std::ldexp(1.0, -cover.level * cover.T);
  for (auto& [lo, hi] : cover.intervals) {
    auto k0 = static_cast<std::uint64_t>(std::max(0.0, std::floor(lo / w)));
    auto k1 = static_cast<std::uint64_t>(std::max(0.0, std::floor(hi / w)));
    for (std::uint64_t k = k0; k <= k1; ++k) cover.cells.insert(k);
  }
}

inline double rect_rect_max_distance(double a0, double a1, double b0, double b1,
                                     double c0, double c1, double d0, double d1) {
  double dx = std::max(std::abs(c1 - a0), std::abs(a1 - c0));
  double dy = std::max(std::abs(d1 - b0), std::abs(b1 - d0));
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

/// Exact per-cube distance ranges from the pin: [min, max] point-to-
/// rectangle distance for each leaf of A, rasterized at level ell.
inline DistanceCover pinned_distance_cover(const DyadicSet& a, std::array<double, 2> y,
                                           int ell) {
  if (a.dim() != 2) throw std::invalid_argument("pinned_distance_cover: set must be planar");
  DistanceCover cover;
  cover.pin = y;
  cover.T = a.T();
  cover.level = ell;
  std::vector<std::array<double, 2>> iv;
  iv.reserve(a.size());
  for (auto& idx : a.leaves()) {
    DyadicCube q = a.cube(idx);
    double lo = point_rect_distance(y[0], y[1], q.lo(0), q.hi(0), q.lo(1), q.hi(1));
    double hi = point_rect_max_distance(y[0], y[1], q.lo(0), q.hi(0), q.lo(1), q.hi(1));
    iv.push_back({lo, hi});
  }
  cover.intervals = detail::merge_intervals(std::move(iv));
  detail::rasterize_intervals(cover);
  return cover;
}

/// Distance set of A with itself: unordered cube pairs (same-cube pairs
/// contribute [0, diam]), rasterized at level ell.
inline DistanceCover distance_cover(const DyadicSet& a, int ell) {
  if (a.dim() != 2) throw std::invalid_argument("distance_cover: set must be planar");
  DistanceCover cover;
  cover.T = a.T();
  cover.level = ell;
  std::vector<DyadicCube> cubes;
  cubes.reserve(a.size());
  for (auto& idx : a.leaves()) cubes.push_back(a.cube(idx));
  std::vector<std::array<double, 2>> iv;
  iv.reserve(cubes.size() * (cubes.size() + 1) / 2);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    iv.push_back({0.0, cubes[i].diameter()});
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      const auto& p = cubes[i];
      const auto& q = cubes[j];
      double lo = rect_rect_distance(p.lo(0), p.hi(0), p.lo(1), p.hi(1), q.lo(0), q.hi(0),
                                     q.lo(1), q.hi(1));
      double hi = detail::rect_rect_max_distance(p.lo(0), p.hi(0), p.lo(1), p.hi(1), q.lo(0),
                                                 q.hi(0), q.lo(1), q.hi(1));
      iv.push_back({lo, hi});
    }
  }
  cover.intervals = detail::merge_intervals(std::move(iv));
  detail::rasterize_intervals(cover);
  return cover;
}

/// Box count of a union of closed intervals at level ell (distance covers
/// live on [0, sqrt(2)], beyond the unit cube grid).
inline std::size_t box_count_intervals(const std::vector<std::array<double, 2>>& intervals,
                                       int ell, int T) {
  DistanceCover tmp;
  tmp.T = T;
  tmp.level = ell;
  tmp.intervals = detail::merge_intervals(intervals);
  detail::rasterize_intervals(tmp);
  return tmp.count();
}

/// Least-squares slope of log2 N against ell*T: a lower box dimension
/// estimate at the sampled scales.
inline double box_dimension_estimate(const std::vector<std::pair<int, std::size_t>>& counts,
                                     int T) {
  if (counts.size() < 3)
    throw std::invalid_argument("box_dimension_estimate: need at least 3 levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(counts.size());
  for (auto& [ell, cnt] : counts) {
    double x = static_cast<double>(ell) * T;
    double y = std::log2(static_cast<double>(cnt));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("box_dimension_estimate: degenerate levels");
  return (n * sxy - sx * sy) / denom;
}

/// Thrown when the good/bad square descent would need structure below the
/// measure's resolution.
struct ResolutionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Square {
  double x0 = 0.0, y0 = 0.0, side = 1.0;

  double dist_to(const Square& o) const {
    return rect_rect_distance(x0, x0 + side, y0, y0 + side, o.x0, o.x0 + o.side, o.y0,
                              o.y0 + o.side);
  }
};

struct SeparatedSquaresResult {
  Square q, q1, q2;
  double mass1 = 0.0, mass2 = 0.0;
  int descent_steps = 0;
  double frostman_surrogate = 0.0;  // tree-based check of the L r^s hypothesis
  bool frostman_ok = false;         // surrogate <= L
};

namespace detail {

struct SepConfig {
  double K = 1e4;          // good-square mass ratio threshold rho(Q)/K
  int grid = 100;          // probe cells per axis, side lambda(Q)/grid
  double mass_exponent = 6.0;  // postcondition: mass_i >= max(2,L)^{-mass_exponent}
  std::size_t pair_scan_cap = 400;
};

}  // namespace detail

/// Constructive good/bad square descent: finds Q and separated sub-squares
/// Q1, Q2 of side lambda(Q)/100 with dist(Q1,Q2) >= lambda(Q)/100 and
/// masses >= rho(Q)/K. Leaf masses are attributed to the probe cell
/// containing the leaf center; the procedure refuses to descend below the
/// measure's resolution.
inline SeparatedSquaresResult separated_squares(const DyadicMeasure& rho, double s, double L,
                                                detail::SepConfig cfg = {}) {
  if (!(s > 1.0 && s <= 2.0)) throw std::invalid_argument("separated_squares: need s in (1,2]");
  if (!(L > 0.0)) throw std::invalid_argument("separated_squares: L must be positive");
  if (rho.dim() != 2) throw std::invalid_argument("separated_squares: measure must be planar");

  std::vector<std::array<double, 2>> centers;
  std::vector<double> masses;
  centers.reserve(rho.leaves().size());
  for (auto& [idx, m] : rho.leaves()) {
    centers.push_back(rho.leaf_cube(idx).center());
    masses.push_back(m);
  }
  const double leaf_side = std::ldexp(1.0, -rho.depth() * rho.T());
  const double frostman = frostman_constant(rho, s);

  Square q{0.0, 0.0, 1.0};
  for (int step = 0;; ++step) {
    const double cell = q.side / cfg.grid;
    // probe-cell masses by leaf-center attribution
    std::vector<double> grid_mass(static_cast<std::size_t>(cfg.grid) * cfg.grid, 0.0);
    double q_mass = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double gx = (centers[i][0] - q.x0) / cell;
      double gy = (centers[i][1] - q.y0) / cell;
      if (gx < 0.0 || gy < 0.0 || gx >= cfg.grid || gy >= cfg.grid) continue;
      grid_mass[static_cast<std::size_t>(gy) * cfg.grid + static_cast<std::size_t>(gx)] +=
          masses[i];
      q_mass += masses[i];
    }
    if (q_mass <= 0.0)
      throw ResolutionExhausted("separated_squares: descent lost the measure's support");

    const double thresh = q_mass / cfg.K;
    std::vector<std::pair<double, std::size_t>> heavy;
    for (std::size_t g = 0; g < grid_mass.size(); ++g)
      if (grid_mass[g] >= thresh) heavy.push_back({grid_mass[g], g});
    std::sort(heavy.begin(), heavy.end(), std::greater<>());
    if (heavy.size() > cfg.pair_scan_cap) heavy.resize(cfg.pair_scan_cap);

    auto cell_square = [&](std::size_t g) {
      return Square{q.x0 + static_cast<double>(g % cfg.grid) * cell,
                    q.y0 + static_cast<double>(g / cfg.grid) * cell, cell};
    };
    double best_min = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < heavy.size(); ++i) {
      for (std::size_t j = i + 1; j < heavy.size(); ++j) {
        if (std::min(heavy[i].first, heavy[j].first) <= best_min) break;
        Square a = cell_square(heavy[i].second);
        Square b = cell_square(heavy[j].second);
        if (a.dist_to(b) >= q.side / 100.0) {
          best_min = std::min(heavy[i].first, heavy[j].first);
          bi = i;
          bj = j;
          break;  // heavy is sorted, the first separated partner is the best for this i
        }
      }
    }
    if (best_min > 0.0) {
      SeparatedSquaresResult res{q,
                                 cell_square(heavy[bi].second),
                                 cell_square(heavy[bj].second),
                                 heavy[bi].first,
                                 heavy[bj].first,
                                 step,
                                 frostman,
                                 frostman <= L};
      const double mass_floor = std::pow(std::max(2.0, L), -cfg.mass_exponent);
      if (res.mass1 < mass_floor || res.mass2 < mass_floor)
        throw std::runtime_error("separated_squares: good pair found but below the mass floor");
      if (res.q1.dist_to(res.q2) < q.side / 100.0)
        throw std::runtime_error("separated_squares: separation postcondition failed");
      return res;
    }

    // bad square: shrink to the bounding box of the probe cells near the
    // heaviest one
    if (heavy.empty())
      throw ResolutionExhausted("separated_squares: no probe cell reaches the mass threshold");
    Square q0 = cell_square(heavy.front().second);
    double bx0 = q0.x0, bx1 = q0.x0 + cell, by0 = q0.y0, by1 = q0.y0 + cell;
    for (std::size_t g = 0; g < grid_mass.size(); ++g) {
      if (grid_mass[g] <= 0.0) continue;
      Square c = cell_square(g);
      if (c.dist_to(q0) <= q.side / 100.0) {
        bx0 = std::min(bx0, c.x0);
        bx1 = std::max(bx1, c.x0 + cell);
        by0 = std::min(by0, c.y0);
        by1 = std::max(by1, c.y0 + cell);
      }
    }
    Square next{bx0, by0, std::max(bx1 - bx0, by1 - by0)};
    if (next.side < leaf_side)
      throw ResolutionExhausted("separated_squares: descent reached the measure's resolution");
    if (next.side > q.side / 2.0) next.side = q.side / 2.0;  // forced progress
    q = next;
    if (step > 400)
      throw ResolutionExhausted("separated_squares: descent did not terminate");
  }
}

struct PipelineReport {
  double predicted_exponent = 0.0;  // 1 - M_tau(sigma)/ell
  double measured_exponent = 0.0;   // log2 N(Delta_y supp, ell) / (T ell)
  std::size_t boxes = 0;
  double class_mass = 0.0;
  Seq sigma;
  double m_tau = 0.0;
};

/// End-to-end heuristic: decompose mu, take the heaviest regular class,
/// and compare the drop-combinatorics prediction 1 - M_tau(sigma)/ell with
/// the measured box-counting exponent of the pinned distance set. The
/// prediction ignores the good-set/bad-projection hypotheses behind it, so
/// the output is labeled HEURISTIC and makes no correctness claim.
inline PipelineReport pipeline_predict(const DyadicMeasure& mu, double tau, double epsilon,
                                       std::array<double, 2> y) {
  auto classes = decompose(mu, epsilon);
  if (classes.empty()) throw std::runtime_error("pipeline_predict: decomposition returned no classes");
  const RegularClass& top = classes.front();
  PipelineReport rep;
  rep.sigma = top.sigma;
  rep.class_mass = top.mass;
  rep.m_tau = M_tau(top.sigma, tau).value;
  const double ell = static_cast<double>(mu.depth());
  rep.predicted_exponent = 1.0 - rep.m_tau / ell;
  auto cover = pinned_distance_cover(dyadic_support(mu), y, mu.depth());
  rep.boxes = cover.count();
  rep.measured_exponent =
      std::log2(static_cast<double>(cover.count())) / (static_cast<double>(mu.T()) * ell);
  return rep;
}

}  // namespace falconer
