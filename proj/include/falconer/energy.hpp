#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "falconer/measure.hpp"
#include "falconer/parallel.hpp"
#include "falconer/seq.hpp"

namespace falconer {

struct EnergyReport {
  double s = 0.0;
  double value = 0.0;
  double log2_value = 0.0;
  std::string method;  // "discrete-pairs" or "regular-formula"
};

namespace detail {
/// Self-energy surrogate for one leaf at unit scale: finite for s < dim.
inline double diagonal_constant(double s, int dim) {
  return std::exp2(s) / (static_cast<double>(dim) - s);
}
}  // namespace detail

/// Discrete Riesz s-energy: cross terms over distinct leaf centers plus a
/// fixed per-leaf diagonal surrogate. Approximates E_s(mu) within a factor
/// O(1) in s and dim. `length_scale` rescales all distances (homothety).
inline EnergyReport riesz_energy_discrete(const DyadicMeasure& mu, double s,
                                          double length_scale = 1.0) {
  if (!(s > 0.0 && s < static_cast<double>(mu.dim())))
    throw std::invalid_argument("riesz_energy_discrete: need 0 < s < dim");
  if (!(length_scale > 0.0))
    throw std::invalid_argument("riesz_energy_discrete: length_scale must be positive");

  std::vector<std::array<double, 2>> centers;
  std::vector<double> masses;
  centers.reserve(mu.leaves().size());
  for (auto& [idx, m] : mu.leaves()) {
    centers.push_back(mu.leaf_cube(idx).center());
    masses.push_back(m);
  }
  const std::size_t n = centers.size();
  const double leaf_side = std::ldexp(1.0, -mu.depth() * mu.T()) * length_scale;
  const double diag_term = detail::diagonal_constant(s, mu.dim()) * std::pow(leaf_side, -s);

  const std::size_t n_chunks = 64;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_chunks(n_chunks, [&](std::size_t c) {
    double acc = 0.0;
    for (std::size_t i = c; i < n; i += n_chunks) {
      double row = 0.0;
      for (std::size_t k = i + 1; k < n; ++k) {
        double dx = (centers[i][0] - centers[k][0]) * length_scale;
        double dy = (centers[i][1] - centers[k][1]) * length_scale;
        row += masses[k] * std::pow(dx * dx + dy * dy, -0.5 * s);
      }
      acc += 2.0 * masses[i] * row;     // unordered pair counted both ways
      acc += masses[i] * masses[i] * diag_term;
    }
    partial[c] = acc;
  });
  double value = 0.0;
  for (double p : partial) value += p;
  return {s, value, std::log2(value), "discrete-pairs"};
}

/// Closed-form log2-energy of a sigma-regular measure:
///   T * max_{j=1..ell} sum_{i<=j} ((s-1) - sigma_i).
/// Equals log2 E_s up to O(ell) + O_{d,s,T}(1).
inline double riesz_energy_regular_log(const Seq& sigma, double s, int T) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= sigma.size(); ++j)
    best = std::max(best, (s - 1.0) * static_cast<double>(j) - sigma.prefix(j));
  if (sigma.empty()) best = 0.0;
  return static_cast<double>(T) * best;
}

inline EnergyReport riesz_energy_regular(const Seq& sigma, double s, int T) {
  double lg = riesz_energy_regular_log(sigma, s, T);
  return {s, std::exp2(lg), lg, "regular-formula"};
}

/// Tree surrogate for the Frostman constant: max over all cubes of
/// mu(Q) / diam(Q)^s, within O(1) of the ball-based constant.
inline double frostman_constant(const DyadicMeasure& mu, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("frostman_constant: s must be positive");
  double best = 0.0;
  for (int j = 0; j <= mu.depth(); ++j) {
    const double diam = DyadicCube{mu.dim(), j, mu.T(), {0, 0}}.diameter();
    const double denom = std::pow(diam, s);
    for (auto& [idx, m] : mu.level(j)) best = std::max(best, m / denom);
  }
  return best;
}

}  // namespace falconer
