#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "falconer/measure.hpp"
#include "falconer/plfunction.hpp"
#include "falconer/seq.hpp"

namespace falconer {

/// Planar Cantor measure with exact sigma-regular branching: at each
/// level-j node, 2^{T(sigma_j+1)} children chosen uniformly at random
/// carry equal mass. Each 2^{T(sigma_j+1)} must already be an integer in
/// [1, 2^{2T}] (sigma_j on the 1/T grid), otherwise the branching ratio
/// cannot be realized exactly and the call is rejected.
inline DyadicMeasure cantor_regular(int T, int ell, const Seq& sigma, std::uint64_t seed,
                                    double epsilon = 0.1, double tau = 0.1) {
  if (sigma.size() != static_cast<std::size_t>(ell))
    throw std::invalid_argument("cantor_regular: sigma length must equal depth");
  std::vector<std::uint64_t> branch(ell);
  const std::uint64_t max_children = 1ull << (2 * T);
  for (int j = 0; j < ell; ++j) {
    double x = std::exp2(T * (sigma[j] + 1.0));
    double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, x) || r < 1.0 ||
        r > static_cast<double>(max_children))
      throw std::invalid_argument("cantor_regular: 2^{T(sigma_j+1)} is not an integer branching count");
    branch[j] = static_cast<std::uint64_t>(r);
  }
  std::mt19937_64 rng(seed);
  std::map<CubeIndex, double> leaves;
  const int tbits = T;
  std::vector<std::uint64_t> cell_pool(max_children);
  std::iota(cell_pool.begin(), cell_pool.end(), 0);

  auto rec = [&](auto&& self, CubeIndex idx, int level, double mass) -> void {
    if (level == ell) {
      leaves[idx] += mass;
      return;
    }
    std::vector<std::uint64_t> cells = cell_pool;
    std::shuffle(cells.begin(), cells.end(), rng);
    std::uint64_t n = branch[level];
    std::sort(cells.begin(), cells.begin() + static_cast<long>(n));  // deterministic order
    for (std::uint64_t k = 0; k < n; ++k) {
      std::uint64_t c = cells[k];
      CubeIndex child{(idx[0] << tbits) | (c >> T), (idx[1] << tbits) | (c & ((1ull << T) - 1))};
      self(self, child, level + 1, mass / static_cast<double>(n));
    }
  };
  rec(rec, {0, 0}, 0, 1.0);
  return DyadicMeasure(Params{T, epsilon, tau}, 2, ell, std::move(leaves));
}

/// Union of ~ r^{-s} squares of side r = 2^{-T ell} spread on a
/// ceil(sqrt(N)) x ceil(sqrt(N)) lattice over [0,1)^2, so pairwise
/// separations are ~ N^{-1/2} = r^{s/2}.
inline DyadicSet well_separated(int T, int ell, double s) {
  if (!(s > 1.0 && s < 2.0)) throw std::invalid_argument("well_separated: need 1 < s < 2");
  if (ell < 1) throw std::invalid_argument("well_separated: need ell >= 1");
  const double r = std::ldexp(1.0, -T * ell);
  const double n_real = std::round(std::pow(r, -s));
  if (n_real > std::ldexp(1.0, 2 * T * ell))
    throw std::invalid_argument("well_separated: N exceeds the grid capacity");
  const std::uint64_t n = static_cast<std::uint64_t>(n_real);
  const std::uint64_t side = static_cast<std::uint64_t>(std::ceil(std::sqrt(n_real)));
  const std::uint64_t cells = 1ull << (T * ell);
  if (side > cells)
    throw std::invalid_argument("well_separated: lattice finer than the dyadic grid");
  std::set<CubeIndex> leaves;
  std::uint64_t placed = 0;
  for (std::uint64_t gy = 0; gy < side && placed < n; ++gy) {
    for (std::uint64_t gx = 0; gx < side && placed < n; ++gx) {
      CubeIndex idx{gx * cells / side, gy * cells / side};
      // lattice spacing >= 1 cell, so snapped positions never collide
      leaves.insert(idx);
      ++placed;
    }
  }
  return DyadicSet(T, 2, ell, std::move(leaves));
}

/// Random planar measure satisfying mu(Q) <= 4 diam(Q)^s at every node:
/// top-down subdivision where each node's mass is split among a random
/// child subset under per-child caps.
inline DyadicMeasure random_frostman(int T, int ell, double s, std::uint64_t seed,
                                     double epsilon = 0.1, double tau = 0.1) {
  if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("random_frostman: need 0 < s <= 2");
  if (ell < 0) throw std::invalid_argument("random_frostman: bad depth");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const std::uint64_t max_children = 1ull << (2 * T);
  std::map<CubeIndex, double> leaves;
  std::vector<std::uint64_t> pool(max_children);
  std::iota(pool.begin(), pool.end(), 0);

  auto rec = [&](auto&& self, CubeIndex idx, int level, double mass) -> void {
    if (level == ell) {
      leaves[idx] += mass;
      return;
    }
    const double child_diam = std::sqrt(2.0) * std::ldexp(1.0, -(level + 1) * T);
    const double cap = 4.0 * std::pow(child_diam, s);
    std::uint64_t k_min = static_cast<std::uint64_t>(std::ceil(mass / cap - 1e-12));
    k_min = std::clamp<std::uint64_t>(k_min, 1, max_children);
    std::uniform_int_distribution<std::uint64_t> extra(k_min, std::min(max_children, 2 * k_min + 2));
    std::uint64_t k = extra(rng);
    std::vector<std::uint64_t> cells = pool;
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(k);
    std::sort(cells.begin(), cells.end());
    // random weights, then waterfill against the cap
    std::vector<double> w(k);
    for (auto& x : w) x = unit(rng);
    std::vector<double> alloc(k, 0.0);
    std::vector<bool> capped(k, false);
    double rem = mass;
    for (int round = 0; round < 64 && rem > 1e-15 * mass; ++round) {
      double wsum = 0.0;
      for (std::uint64_t i = 0; i < k; ++i)
        if (!capped[i]) wsum += w[i];
      if (wsum <= 0.0) break;
      double distributed = 0.0;
      for (std::uint64_t i = 0; i < k; ++i) {
        if (capped[i]) continue;
        double give = rem * w[i] / wsum;
        if (alloc[i] + give >= cap) {
          give = cap - alloc[i];
          capped[i] = true;
        }
        alloc[i] += give;
        distributed += give;
      }
      rem -= distributed;
      if (distributed <= 0.0) break;
    }
    // residual rounding mass goes to the child with most headroom
    if (rem > 0.0) {
      std::uint64_t best = 0;
      for (std::uint64_t i = 1; i < k; ++i)
        if (cap - alloc[i] > cap - alloc[best]) best = i;
      alloc[best] = std::min(cap, alloc[best] + rem);
    }
    for (std::uint64_t i = 0; i < k; ++i) {
      if (alloc[i] <= 0.0) continue;
      std::uint64_t c = cells[i];
      CubeIndex child{(idx[0] << T) | (c >> T), (idx[1] << T) | (c & ((1ull << T) - 1))};
      self(self, child, level + 1, alloc[i]);
    }
  };
  rec(rec, {0, 0}, 0, 1.0);
  // the waterfill conserves mass up to rounding; the constructor renormalizes
  return DyadicMeasure(Params{T, epsilon, tau}, 2, ell, std::move(leaves));
}

/// The extremal tent profile: x up to a peak at (u+1)/2, then 1+u-x.
/// Satisfies f >= ux and attains total drop (1-2u)/3.
inline PLFunction tent(double u) {
  if (!(u >= 0.0 && u <= 0.5)) throw std::invalid_argument("tent: u must be in [0, 1/2]");
  const double peak = (u + 1.0) / 2.0;
  return PLFunction({0.0, peak, 1.0}, {0.0, peak, u});
}

}  // namespace falconer
