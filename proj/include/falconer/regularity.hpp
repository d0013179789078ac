#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "falconer/measure.hpp"
#include "falconer/seq.hpp"

namespace falconer {

/// sigma-regularity: every positive cube Q at level j satisfies
///   mu(Q) <= 2^{-T(sigma_j+1)} mu(parent) <= 2 mu(Q).
/// Comparisons carry a relative 1e-12 slack to absorb float noise.
inline bool is_regular(const DyadicMeasure& mu, const Seq& sigma) {
  if (sigma.size() != static_cast<std::size_t>(mu.depth()))
    throw std::invalid_argument("is_regular: sigma length must equal measure depth");
  const int T = mu.T();
  for (int j = 1; j <= mu.depth(); ++j) {
    const double a = std::exp2(-T * (sigma[j - 1] + 1.0));
    for (auto& [idx, m] : mu.level(j)) {
      if (m <= 0.0) continue;
      CubeIndex up{idx[0] >> T, idx[1] >> T};
      const double pm = mu.mass(j - 1, up);
      const double mid = a * pm;
      if (m > mid * (1.0 + 1e-12)) return false;
      if (mid > 2.0 * m * (1.0 + 1e-12)) return false;
    }
  }
  return true;
}

/// Smallest K >= 0 with sum_{i<=j} (alpha - sigma_i) <= K for all j.
inline double mass_decay_constant(const Seq& sigma, double alpha) {
  double k = 0.0;
  for (std::size_t j = 1; j <= sigma.size(); ++j)
    k = std::max(k, alpha * static_cast<double>(j) - sigma.prefix(j));
  return k;
}

/// Checks mu(B(x,r)) <= C 2^{KT} r^{1+alpha} over the test grid of balls
/// (centers at leaf centers, radii 2^{-jT}, j = 0..depth). Ball mass counts
/// a leaf fully when its center lies in the ball.
inline bool verify_mass_decay(const DyadicMeasure& mu, const Seq& sigma, double alpha,
                              double C) {
  if (!is_regular(mu, sigma))
    throw std::invalid_argument("verify_mass_decay: measure is not sigma-regular");
  const double K = mass_decay_constant(sigma, alpha);
  const double bound_scale = C * std::exp2(K * mu.T());
  std::vector<std::array<double, 2>> centers;
  std::vector<double> masses;
  centers.reserve(mu.leaves().size());
  for (auto& [idx, m] : mu.leaves()) {
    centers.push_back(mu.leaf_cube(idx).center());
    masses.push_back(m);
  }
  for (int j = 0; j <= mu.depth(); ++j) {
    const double r = std::ldexp(1.0, -j * mu.T());
    const double bound = bound_scale * std::pow(r, 1.0 + alpha);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double ball = 0.0;
      for (std::size_t i = 0; i < centers.size(); ++i) {
        double dx = centers[i][0] - centers[c][0];
        double dy = centers[i][1] - centers[c][1];
        if (dx * dx + dy * dy <= r * r) ball += masses[i];
      }
      if (ball > bound * (1.0 + 1e-12)) return false;
    }
  }
  return true;
}

/// One piece of the regular decomposition: a union of leaves, the mass it
/// carried in the parent measure, and the conditional measure with its
/// regularity sequence.
struct RegularClass {
  DyadicSet set;
  Seq sigma;
  double mass = 0.0;
  DyadicMeasure conditional;
};

namespace detail {

// Extracts one class from the remaining leaves: pick the heaviest
// sqrt(2)-width leaf-mass bucket, then make the branching counts exactly
// uniform per level (bottom-up count pigeonhole + trim to the 2^c
// heaviest children). Equal-width mass bucket + exact counts force every
// per-level conditional mass ratio into a factor-2 window, which is
// precisely the regularity sandwich.
inline std::vector<CubeIndex> extract_uniform_class(
    const std::map<CubeIndex, double>& remaining, int T, int depth) {
  if (remaining.empty()) return {};
  // 1. leaf-mass window of width sqrt(2): anchor a candidate window
  //    (M/sqrt2, M] at every distinct mass M and keep the one of maximal
  //    total mass. Anchoring (rather than fixed log-grid buckets) makes
  //    the choice invariant under global rescaling, so an extracted
  //    class's conditional re-extracts as a single whole class.
  std::vector<std::pair<double, CubeIndex>> by_mass;
  by_mass.reserve(remaining.size());
  for (auto& [idx, m] : remaining) by_mass.push_back({m, idx});
  std::sort(by_mass.begin(), by_mass.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<double> prefix(by_mass.size() + 1, 0.0);
  for (std::size_t i = 0; i < by_mass.size(); ++i) prefix[i + 1] = prefix[i] + by_mass[i].first;
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  std::size_t best_lo = 0, best_hi = 1, j = 0;
  double best_sum = -1.0;
  for (std::size_t i = 0; i < by_mass.size(); ++i) {
    if (i > 0 && by_mass[i].first == by_mass[i - 1].first) continue;
    if (j < i + 1) j = i + 1;
    const double cutoff = by_mass[i].first * inv_root2;
    while (j < by_mass.size() && by_mass[j].first > cutoff) ++j;
    double sum = prefix[j] - prefix[i];
    if (sum > best_sum) {
      best_sum = sum;
      best_lo = i;
      best_hi = j;
    }
  }

  std::vector<CubeIndex> leaves;
  leaves.reserve(best_hi - best_lo);
  for (std::size_t i = best_lo; i < best_hi; ++i) leaves.push_back(by_mass[i].second);

  for (int j = depth; j >= 1; --j) {
    // group current level-j survivors by their level-(j-1) parent
    const int up_shift = (depth - j + 1) * T;
    const int shift = (depth - j) * T;
    std::map<CubeIndex, std::map<CubeIndex, double>> children;  // parent -> child -> mass
    std::map<CubeIndex, std::vector<CubeIndex>> child_leaves;   // child -> leaves
    for (auto& leaf : leaves) {
      CubeIndex child{leaf[0] >> shift, leaf[1] >> shift};
      CubeIndex parent{leaf[0] >> up_shift, leaf[1] >> up_shift};
      children[parent][child] += remaining.at(leaf);
      child_leaves[child].push_back(leaf);
    }
    // pigeonhole parents on floor(log2(#children)), pick max-mass bucket
    std::map<int, double> count_bucket_mass;
    for (auto& [parent, chs] : children) {
      int c = static_cast<int>(std::floor(std::log2(static_cast<double>(chs.size()))));
      double pm = 0.0;
      for (auto& [child, cm] : chs) pm += cm;
      count_bucket_mass[c] += pm;
    }
    int best_c = count_bucket_mass.begin()->first;
    for (auto& [c, cm] : count_bucket_mass)
      if (cm > count_bucket_mass[best_c]) best_c = c;
    const std::size_t n_keep = std::size_t{1} << best_c;

    std::vector<CubeIndex> next_leaves;
    for (auto& [parent, chs] : children) {
      int c = static_cast<int>(std::floor(std::log2(static_cast<double>(chs.size()))));
      if (c != best_c) continue;
      // keep exactly n_keep children, heaviest first (index tie-break)
      std::vector<std::pair<double, CubeIndex>> ranked;
      ranked.reserve(chs.size());
      for (auto& [child, cm] : chs) ranked.push_back({cm, child});
      std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      for (std::size_t k = 0; k < n_keep && k < ranked.size(); ++k)
        for (auto& leaf : child_leaves[ranked[k].second]) next_leaves.push_back(leaf);
    }
    leaves = std::move(next_leaves);
  }
  return leaves;
}

// Regularity sequence of a conditional measure: sigma_j from the max
// per-level mass ratio. The construction guarantees the factor-2 window,
// so is_regular holds for the returned sigma.
inline Seq sigma_of_conditional(const DyadicMeasure& nu) {
  std::vector<double> sigma(nu.depth());
  const int T = nu.T();
  for (int j = 1; j <= nu.depth(); ++j) {
    double max_ratio = 0.0;
    for (auto& [idx, m] : nu.level(j)) {
      CubeIndex up{idx[0] >> T, idx[1] >> T};
      max_ratio = std::max(max_ratio, m / nu.mass(j - 1, up));
    }
    max_ratio = std::min(max_ratio, 1.0);
    sigma[j - 1] = -std::log2(max_ratio) / T - 1.0;
  }
  return Seq(std::move(sigma));
}

}  // namespace detail

/// Pigeonhole decomposition of a depth-ell measure into regular classes.
/// Produces pairwise disjoint leaf sets whose conditionals are
/// sigma-regular, with union mass >= 1 - 2^{-epsilon m} (m = T*ell) and
/// every kept class of mass >= 2^{-epsilon m} / (2 d T + 2)^ell (override
/// via min_class_mass).
inline std::vector<RegularClass> decompose(const DyadicMeasure& mu, double epsilon,
                                           std::optional<double> min_class_mass = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("decompose: epsilon must be in (0,1)");
  const int T = mu.T();
  const int d = mu.dim();
  const int depth = mu.depth();
  const double m = static_cast<double>(T) * depth;
  const double mass_target = std::exp2(-epsilon * m);
  const double threshold =
      min_class_mass.value_or(mass_target / std::pow(2.0 * d * T + 2.0, depth));
  const std::size_t max_classes =
      static_cast<std::size_t>(std::min(1e7, std::pow(2.0 * d * T + 2.0, depth)));

  std::map<CubeIndex, double> remaining = mu.leaves();
  double remaining_mass = 0.0;
  for (auto& [idx, mm] : remaining) remaining_mass += mm;

  std::vector<RegularClass> classes;
  double discarded = 0.0;
  std::size_t iterations = 0, iteration_cap = 1u << 20;
  while (remaining_mass > 0.0 && discarded + remaining_mass > mass_target &&
         iterations++ < iteration_cap) {
    auto leaves = detail::extract_uniform_class(remaining, T, depth);
    if (leaves.empty()) break;
    double class_mass = 0.0;
    for (auto& idx : leaves) class_mass += remaining.at(idx);
    if (class_mass >= threshold && classes.size() < max_classes) {
      std::set<CubeIndex> leaf_set(leaves.begin(), leaves.end());
      DyadicSet set(T, d, depth, std::move(leaf_set));
      DyadicMeasure conditional = restrict_normalize(mu, set);
      Seq sigma = detail::sigma_of_conditional(conditional);
      classes.push_back({std::move(set), std::move(sigma), class_mass, std::move(conditional)});
    } else {
      discarded += class_mass;
    }
    for (auto& idx : leaves) remaining.erase(idx);
    remaining_mass -= class_mass;
  }
  // heaviest classes first in the report
  std::sort(classes.begin(), classes.end(),
            [](const RegularClass& a, const RegularClass& b) { return a.mass > b.mass; });
  return classes;
}

}  // namespace falconer
