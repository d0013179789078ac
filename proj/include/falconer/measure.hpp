#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "falconer/cube.hpp"
#include "falconer/params.hpp"

namespace falconer {

namespace detail {
inline CubeIndex index_at_level(const CubeIndex& leaf, int depth, int level, int T) {
  int shift = (depth - level) * T;
  return {leaf[0] >> shift, leaf[1] >> shift};
}
}  // namespace detail

/// A union of level-`depth` dyadic cubes.
class DyadicSet {
 public:
  DyadicSet() = default;
  DyadicSet(int T, int dim, int depth, std::set<CubeIndex> leaves)
      : T_(T), dim_(dim), depth_(depth), leaves_(std::move(leaves)) {
    if (T_ < 1 || (dim_ != 1 && dim_ != 2) || depth_ < 0)
      throw std::invalid_argument("DyadicSet: bad parameters");
    if (depth_ * T_ > 62) throw std::invalid_argument("DyadicSet: depth too large");
  }

  int T() const { return T_; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }
  const std::set<CubeIndex>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool contains(const CubeIndex& idx) const { return leaves_.count(idx) > 0; }

  DyadicCube cube(const CubeIndex& idx) const { return {dim_, depth_, T_, idx}; }

 private:
  int T_ = 1;
  int dim_ = 2;
  int depth_ = 0;
  std::set<CubeIndex> leaves_;
};

/// A probability measure defined down to resolution 2^{-T*depth}, stored as
/// leaf masses (uniform within each leaf). Internal-node masses are the exact
/// sums of their children; all levels are cached at construction.
class DyadicMeasure {
 public:
  DyadicMeasure() = default;

  DyadicMeasure(Params params, int dim, int depth, std::map<CubeIndex, double> leaf_masses)
      : params_(params), dim_(dim), depth_(depth) {
    params_.validate();
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("DyadicMeasure: dim must be 1 or 2");
    if (depth_ < 0 || depth_ * params_.T > 62)
      throw std::invalid_argument("DyadicMeasure: bad depth");
    const std::uint64_t grid = (depth_ * params_.T >= 63)
                                   ? ~0ull
                                   : (1ull << (depth_ * params_.T));
    double total = 0.0;
    for (auto& [idx, m] : leaf_masses) {
      if (m < 0.0) throw std::invalid_argument("DyadicMeasure: negative mass");
      if (idx[0] >= grid || (dim_ == 2 && idx[1] >= grid))
        throw std::invalid_argument("DyadicMeasure: leaf index out of range");
      if (dim_ == 1 && idx[1] != 0)
        throw std::invalid_argument("DyadicMeasure: dim-1 leaf with nonzero y index");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("DyadicMeasure: leaf masses must sum to 1");
    // drop exact zeros; normalize only when the sum is visibly off so that
    // already-normalized masses round-trip bit-exactly
    const bool renorm = std::abs(total - 1.0) > 1e-12;
    levels_.assign(depth_ + 1, {});
    for (auto& [idx, m] : leaf_masses) {
      if (m > 0.0) levels_[depth_][idx] = renorm ? m / total : m;
    }
    if (levels_[depth_].empty())
      throw std::invalid_argument("DyadicMeasure: measure has no mass");
    for (int j = depth_; j > 0; --j) {
      for (auto& [idx, m] : levels_[j]) {
        CubeIndex up{idx[0] >> params_.T, idx[1] >> params_.T};
        levels_[j - 1][up] += m;
      }
    }
  }

  const Params& params() const { return params_; }
  int T() const { return params_.T; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }

  const std::map<CubeIndex, double>& leaves() const { return levels_[depth_]; }
  const std::map<CubeIndex, double>& level(int j) const {
    if (j < 0 || j > depth_) throw std::invalid_argument("DyadicMeasure::level: bad level");
    return levels_[j];
  }

  /// Mass of the level-j cube with the given index (0 if absent).
  double mass(int j, const CubeIndex& idx) const {
    auto& lv = level(j);
    auto it = lv.find(idx);
    return it == lv.end() ? 0.0 : it->second;
  }

  DyadicCube cube(int j, const CubeIndex& idx) const { return {dim_, j, params_.T, idx}; }
  DyadicCube leaf_cube(const CubeIndex& idx) const { return cube(depth_, idx); }

  /// Checks the tree consistency invariant (children sum to parent within
  /// relative 1e-12). Construction guarantees it; exposed for loaded data.
  bool consistent(double rel_tol = 1e-12) const {
    for (int j = 1; j <= depth_; ++j) {
      std::map<CubeIndex, double> sums;
      for (auto& [idx, m] : levels_[j])
        sums[detail::index_at_level(idx, j, j - 1, params_.T)] += m;
      for (auto& [idx, m] : levels_[j - 1]) {
        double s = sums.count(idx) ? sums[idx] : 0.0;
        if (std::abs(s - m) > rel_tol * std::max(1.0, std::abs(m))) return false;
      }
    }
    return true;
  }

 private:
  Params params_{};
  int dim_ = 2;
  int depth_ = 0;
  std::vector<std::map<CubeIndex, double>> levels_;  // levels_[j]: level-j masses
};

/// R_ell(mu): the measure that agrees with mu on all cubes of level <= ell.
inline DyadicMeasure coarsen(const DyadicMeasure& mu, int ell) {
  if (ell < 0 || ell > mu.depth())
    throw std::invalid_argument("coarsen: target depth must be in [0, depth]");
  return DyadicMeasure(mu.params(), mu.dim(), ell, mu.level(ell));
}

/// R_ell(A) for an explicit set of leaf cubes (possibly deeper than ell).
inline DyadicSet regularize_set(const DyadicSet& a, int ell) {
  if (ell < 0) throw std::invalid_argument("regularize_set: bad level");
  if (ell >= a.depth()) {
    if (ell == a.depth()) return a;
    // refining: every leaf splits into all its descendants
    std::set<CubeIndex> leaves;
    int shift = (ell - a.depth()) * a.T();
    if (ell * a.T() > 62) throw std::invalid_argument("regularize_set: level too deep");
    std::uint64_t n = 1ull << shift;
    for (auto& idx : a.leaves())
      for (std::uint64_t dx = 0; dx < n; ++dx) {
        if (a.dim() == 1) {
          leaves.insert({(idx[0] << shift) | dx, 0});
        } else {
          for (std::uint64_t dy = 0; dy < n; ++dy)
            leaves.insert({(idx[0] << shift) | dx, (idx[1] << shift) | dy});
        }
      }
    return DyadicSet(a.T(), a.dim(), ell, std::move(leaves));
  }
  std::set<CubeIndex> leaves;
  for (auto& idx : a.leaves())
    leaves.insert(detail::index_at_level(idx, a.depth(), ell, a.T()));
  return DyadicSet(a.T(), a.dim(), ell, std::move(leaves));
}

/// R_ell(points): minimal union of level-ell cubes covering the points.
template <std::size_t D>
DyadicSet regularize_points(const std::vector<std::array<double, D>>& pts, int ell, int T) {
  std::set<CubeIndex> leaves;
  for (auto& p : pts) leaves.insert(cube_of_point(p, ell, T).index);
  return DyadicSet(T, static_cast<int>(D), ell, std::move(leaves));
}

/// mu_A: normalized restriction of mu to the leaves of A.
inline DyadicMeasure restrict_normalize(const DyadicMeasure& mu, const DyadicSet& a) {
  if (a.depth() != mu.depth() || a.T() != mu.T() || a.dim() != mu.dim())
    throw std::invalid_argument("restrict_normalize: set/measure geometry mismatch");
  std::map<CubeIndex, double> kept;
  double total = 0.0;
  for (auto& idx : a.leaves()) {
    auto it = mu.leaves().find(idx);
    if (it != mu.leaves().end() && it->second > 0.0) {
      kept[idx] = it->second;
      total += it->second;
    }
  }
  if (total <= 0.0) throw std::domain_error("restrict_normalize: mu(A) = 0");
  for (auto& [idx, m] : kept) m /= total;
  return DyadicMeasure(mu.params(), mu.dim(), mu.depth(), std::move(kept));
}

/// supp_d(mu): leaves of positive mass (the whole ancestor chain is then
/// positive automatically, masses being sums of leaf masses).
inline DyadicSet dyadic_support(const DyadicMeasure& mu) {
  std::set<CubeIndex> leaves;
  for (auto& [idx, m] : mu.leaves())
    if (m > 0.0) leaves.insert(idx);
  return DyadicSet(mu.T(), mu.dim(), mu.depth(), std::move(leaves));
}

/// N(A, ell): number of level-ell cubes meeting A.
inline std::size_t box_count(const DyadicSet& a, int ell) {
  if (ell < 0) throw std::invalid_argument("box_count: bad level");
  if (ell >= a.depth()) {
    if (ell == a.depth()) return a.size();
    // each leaf meets exactly 2^{dim*(ell-depth)*T} finer cubes
    std::uint64_t per = 1ull << (a.dim() * (ell - a.depth()) * a.T());
    return a.size() * per;
  }
  std::set<CubeIndex> coarse;
  for (auto& idx : a.leaves())
    coarse.insert(detail::index_at_level(idx, a.depth(), ell, a.T()));
  return coarse.size();
}

}  // namespace falconer
