#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace falconer {

/// Piecewise-linear function on [0, a], stored as breakpoints + values.
/// Construction enforces the 1-Lipschitz bound (|slope| <= 1 + 1e-12).
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
      throw std::invalid_argument("PLFunction: need matching breakpoint/value lists, size >= 2");
    if (xs_.front() != 0.0)
      throw std::invalid_argument("PLFunction: breakpoints must start at 0");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      double dx = xs_[i] - xs_[i - 1];
      if (dx <= 0.0) throw std::invalid_argument("PLFunction: breakpoints must increase");
      if (std::abs(ys_[i] - ys_[i - 1]) > dx * (1.0 + 1e-12))
        throw std::invalid_argument("PLFunction: exceeds the 1-Lipschitz bound");
    }
  }

  double domain_end() const { return xs_.back(); }
  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

  double operator()(double x) const {
    if (x < xs_.front() - 1e-12 || x > xs_.back() + 1e-12)
      throw std::invalid_argument("PLFunction: argument outside domain");
    x = std::clamp(x, xs_.front(), xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return ys_[i] + t * (ys_[i + 1] - ys_[i]);
  }

  /// Exact minimum of f over [lo, hi] (endpoints plus interior breakpoints).
  double min_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double m = std::min((*this)(lo), (*this)(hi));
    auto it = std::upper_bound(xs_.begin(), xs_.end(), lo);
    for (; it != xs_.end() && *it < hi; ++it)
      m = std::min(m, ys_[static_cast<std::size_t>(it - xs_.begin())]);
    return m;
  }

  double max_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    double m = std::max((*this)(lo), (*this)(hi));
    auto it = std::upper_bound(xs_.begin(), xs_.end(), lo);
    for (; it != xs_.end() && *it < hi; ++it)
      m = std::max(m, ys_[static_cast<std::size_t>(it - xs_.begin())]);
    return m;
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace falconer
