#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace falconer {

/// A finite real sequence (sigma_1..sigma_L) with prefix-sum utilities.
/// Prefix sums are cached: prefix(0) = 0, prefix(j) = sigma_1 + ... + sigma_j.
class Seq {
 public:
  Seq() = default;
  explicit Seq(std::vector<double> entries) : entries_(std::move(entries)) {
    prefix_.resize(entries_.size() + 1, 0.0);
    for (std::size_t j = 0; j < entries_.size(); ++j)
      prefix_[j + 1] = prefix_[j] + entries_[j];
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double operator[](std::size_t i) const { return entries_.at(i); }  // 0-based
  const std::vector<double>& entries() const { return entries_; }

  double prefix(std::size_t j) const {
    if (j >= prefix_.size()) throw std::invalid_argument("Seq::prefix: index out of range");
    return prefix_[j];
  }

  bool in_unit_band(double tol = 0.0) const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [tol](double x) { return x >= -1.0 - tol && x <= 1.0 + tol; });
  }

  Seq truncated(std::size_t len) const {
    if (len > entries_.size()) throw std::invalid_argument("Seq::truncated: too long");
    return Seq(std::vector<double>(entries_.begin(), entries_.begin() + len));
  }

 private:
  std::vector<double> entries_;
  std::vector<double> prefix_;
};

}  // namespace falconer
