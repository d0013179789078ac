#pragma once

#include <stdexcept>

namespace falconer {

/// Global scale parameters: cubes live in base 2^T, epsilon drives the
/// decomposition mass budget, tau the partition gap constraint.
struct Params {
  int T = 1;
  double epsilon = 0.1;
  double tau = 0.1;

  void validate() const {
    if (T < 1) throw std::invalid_argument("Params: T must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("Params: epsilon must be in (0,1)");
    if (!(tau > 0.0 && tau < 0.5))
      throw std::invalid_argument("Params: tau must be in (0,1/2)");
  }
};

}  // namespace falconer
