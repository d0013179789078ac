#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "falconer/rational.hpp"

namespace falconer {

// Closed-form dimension bound functions in u = s - 1. Both evaluate for any
// numeric type with field operations; instantiate with Rational for exact
// arithmetic.

/// Pinned distance set bound, valid on u in [0, 0.04]; phi(0) = 29/42.
template <typename R>
R phi(const R& u) {
  R num = R(29) + R(19) * u + R(6) * u * u + R(8) * u * u * u - R(8) * u * u * u * u;
  R den = R(42) - R(15) * u + R(30) * u * u - R(12) * u * u * u;
  return num / den;
}

/// Full distance set / lower box dimension bound, valid on u in [0, 0.06];
/// chi(0) = 40/57.
template <typename R>
R chi(const R& u) {
  R num = R(8) * (R(1) + u) * (R(5) - R(3) * u + R(4) * u * u);
  R den = R(57) - R(30) * u + R(48) * u * u;
  return num / den;
}

enum class Variant { c142, c257 };

inline bool in_variant_range(double u, Variant v) {
  return v == Variant::c142 ? (u >= 0.0 && u <= 0.04) : (u >= 0.0 && u <= 0.06);
}

/// eta for the given variant. Defined so that the identities
///   phi = 2(1+u)/3 + eta_142 = xi_142 - (1-2u) eta_142,
///   chi = 2(1+u)/3 + eta_257 = xi_257 - (1-4u) eta_257
/// hold exactly as rational functions.
template <typename R>
R corollary_eta(const R& u, Variant v) {
  if (v == Variant::c142) {
    R num = R(1) + u - R(4) * u * u - R(4) * u * u * u;
    R den = R(42) - R(15) * u + R(30) * u * u - R(12) * u * u * u;
    return num / den;
  }
  R num = R(2) * (R(1) + u) * (R(1) - R(2) * u);
  R den = R(57) - R(30) * u + R(48) * u * u;
  return num / den;
}

template <typename R>
R corollary_xi(const R& u, Variant v) {
  R eta = corollary_eta(u, v);
  if (v == Variant::c142) return phi(u) + (R(1) - R(2) * u) * eta;
  R num = R(4) - R(4) * u - R(8) * u * u - eta * (R(9) + R(30) * u - R(24) * u * u);
  return num / (R(5) * (R(1) - R(2) * u));
}

/// t1 = (1+u)/3 - eta ( (1+u)/(1-2u) - (1-u) ).
template <typename R>
R corollary_t1(const R& u, Variant v) {
  R eta = corollary_eta(u, v);
  return (R(1) + u) / R(3) - eta * ((R(1) + u) / (R(1) - R(2) * u) - (R(1) - u));
}

struct CorollaryParams {
  double eta = 0.0;
  double xi = 0.0;
  double t1 = 0.0;
};

inline CorollaryParams corollary_params(double u, Variant v) {
  if (!in_variant_range(u, v))
    throw std::invalid_argument("corollary_params: u outside the corollary's range");
  return {corollary_eta(u, v), corollary_xi(u, v), corollary_t1(u, v)};
}

/// All derived bound quantities at u = s - 1.
struct BoundParams {
  double u = 0.0;
  double s = 1.0;
  double phi = 0.0;
  double chi = 0.0;
  double eta_phi = 0.0, xi_phi = 0.0, t1_phi = 0.0;
  double eta_chi = 0.0, xi_chi = 0.0, t1_chi = 0.0;

  /// ell' = floor(xi * ell) for the requested variant.
  long ell_prime(long ell, Variant v) const {
    double xi = v == Variant::c142 ? xi_phi : xi_chi;
    return static_cast<long>(std::floor(xi * static_cast<double>(ell)));
  }
};

inline BoundParams bound_params(double u) {
  BoundParams p;
  p.u = u;
  p.s = 1.0 + u;
  p.phi = phi(u);
  p.chi = chi(u);
  p.eta_phi = corollary_eta(u, Variant::c142);
  p.xi_phi = corollary_xi(u, Variant::c142);
  p.t1_phi = corollary_t1(u, Variant::c142);
  p.eta_chi = corollary_eta(u, Variant::c257);
  p.xi_chi = corollary_xi(u, Variant::c257);
  p.t1_chi = corollary_t1(u, Variant::c257);
  return p;
}

/// Prior bounds for comparison.
inline double bound_ks_pinned(double s) { return 2.0 * s / 3.0; }
inline double bound_liu(double s) { return 4.0 * s / 3.0 - 2.0 / 3.0; }
inline double bound_ks_full() { return 2.0 / 3.0 + 1.0 / 54.0; }

struct BoundRow {
  double s = 1.0;
  double ks_pinned = 0.0;
  double liu = 0.0;
  double ks_full = 0.0;
  std::optional<double> new_pinned;  // phi(s-1) where defined
  std::optional<double> new_full;    // chi(s-1) where defined
  double best_pinned = 0.0;
  double best_full = 0.0;
};

/// One comparison row at exponent s in [1, 1.5). Outside each theorem's
/// validity range the new bound is reported as absent rather than evaluated.
inline BoundRow compare_bounds(double s) {
  if (!(s >= 1.0 && s < 1.5))
    throw std::invalid_argument("compare_bounds: s must be in [1, 1.5)");
  BoundRow row;
  row.s = s;
  row.ks_pinned = bound_ks_pinned(s);
  row.liu = bound_liu(s);
  row.ks_full = bound_ks_full();
  double u = s - 1.0;
  if (u <= 0.04) row.new_pinned = phi(u);
  if (u <= 0.06) row.new_full = chi(u);
  row.best_pinned = std::max(row.ks_pinned, row.liu);
  if (row.new_pinned) row.best_pinned = std::max(row.best_pinned, *row.new_pinned);
  // a pinned lower bound is also a full-distance-set lower bound
  row.best_full = std::max({row.ks_full, row.best_pinned});
  if (row.new_full) row.best_full = std::max(row.best_full, *row.new_full);
  return row;
}

/// Bisection root of fA - fB on [lo, hi] to 1e-9. Requires a sign change.
inline double crossover(const std::function<double(double)>& fA,
                        const std::function<double(double)>& fB, double lo, double hi) {
  double flo = fA(lo) - fB(lo);
  double fhi = fA(hi) - fB(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("crossover: no sign change on the bracket");
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    double fm = fA(mid) - fB(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace falconer
