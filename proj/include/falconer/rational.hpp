#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace falconer {

/// Exact rational arithmetic for the closed-form bound identities.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational(long long num, long long den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

}  // namespace falconer
