#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>
#include <string_view>

namespace hylent {

/// IEEE binary128 (~34 significant decimal digits).
using quad = boost::multiprecision::float128;

enum class Precision { Double, Quad };

/// Smallest supported arithmetic holding `digits` significant decimals.
/// Throws InvalidArgument when digits < 15 or digits > 33.
Precision precision_for_digits(int digits);

std::string_view to_string(Precision p);

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

/// Integer power by repeated squaring; negative exponents allowed.
template <class Real>
Real ipow(Real base, int exponent) {
  bool invert = exponent < 0;
  unsigned e = invert ? static_cast<unsigned>(-exponent) : static_cast<unsigned>(exponent);
  Real result = 1;
  while (e) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return invert ? Real(1) / result : result;
}

}  // namespace hylent
