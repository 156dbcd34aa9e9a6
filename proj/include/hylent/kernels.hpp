#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hylent/real.hpp"

namespace hylent {

using Rational = boost::multiprecision::cpp_rational;

/// coeff * r_<^p_less * r_>^p_greater
struct KernelTerm {
  Rational coeff;
  int p_less = 0;
  int p_greater = 0;
};

/// Radial coefficient C_l^(n)(r_<, r_>) of
///   r_ab^n = sum_l C_l^(n)(r_<, r_>) P_l(cos theta_ab),
/// with no (2l+1) factor folded in. Every term satisfies p_less + p_greater = n
/// and p_less >= l.
using KernelTermList = std::vector<KernelTerm>;

/// Exact coefficient list for n >= 0, l >= 0. Throws InvalidArgument for
/// n < 0. Results are cached; the returned reference stays valid for the life
/// of the process.
const KernelTermList& legendre_coeff(int n, int ell);

/// Same list with coefficients rounded to working precision.
template <class Real>
struct KernelTermR {
  Real coeff;
  int p_less;
  int p_greater;
};

template <class Real>
std::span<const KernelTermR<Real>> kernel_terms(int n, int ell);

/// The l-independent unit kernel used for an uncorrelated pair.
template <class Real>
std::span<const KernelTermR<Real>> unit_kernel();

template <class Real>
Real evaluate_kernel(std::span<const KernelTermR<Real>> kernel, Real r_a, Real r_b);

/// x-independent integral  int_0^inf t^p exp(-gamma t) dt = p!/gamma^(p+1), p >= 0.
template <class Real>
Real complete_integral(int p, Real gamma);

/// Upper tail  int_x^inf t^p exp(-gamma t) dt.
/// p >= 0: finite recursion; p <= -1: x^(p+1) E_{-p}(gamma x).
/// Throws DivergentIntegral for p < 0 with x == 0.
template <class Real>
Real nested_tail_integral(int p, Real gamma, Real x);

/// Lower part  int_0^x t^p exp(-gamma t) dt for p >= 0.
template <class Real>
Real nested_head_integral(int p, Real gamma, Real x);

/// Factorials and incomplete-gamma values at one precision.
template <class Real>
class AuxFunctionTable {
 public:
  static const AuxFunctionTable& instance();

  /// n! for 0 <= n <= max_factorial().
  const Real& factorial(int n) const { return factorials_.at(static_cast<std::size_t>(n)); }
  int max_factorial() const { return static_cast<int>(factorials_.size()) - 1; }

  /// Gamma(b) / Gamma(a) for positive integers a, b.
  Real gamma_ratio(int b, int a) const;

 private:
  AuxFunctionTable();
  std::vector<Real> factorials_;
};

/// Nested integral over the ordered cone 0 < x_1 < x_2 < ... < x_d:
///   int prod_i x_i^a_i exp(-c_i x_i) dx.
/// Requires c_i > 0 and sum_{i<=j} (a_i + 1) > 0 for every j (convergence at
/// the origin); throws DivergentIntegral otherwise. Evaluated through the
/// confluent power series of the innermost-out partial integrals, whose terms
/// are all positive.
template <class Real>
Real ordered_integral(std::span<const int> a, std::span<const Real> c);

/// Memo of ordered_integral over four variables with all rates equal to one.
/// Concurrent lookups are allowed; concurrent duplicate computation of a key
/// is harmless.
template <class Real>
class OrderedIntegralCache {
 public:
  Real unit_rate(const std::array<int, 4>& a);
  std::size_t size() const;
  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }

 private:
  static std::uint64_t pack(const std::array<int, 4>& a);
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, Real> values_;
  std::atomic<std::uint64_t> hits_{0};
};

/// Kernels bound to the pairs (1,3), (1,4), (2,3), (2,4), in that order.
template <class Real>
using RingKernels = std::array<std::span<const KernelTermR<Real>>, 4>;

/// Four-fold radial integral
///   int prod_i r_i^(powers_i + 2) * C13 C14 C23 C24 * exp(-sum rates_i r_i) dr,
/// summed over the 24 orderings of (r1..r4). When `cache` is given all rates
/// must be equal.
template <class Real>
Real simplex_radial_integral(const std::array<int, 4>& powers, const RingKernels<Real>& kernels,
                             const std::array<Real, 4>& rates, OrderedIntegralCache<Real>* cache = nullptr);

}  // namespace hylent
