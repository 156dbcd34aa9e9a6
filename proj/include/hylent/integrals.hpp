#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hylent/kernels.hpp"
#include "hylent/real.hpp"

namespace hylent {

/// int int r1^i r2^j r12^k exp(-a r1 - b r2) d^3r1 d^3r2.
struct TwoElectronKey {
  int i = 0;
  int j = 0;
  int k = 0;
  double a = 1.0;
  double b = 1.0;
};

/// Closed-form two-electron integral through the triangle-coordinate measure
/// 8 pi^2 r1 r2 r12 dr1 dr2 dr12. Supports i, j, k >= -1 (the Coulomb and
/// kinetic terms produce single inverse powers of each coordinate).
template <class Real>
Real i2(int i, int j, int k, Real a, Real b);

template <class Real>
Real i2(const TwoElectronKey& key) {
  return i2<Real>(key.i, key.j, key.k, Real(key.a), Real(key.b));
}

/// Integer part of a ring integral: powers of r1..r4 and of the four cross
/// distances r13, r14, r23, r24 (in that order). The r12 and r34 powers of the
/// general four-electron integral are always zero here.
struct RingPowers {
  std::array<int, 4> p{};
  std::array<int, 4> n{};

  /// Sum of all powers plus 12: the length dimension of the integral.
  int dimension() const;
  bool all_n_odd() const;
  friend bool operator==(const RingPowers&, const RingPowers&) = default;
};

struct RingIntegralKey {
  RingPowers powers;
  std::array<double, 4> rates{1.0, 1.0, 1.0, 1.0};

  /// Throws InvalidArgument on negative powers or non-positive rates.
  void validate() const;
  std::string to_string() const;
};

/// The eight relabelings of (r1, r2, r3, r4) that map the ring
/// 1-3, 1-4, 2-3, 2-4 onto itself. Element `g` sends variable v to
/// kRingSymmetries[g][v].
extern const std::array<std::array<int, 4>, 8> kRingSymmetries;

RingIntegralKey apply_symmetry(const RingIntegralKey& key, int g);
RingPowers apply_symmetry(const RingPowers& powers, int g);

/// Lexicographically smallest image under kRingSymmetries; valid as a memo key
/// when all rates are equal.
RingPowers canonical(const RingPowers& powers);

template <class Real>
struct RingIntegralResult {
  Real value = 0;
  int max_ell = 0;            ///< last Legendre index summed
  Real tail_estimate = 0;     ///< geometric tail added after truncation
  bool terminated = true;     ///< exact finite sum (some n even)
};

struct RingSeriesOptions {
  double tol = 1e-13;
  int ell_max = 200;
};

/// Ring integral as the Legendre series
///   sum_l (4 pi)^4 / (2l+1)^3 W_l.
/// The series stops exactly at l = min(even n)/2 when any cross power is
/// even; otherwise it is truncated after three consecutive terms below
/// tol * |partial| and a geometric tail estimate is added. Throws
/// TruncationError if ell_max is reached.
template <class Real>
RingIntegralResult<Real> i4_ring(const RingPowers& powers, const std::array<Real, 4>& rates,
                                 const RingSeriesOptions& options = {},
                                 OrderedIntegralCache<Real>* ordered_cache = nullptr);

template <class Real>
RingIntegralResult<Real> i4_ring(const RingIntegralKey& key, const RingSeriesOptions& options = {}) {
  key.validate();
  return i4_ring<Real>(key.powers,
                       {Real(key.rates[0]), Real(key.rates[1]), Real(key.rates[2]), Real(key.rates[3])}, options);
}

/// Memo of ring integrals with all four rates equal. Values are stored at unit
/// rate and rescaled by rate^-(dimension) on lookup, so one cache serves every
/// nonlinear exponent. Keys are canonicalized under kRingSymmetries.
template <class Real>
class RingIntegralCache {
 public:
  explicit RingIntegralCache(RingSeriesOptions options = {}) : options_(options) {}

  /// memoized_i4: value of the ring integral with every rate equal to `rate`.
  Real get(const RingPowers& powers, const Real& rate);
  /// Unit-rate value of a key already canonicalized; computes on a miss.
  Real unit_value(const RingPowers& canonical_powers);

  /// Computes every missing key on `threads` workers.
  void ensure(std::span<const RingPowers> canonical_keys, int threads);

  bool contains(const RingPowers& canonical_powers) const;
  std::size_t size() const;
  std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  int max_ell() const { return max_ell_.load(std::memory_order_relaxed); }
  /// Largest |tail estimate / value| over all stored keys.
  double worst_relative_tail() const;
  const RingSeriesOptions& options() const { return options_; }
  OrderedIntegralCache<Real>& ordered_cache() { return ordered_; }

  static std::uint64_t pack(const RingPowers& powers);

  /// Lookup that bypasses counters; used by tight accumulation loops.
  const Real* find_packed(std::uint64_t packed) const;

 private:
  Real compute_and_store(const RingPowers& canonical_powers);

  RingSeriesOptions options_;
  OrderedIntegralCache<Real> ordered_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, Real> values_;
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<int> max_ell_{0};
  std::atomic<double> worst_tail_{0.0};
};

}  // namespace hylent
