#pragma once

#include <array>
#include <cstdint>

#include "hylent/integrals.hpp"
#include "hylent/solver.hpp"

namespace hylent {

struct EntropyReport {
  double norm = 0.0;
  double tr_rho2 = 0.0;
  double linear_entropy = 0.0;
  std::uint64_t i4_calls = 0;
  std::uint64_t cache_hits = 0;
  int max_ell_used = 0;
  /// Conservative bound on the error from truncated Legendre tails.
  double tail_bound = 0.0;
  /// sum |terms| / |Tr rho^2|; the cancellation factor of the expansion.
  double cancellation = 0.0;
  std::size_t distinct_keys = 0;
};

/// One unsymmetrized factor r1^k r2^m r12^n of the wave function.
struct Factor {
  int k = 0;
  int m = 0;
  int n = 0;
};

/// The sixteen ring integrals of the purity expansion for the product
/// Psi(r1,r3) Psi(r2,r3) Psi(r2,r4) Psi(r1,r4) of symmetrized terms a, b, c, d.
/// Bit 3 of the index exchanges a, bit 2 exchanges d, bit 1 b and bit 0 c.
std::array<RingPowers, 16> purity_terms(const Factor& a, const Factor& b, const Factor& c, const Factor& d);

struct EntropyOptions {
  int threads = 1;
  /// Group coefficient pairs sharing a partial key before the double sum.
  bool grouped = true;
  /// Exchange the roles of the two dummy coordinates r3 and r4.
  bool swap_dummies = false;
};

/// c^T S c; equals 1 for a normalized solve.
template <class Real>
Real tr_rho_red(const SolveResult<Real>& solve);

template <class Real>
EntropyReport tr_rho2(const SolveResult<Real>& solve, RingIntegralCache<Real>& cache,
                      const EntropyOptions& options = {});

inline double linear_entropy(double tr_rho2) { return 1.0 - tr_rho2; }

}  // namespace hylent
