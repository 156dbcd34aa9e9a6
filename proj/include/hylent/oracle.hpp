#pragma once

#include <cstdint>
#include <utility>

#include "hylent/integrals.hpp"
#include "hylent/solver.hpp"

namespace hylent {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Counter-based generator: the n-th draw of (seed, stream) is a pure hash,
/// so any chunking of the work reproduces the same numbers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  /// Uniform on (0, 1].
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Samples per independent stream; results do not depend on the thread count.
inline constexpr std::uint64_t kMcChunk = 1u << 15;

/// Ring integral by importance sampling: radius i is drawn from
/// r^(p_i+2) exp(-c_i r), directions uniformly; the estimator averages the
/// product of cross distances.
McEstimate mc_i4_ring(const RingIntegralKey& key, std::uint64_t samples, std::uint64_t seed, int threads = 1);

/// Nested adaptive quadrature of i2 in triangle coordinates.
double quad_i2(const TwoElectronKey& key, double rel_tol = 1e-11);

/// Direct 12-dimensional estimate of Tr rho^2 from pointwise wave-function
/// values (coefficients are used as given, without renormalization).
template <class Real>
McEstimate mc_tr_rho2(const SolveResult<Real>& solve, std::uint64_t samples, std::uint64_t seed, int threads = 1);

/// Powers uniform in [0, max_power], rates uniform in [rate_low, rate_high].
RingIntegralKey random_ring_key(CounterRng& rng, int max_power = 4, double rate_low = 1.0, double rate_high = 4.0);

/// Ring integral with all four cross powers even, by expanding each
/// r_ij^(2q) as a polynomial in cos(theta_ij) and integrating radii in closed
/// form. Independent of the hypergeometric kernels and ordered integrals.
quad exact_even_ring(const RingIntegralKey& key);

/// Legendre coefficient of r12^n by Gauss projection over cos(theta).
double quad_legendre_coeff(int n, int ell, double r1, double r2);

/// <phi_a|phi_b> and <phi_a|H|phi_b> by triangle-coordinate quadrature, with
/// the kinetic and mass-polarization parts in first-derivative (gradient) form.
std::pair<double, double> quad_matrix_element(const BasisTerm& a, const BasisTerm& b, const HamiltonianParams& params,
                                              double alpha, double rel_tol = 1e-11);

}  // namespace hylent
