#pragma once

#include <utility>
#include <vector>

#include "hylent/basis.hpp"
#include "hylent/linalg.hpp"
#include "hylent/real.hpp"
#include "hylent/system.hpp"

namespace hylent {

/// coeff * r1^i r2^j r12^k, with the common factor exp(-alpha (r1 + r2)) implied.
template <class Real>
struct Monomial {
  Real coeff;
  int i = 0;
  int j = 0;
  int k = 0;
};

/// H applied to exp(-alpha (r1 + r2)) r1^i r2^j r12^k for an S state.
/// Every returned power is >= -1.
template <class Real>
std::vector<Monomial<Real>> apply_h(int i, int j, int k, const HamiltonianParams& params, Real alpha);

/// H applied to the unsymmetrized part r12^kk r1^mm r2^nn of a basis term.
template <class Real>
std::vector<Monomial<Real>> symbolic_apply_h(const BasisTerm& term, const HamiltonianParams& params, Real alpha) {
  return apply_h<Real>(term.mm, term.nn, term.kk, params, alpha);
}

/// i2 at unit rates over the cube [-1, max_power]^3. Equal rates c scale as
/// c^-(i+j+k+6).
template <class Real>
class UnitI2Table {
 public:
  explicit UnitI2Table(int max_power);
  int max_power() const { return max_power_; }
  const Real& operator()(int i, int j, int k) const;

 private:
  int max_power_;
  int stride_;
  std::vector<Real> values_;
};

template <class Real>
struct MatrixPair {
  Matrix<Real> S;
  Matrix<Real> H;
  /// Largest |<i|Hj> - <j|Hi>| relative to the largest |H_ij| before
  /// symmetrization.
  double max_asymmetry = 0.0;
};

template <class Real>
MatrixPair<Real> assemble(const std::vector<BasisTerm>& terms, const HamiltonianParams& params, Real alpha,
                          int threads = 1, const UnitI2Table<Real>* table = nullptr);

/// <phi_a|phi_b> and <phi_a|H phi_b> for two symmetrized terms, with H applied
/// to phi_b only (no symmetrization).
template <class Real>
std::pair<Real, Real> matrix_element(const BasisTerm& a, const BasisTerm& b, const HamiltonianParams& params,
                                     Real alpha);

template <class Real>
struct GroundState {
  Real energy;
  std::vector<Real> coeffs;
  double condition_estimate = 0.0;
};

/// Lowest root of H c = E S c, with c^T S c = 1 and the largest |c_i| positive.
/// Throws IllConditionedBasis when S is not numerically positive definite.
/// The condition estimate costs a second diagonalization; skip it inside
/// alpha scans.
template <class Real>
GroundState<Real> ground_state(const MatrixPair<Real>& mats, bool estimate_condition = true);

/// Spectral condition number of S after unit-diagonal scaling.
template <class Real>
double condition_estimate(const Matrix<Real>& s);

template <class Real>
struct SolveResult {
  Real energy;
  std::vector<Real> coeffs;
  double alpha = 1.0;
  double condition_estimate = 0.0;
  int omega = 0;
  std::vector<BasisTerm> terms;
  HamiltonianParams params;
  int evaluations = 0;
};

/// Fixed-alpha solve.
template <class Real>
SolveResult<Real> solve_at(int omega, const HamiltonianParams& params, double alpha, int threads = 1);

struct AlphaBracket {
  double lo = 0.5;
  double hi = 4.0;
};

/// Bracket that holds the optimum for the presets at every omega used here.
AlphaBracket default_bracket(const HamiltonianParams& params);

struct OptimizeOptions {
  double alpha_tol = 1e-7;
  int scan_points = 16;
  int threads = 1;
};

/// Coarse scan of E(alpha) over the bracket followed by Brent refinement.
/// Throws BracketError when the lowest scanned energy sits on an end point.
template <class Real>
SolveResult<Real> optimize_alpha(int omega, const HamiltonianParams& params, AlphaBracket bracket,
                                 const OptimizeOptions& options = {});

}  // namespace hylent
