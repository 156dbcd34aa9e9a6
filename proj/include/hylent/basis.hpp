#pragma once

#include <compare>
#include <vector>

namespace hylent {

/// One symmetrized Hylleraas function
///   exp(-alpha (r1 + r2)) r12^kk (r1^mm r2^nn + r2^mm r1^nn),  mm <= nn.
struct BasisTerm {
  int kk = 0;  ///< power of r12
  int mm = 0;  ///< power of r1 (smaller of the two one-electron powers)
  int nn = 0;  ///< power of r2

  int degree() const { return kk + mm + nn; }
  friend auto operator<=>(const BasisTerm&, const BasisTerm&) = default;
};

/// All (kk, mm, nn) with kk + mm + nn <= omega and mm <= nn, ordered by
/// total degree, then kk, then mm. The list for omega - 1 is a prefix of the
/// list for omega.
std::vector<BasisTerm> enumerate_terms(int omega);

/// Closed count of enumerate_terms(omega).
int term_count(int omega);

struct BasisSet {
  int omega = 0;
  double alpha = 1.0;
  std::vector<BasisTerm> terms;

  static BasisSet make(int omega, double alpha);
  std::size_t size() const { return terms.size(); }
};

/// Pointwise value of the symmetrized term. Throws DomainError when
/// (r1, r2, r12) is not a triangle.
double evaluate_term(const BasisTerm& term, double alpha, double r1, double r2, double r12);

}  // namespace hylent
