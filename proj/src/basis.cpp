#include "hylent/basis.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hylent/errors.hpp"

namespace hylent {

std::vector<BasisTerm> enumerate_terms(int omega) {
  if (omega < 0) throw InvalidArgument(fmt::format("omega must be non-negative, got {}", omega));
  std::vector<BasisTerm> out;
  for (int degree = 0; degree <= omega; ++degree) {
    for (int kk = 0; kk <= degree; ++kk) {
      const int rest = degree - kk;
      for (int mm = 0; 2 * mm <= rest; ++mm) out.push_back({kk, mm, rest - mm});
    }
  }
  return out;
}

int term_count(int omega) {
  // Degree d contributes floor((d+2)^2/4) terms; the quarter-square sum closes.
  const long n = omega + 2;
  return static_cast<int>(n * (n + 2) * (2 * n - 1) / 24);
}

BasisSet BasisSet::make(int omega, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument(fmt::format("alpha must be positive, got {}", alpha));
  return {omega, alpha, enumerate_terms(omega)};
}

double evaluate_term(const BasisTerm& t, double alpha, double r1, double r2, double r12) {
  if (r1 < 0 || r2 < 0 || r12 < 0) throw DomainError("negative distance");
  const double slack = 1e-12 * (r1 + r2 + r12);
  if (r12 > r1 + r2 + slack || r12 < std::abs(r1 - r2) - slack) {
    throw DomainError(fmt::format("({}, {}, {}) violates the triangle inequality", r1, r2, r12));
  }
  const double radial = std::exp(-alpha * (r1 + r2)) * std::pow(r12, t.kk);
  return radial * (std::pow(r1, t.mm) * std::pow(r2, t.nn) + std::pow(r2, t.mm) * std::pow(r1, t.nn));
}

}  // namespace hylent
