#include "hylent/kernels.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "hylent/errors.hpp"

namespace hylent {

namespace {

KernelTermList build_legendre_coeff(int n, int ell) {
  // Sack's closed form:
  //   C_l^(n) = [(-n/2)_l / (1/2)_l] r_<^l r_>^(n-l)
  //             * 2F1(l - n/2, -(n+1)/2; l + 3/2; (r_</r_>)^2)
  // Both Pochhammer arguments are half-integers or integers, so the
  // hypergeometric series terminates for every n >= 0.
  Rational prefactor = 1;
  for (int i = 0; i < ell; ++i) prefactor *= Rational(2 * i - n, 2 * i + 1);
  KernelTermList out;
  if (prefactor == 0) return out;
  Rational term = prefactor;
  for (int j = 0; term != 0; ++j) {
    out.push_back({term, ell + 2 * j, n - ell - 2 * j});
    term *= Rational((2 * ell - n + 2 * j) * (2 * j - n - 1), 2 * (2 * ell + 3 + 2 * j) * (j + 1));
  }
  return out;
}

std::shared_mutex& kernel_mutex() {
  static std::shared_mutex m;
  return m;
}

template <class Real>
Real to_real(const Rational& q) {
  return static_cast<Real>(boost::multiprecision::numerator(q)) /
         static_cast<Real>(boost::multiprecision::denominator(q));
}

constexpr std::array<std::array<int, 4>, 24> make_permutations() {
  std::array<std::array<int, 4>, 24> out{};
  std::array<int, 4> p{0, 1, 2, 3};
  int idx = 0;
  // Lexicographic enumeration (Heap's algorithm is not constexpr-friendly here).
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          p = {a, b, c, d};
          out[static_cast<std::size_t>(idx++)] = p;
        }
  return out;
}

constexpr auto kPermutations = make_permutations();
// Variable indices of the ring pairs (1,3), (1,4), (2,3), (2,4).
constexpr std::array<std::array<int, 2>, 4> kRingPairs{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};

}  // namespace

const KernelTermList& legendre_coeff(int n, int ell) {
  if (n < 0) throw InvalidArgument(fmt::format("negative correlation power {} is not supported", n));
  if (ell < 0) throw InvalidArgument(fmt::format("negative Legendre index {}", ell));
  static std::map<std::pair<int, int>, KernelTermList> table;
  const auto key = std::make_pair(n, ell);
  {
    std::shared_lock lock(kernel_mutex());
    if (auto it = table.find(key); it != table.end()) return it->second;
  }
  KernelTermList built = build_legendre_coeff(n, ell);
  std::unique_lock lock(kernel_mutex());
  return table.try_emplace(key, std::move(built)).first->second;
}

template <class Real>
std::span<const KernelTermR<Real>> kernel_terms(int n, int ell) {
  static std::map<std::pair<int, int>, std::vector<KernelTermR<Real>>> table;
  static std::shared_mutex mutex;
  const auto key = std::make_pair(n, ell);
  {
    std::shared_lock lock(mutex);
    if (auto it = table.find(key); it != table.end()) return it->second;
  }
  const KernelTermList& exact = legendre_coeff(n, ell);
  std::vector<KernelTermR<Real>> converted;
  converted.reserve(exact.size());
  for (const auto& t : exact) converted.push_back({to_real<Real>(t.coeff), t.p_less, t.p_greater});
  std::unique_lock lock(mutex);
  return table.try_emplace(key, std::move(converted)).first->second;
}

template <class Real>
std::span<const KernelTermR<Real>> unit_kernel() {
  static const std::vector<KernelTermR<Real>> unit{{Real(1), 0, 0}};
  return unit;
}

template <class Real>
Real evaluate_kernel(std::span<const KernelTermR<Real>> kernel, Real r_a, Real r_b) {
  const Real lo = r_a < r_b ? r_a : r_b;
  const Real hi = r_a < r_b ? r_b : r_a;
  Real sum = 0;
  for (const auto& t : kernel) sum += t.coeff * ipow(lo, t.p_less) * ipow(hi, t.p_greater);
  return sum;
}

template <class Real>
Real complete_integral(int p, Real gamma) {
  if (p < 0) throw DivergentIntegral(fmt::format("complete integral with power {} diverges", p));
  return AuxFunctionTable<Real>::instance().factorial(p) / ipow(gamma, p + 1);
}

template <class Real>
Real nested_tail_integral(int p, Real gamma, Real x) {
  using std::exp;
  if (!(gamma > 0)) throw InvalidArgument("tail integral needs a positive rate");
  if (x < 0) throw InvalidArgument("tail integral needs a non-negative lower limit");
  if (p >= 0) {
    const auto& aux = AuxFunctionTable<Real>::instance();
    Real sum = 0;
    for (int q = 0; q <= p; ++q) sum += aux.factorial(p) / aux.factorial(q) * ipow(x, q) / ipow(gamma, p - q + 1);
    return exp(-gamma * x) * sum;
  }
  if (x == 0) throw DivergentIntegral(fmt::format("tail integral of t^{} from 0 diverges", p));
  return ipow(x, p + 1) * boost::math::expint(static_cast<unsigned>(-p), gamma * x);
}

template <class Real>
Real nested_head_integral(int p, Real gamma, Real x) {
  if (p < 0) throw DivergentIntegral(fmt::format("head integral of t^{} from 0 diverges", p));
  if (!(gamma > 0)) throw InvalidArgument("head integral needs a positive rate");
  if (x <= 0) return Real(0);
  return complete_integral(p, gamma) * boost::math::gamma_p(Real(p + 1), gamma * x);
}

template <class Real>
const AuxFunctionTable<Real>& AuxFunctionTable<Real>::instance() {
  static const AuxFunctionTable table;
  return table;
}

template <class Real>
AuxFunctionTable<Real>::AuxFunctionTable() {
  const int max_n = std::numeric_limits<Real>::max_exponent10 > 400 ? 1700 : 170;
  factorials_.resize(static_cast<std::size_t>(max_n) + 1);
  factorials_[0] = 1;
  for (int i = 1; i <= max_n; ++i) factorials_[static_cast<std::size_t>(i)] = factorials_[static_cast<std::size_t>(i) - 1] * i;
}

template <class Real>
Real AuxFunctionTable<Real>::gamma_ratio(int b, int a) const {
  Real r = 1;
  if (b >= a) {
    for (int t = a; t < b; ++t) r *= t;
  } else {
    for (int t = b; t < a; ++t) r *= t;
    r = Real(1) / r;
  }
  return r;
}

template <class Real>
Real ordered_integral(std::span<const int> a, std::span<const Real> c) {
  using std::exp;
  using std::log;
  const std::size_t d = a.size();
  if (d == 0 || c.size() != d) throw InvalidArgument("ordered_integral: mismatched dimensions");
  std::vector<long> s(d);
  long running = 0;
  Real lambda = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(c[i] > 0)) throw InvalidArgument("ordered_integral: rates must be positive");
    running += a[i] + 1;
    if (running <= 0) {
      throw DivergentIntegral(fmt::format("ordered integral diverges at the origin (level {})", i));
    }
    s[i] = running;
    lambda += c[i];
  }
  const auto& aux = AuxFunctionTable<Real>::instance();
  if (d == 1) return complete_integral(a[0], c[0]);

  // Rates normalized to unit sum. Partial integral j has the form
  //   exp(-C_j y) * sum_k u_{j,k} y^(s_j + k) / Gamma(s_j + k + 1),
  // with every u positive. The static prefactors collapse to
  //   Gamma(s_{d-1}) / (s_0 s_1 ... s_{d-2}) * lambda^(-s_{d-1}).
  std::vector<Real> chat(d), cum(d);
  Real acc = 0;
  for (std::size_t i = 0; i < d; ++i) {
    chat[i] = c[i] / lambda;
    acc += chat[i];
    cum[i] = acc;
  }
  std::vector<Real> u(d - 1, Real(0));
  std::vector<Real> rho(d, Real(1));  // rho_j(k) = R_j(k) / R_j(0)
  const Real eps = epsilon<Real>();
  const Real contraction = Real(1) - cum[d - 2];
  Real sum = 0;
  Real previous = 0;
  int quiet = 0;
  constexpr long kMaxTerms = 400000;
  for (long k = 0; k < kMaxTerms; ++k) {
    u[0] = k == 0 ? Real(1) : u[0] * chat[0];
    for (std::size_t j = 1; j + 1 < d; ++j) u[j] = (k == 0 ? Real(0) : cum[j] * u[j]) + u[j - 1] * rho[j];
    const Real term = u[d - 2] * rho[d - 1];
    sum += term;
    if (k > 0 && term <= previous && term < Real(0.01) * eps * contraction * sum) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    previous = term;
    for (std::size_t j = 1; j < d; ++j) rho[j] *= Real(s[j] + k) / Real(s[j - 1] + k + 1);
    if (k + 1 == kMaxTerms) throw NumericalError("ordered_integral: series did not converge");
  }
  Real prefactor = 1;
  for (std::size_t j = 0; j + 1 < d; ++j) prefactor /= Real(s[j]);
  const long total = s[d - 1];
  if (total - 1 <= aux.max_factorial()) {
    prefactor *= aux.factorial(static_cast<int>(total - 1)) / ipow(lambda, static_cast<int>(total));
  } else {
    using boost::math::lgamma;
    prefactor *= exp(lgamma(Real(total)) - Real(total) * log(lambda));
  }
  return prefactor * sum;
}

template <class Real>
std::uint64_t OrderedIntegralCache<Real>::pack(const std::array<int, 4>& a) {
  std::uint64_t key = 0;
  for (int v : a) {
    if (v < -32768 || v > 32767) throw InvalidArgument("ordered integral exponent out of range");
    key = (key << 16) | static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
  }
  return key;
}

template <class Real>
Real OrderedIntegralCache<Real>::unit_rate(const std::array<int, 4>& a) {
  const std::uint64_t key = pack(a);
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  static const std::array<Real, 4> ones{Real(1), Real(1), Real(1), Real(1)};
  const Real value = ordered_integral<Real>(a, ones);
  std::unique_lock lock(mutex_);
  values_.try_emplace(key, value);
  return value;
}

template <class Real>
std::size_t OrderedIntegralCache<Real>::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

template <class Real>
Real simplex_radial_integral(const std::array<int, 4>& powers, const RingKernels<Real>& kernels,
                             const std::array<Real, 4>& rates, OrderedIntegralCache<Real>* cache) {
  for (const auto& k : kernels)
    if (k.empty()) return Real(0);
  if (cache && !(rates[0] == rates[1] && rates[0] == rates[2] && rates[0] == rates[3])) {
    throw InvalidArgument("simplex_radial_integral: the unit-rate cache needs equal rates");
  }
  Real total = 0;
  std::array<int, 4> rank{};
  std::array<int, 4> sorted{};
  std::array<Real, 4> sorted_rates{};
  long dimension = 0;
  for (const auto& perm : kPermutations) {
    for (int r = 0; r < 4; ++r) rank[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] = r;
    for (int r = 0; r < 4; ++r) sorted_rates[static_cast<std::size_t>(r)] = rates[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
    // Which end of each pair is the smaller coordinate on this ordering.
    std::array<bool, 4> first_smaller{};
    for (std::size_t e = 0; e < 4; ++e) first_smaller[e] = rank[static_cast<std::size_t>(kRingPairs[e][0])] < rank[static_cast<std::size_t>(kRingPairs[e][1])];

    Real ordering_sum = 0;
    for (const auto& t0 : kernels[0])
      for (const auto& t1 : kernels[1])
        for (const auto& t2 : kernels[2])
          for (const auto& t3 : kernels[3]) {
            std::array<int, 4> exps{powers[0] + 2, powers[1] + 2, powers[2] + 2, powers[3] + 2};
            const std::array<const KernelTermR<Real>*, 4> chosen{&t0, &t1, &t2, &t3};
            for (std::size_t e = 0; e < 4; ++e) {
              const auto& pr = kRingPairs[e];
              const int lo = first_smaller[e] ? pr[0] : pr[1];
              const int hi = first_smaller[e] ? pr[1] : pr[0];
              exps[static_cast<std::size_t>(lo)] += chosen[e]->p_less;
              exps[static_cast<std::size_t>(hi)] += chosen[e]->p_greater;
            }
            for (int r = 0; r < 4; ++r) sorted[static_cast<std::size_t>(r)] = exps[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
            const Real coeff = t0.coeff * t1.coeff * t2.coeff * t3.coeff;
            if (cache) {
              ordering_sum += coeff * cache->unit_rate(sorted);
              dimension = 4 + sorted[0] + sorted[1] + sorted[2] + sorted[3];
            } else {
              ordering_sum += coeff * ordered_integral<Real>(sorted, sorted_rates);
            }
          }
    total += ordering_sum;
  }
  if (cache) total *= ipow(rates[0], static_cast<int>(-dimension));
  return total;
}

#define HYLENT_INSTANTIATE_KERNELS(Real)                                                                       \
  template std::span<const KernelTermR<Real>> kernel_terms<Real>(int, int);                                    \
  template std::span<const KernelTermR<Real>> unit_kernel<Real>();                                             \
  template Real evaluate_kernel<Real>(std::span<const KernelTermR<Real>>, Real, Real);                         \
  template Real complete_integral<Real>(int, Real);                                                            \
  template Real nested_tail_integral<Real>(int, Real, Real);                                                   \
  template Real nested_head_integral<Real>(int, Real, Real);                                                   \
  template class AuxFunctionTable<Real>;                                                                       \
  template Real ordered_integral<Real>(std::span<const int>, std::span<const Real>);                           \
  template class OrderedIntegralCache<Real>;                                                                   \
  template Real simplex_radial_integral<Real>(const std::array<int, 4>&, const RingKernels<Real>&,              \
                                              const std::array<Real, 4>&, OrderedIntegralCache<Real>*);

HYLENT_INSTANTIATE_KERNELS(double)
HYLENT_INSTANTIATE_KERNELS(quad)

}  // namespace hylent
