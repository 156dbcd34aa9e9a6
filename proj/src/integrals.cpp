#include "hylent/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fmt/format.h>

#include "hylent/errors.hpp"
#include "hylent/parallel.hpp"

namespace hylent {

namespace {

constexpr std::array<std::array<int, 2>, 4> kPairs{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};

int pair_index(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 4; ++e)
    if (kPairs[static_cast<std::size_t>(e)][0] == a && kPairs[static_cast<std::size_t>(e)][1] == b) return e;
  return -1;
}

std::array<std::array<int, 4>, 8> ring_automorphisms() {
  std::array<std::array<int, 4>, 8> out{};
  std::array<int, 4> g{0, 1, 2, 3};
  std::size_t count = 0;
  do {
    bool ok = true;
    for (const auto& pr : kPairs) ok = ok && pair_index(g[static_cast<std::size_t>(pr[0])], g[static_cast<std::size_t>(pr[1])]) >= 0;
    if (ok) out[count++] = g;
  } while (std::next_permutation(g.begin(), g.end()));
  return out;
}

// Sum over the two half-ordered regions:
//   int_0^inf x^alpha e^{-a x} int_x^inf y^beta e^{-b y} dy dx
//     = sum_t beta!/t! (alpha+t)! / (b^(beta-t+1) (a+b)^(alpha+t+1)).
template <class Real>
Real half_ordered(int alpha, int beta, const Real& a, const Real& b) {
  const auto& aux = AuxFunctionTable<Real>::instance();
  const Real ab = a + b;
  Real sum = 0;
  for (int t = 0; t <= beta; ++t) {
    sum += aux.factorial(beta) / aux.factorial(t) * aux.factorial(alpha + t) / (ipow(b, beta - t + 1) * ipow(ab, alpha + t + 1));
  }
  return sum;
}

}  // namespace

const std::array<std::array<int, 4>, 8> kRingSymmetries = ring_automorphisms();

int RingPowers::dimension() const {
  int d = 12;
  for (int v : p) d += v;
  for (int v : n) d += v;
  return d;
}

bool RingPowers::all_n_odd() const {
  return std::all_of(n.begin(), n.end(), [](int v) { return v % 2 != 0; });
}

void RingIntegralKey::validate() const {
  for (int v : powers.p)
    if (v < 0) throw InvalidArgument("ring integral: negative one-electron power");
  for (int v : powers.n)
    if (v < 0) throw InvalidArgument("ring integral: negative correlation power");
  for (double r : rates)
    if (!(r > 0.0)) throw InvalidArgument("ring integral: rates must be positive");
}

std::string RingIntegralKey::to_string() const {
  return fmt::format("p=({},{},{},{}) n13={} n14={} n23={} n24={} rates=({},{},{},{})", powers.p[0], powers.p[1],
                     powers.p[2], powers.p[3], powers.n[0], powers.n[1], powers.n[2], powers.n[3], rates[0], rates[1],
                     rates[2], rates[3]);
}

RingPowers apply_symmetry(const RingPowers& in, int g) {
  const auto& perm = kRingSymmetries.at(static_cast<std::size_t>(g));
  RingPowers out;
  for (std::size_t v = 0; v < 4; ++v) out.p[static_cast<std::size_t>(perm[v])] = in.p[v];
  for (std::size_t e = 0; e < 4; ++e) {
    const int target = pair_index(perm[static_cast<std::size_t>(kPairs[e][0])], perm[static_cast<std::size_t>(kPairs[e][1])]);
    out.n[static_cast<std::size_t>(target)] = in.n[e];
  }
  return out;
}

RingIntegralKey apply_symmetry(const RingIntegralKey& in, int g) {
  const auto& perm = kRingSymmetries.at(static_cast<std::size_t>(g));
  RingIntegralKey out;
  out.powers = apply_symmetry(in.powers, g);
  for (std::size_t v = 0; v < 4; ++v) out.rates[static_cast<std::size_t>(perm[v])] = in.rates[v];
  return out;
}

RingPowers canonical(const RingPowers& powers) {
  RingPowers best = powers;
  auto as_tuple = [](const RingPowers& r) { return std::tie(r.p, r.n); };
  for (int g = 1; g < 8; ++g) {
    RingPowers image = apply_symmetry(powers, g);
    if (as_tuple(image) < as_tuple(best)) best = image;
  }
  return best;
}

template <class Real>
Real i2(int i, int j, int k, Real a, Real b) {
  if (i < -1 || j < -1) throw InvalidArgument(fmt::format("i2: one-electron powers must be >= -1 (got {}, {})", i, j));
  if (k < -1) throw InvalidArgument(fmt::format("i2: correlation power {} < -1 is not supported", k));
  if (!(a > 0) || !(b > 0)) throw InvalidArgument("i2: rates must be positive");
  // Inner r12 integral: [(r1+r2)^K - |r1-r2|^K] / K with K = k + 2; only the
  // odd binomial terms survive, leaving non-negative monomials on each
  // half-ordered region.
  const auto& aux = AuxFunctionTable<Real>::instance();
  const int K = k + 2;
  Real sum = 0;
  for (int q = 1; q <= K; q += 2) {
    const Real binom = aux.factorial(K) / (aux.factorial(q) * aux.factorial(K - q));
    sum += binom * (half_ordered<Real>(i + 1 + q, j + 1 + K - q, a, b) + half_ordered<Real>(j + 1 + q, i + 1 + K - q, b, a));
  }
  const Real p = pi<Real>();
  return 8 * p * p * 2 * sum / Real(K);
}

template <class Real>
RingIntegralResult<Real> i4_ring(const RingPowers& powers, const std::array<Real, 4>& rates,
                                 const RingSeriesOptions& options, OrderedIntegralCache<Real>* ordered_cache) {
  using std::abs;
  for (int v : powers.p)
    if (v < 0) throw InvalidArgument("i4_ring: negative one-electron power");
  for (int v : powers.n)
    if (v < 0) throw InvalidArgument("i4_ring: negative correlation power");
  if (!(options.tol > 0)) throw InvalidArgument("i4_ring: tolerance must be positive");

  int exact_stop = -1;
  for (int v : powers.n)
    if (v % 2 == 0) exact_stop = exact_stop < 0 ? v / 2 : std::min(exact_stop, v / 2);

  const Real four_pi = 4 * pi<Real>();
  const Real angular = four_pi * four_pi * four_pi * four_pi;
  auto term_at = [&](int ell) {
    RingKernels<Real> kernels;
    for (std::size_t e = 0; e < 4; ++e) kernels[e] = kernel_terms<Real>(powers.n[e], ell);
    const Real w = simplex_radial_integral<Real>(powers.p, kernels, rates, ordered_cache);
    return angular / ipow(Real(2 * ell + 1), 3) * w;
  };

  RingIntegralResult<Real> out;
  if (exact_stop >= 0) {
    for (int ell = 0; ell <= exact_stop; ++ell) out.value += term_at(ell);
    out.max_ell = exact_stop;
    out.terminated = true;
    return out;
  }

  out.terminated = false;
  Real partial = 0;
  Real previous = 0;
  int quiet = 0;
  for (int ell = 0; ell <= options.ell_max; ++ell) {
    const Real term = term_at(ell);
    partial += term;
    quiet = abs(term) < Real(options.tol) * abs(partial) ? quiet + 1 : 0;
    if (quiet >= 3) {
      Real ratio = previous != 0 ? abs(term / previous) : Real(0);
      if (ratio >= 1) ratio = Real(0.5);
      out.tail_estimate = term * ratio / (1 - ratio);
      out.value = partial + out.tail_estimate;
      out.max_ell = ell;
      return out;
    }
    previous = term;
  }
  const double tail = to_double(previous);
  throw TruncationError(fmt::format("ring integral Legendre series not converged by l = {}", options.ell_max),
                        to_double(partial), tail);
}

template <class Real>
std::uint64_t RingIntegralCache<Real>::pack(const RingPowers& r) {
  std::uint64_t key = 0;
  for (int v : r.p) {
    if (v < 0 || v > 255) throw InvalidArgument("ring cache: power out of range");
    key = (key << 8) | static_cast<std::uint64_t>(v);
  }
  for (int v : r.n) {
    if (v < 0 || v > 255) throw InvalidArgument("ring cache: power out of range");
    key = (key << 8) | static_cast<std::uint64_t>(v);
  }
  return key;
}

template <class Real>
const Real* RingIntegralCache<Real>::find_packed(std::uint64_t packed) const {
  std::shared_lock lock(mutex_);
  auto it = values_.find(packed);
  return it == values_.end() ? nullptr : &it->second;
}

template <class Real>
bool RingIntegralCache<Real>::contains(const RingPowers& canonical_powers) const {
  return find_packed(pack(canonical_powers)) != nullptr;
}

template <class Real>
std::size_t RingIntegralCache<Real>::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

template <class Real>
double RingIntegralCache<Real>::worst_relative_tail() const {
  return worst_tail_.load(std::memory_order_relaxed);
}

template <class Real>
Real RingIntegralCache<Real>::compute_and_store(const RingPowers& key) {
  static const std::array<Real, 4> ones{Real(1), Real(1), Real(1), Real(1)};
  const auto result = i4_ring<Real>(key, ones, options_, &ordered_);
  int seen = max_ell_.load(std::memory_order_relaxed);
  while (result.max_ell > seen && !max_ell_.compare_exchange_weak(seen, result.max_ell)) {
  }
  if (result.value != 0) {
    using std::abs;
    const double rel = to_double(abs(result.tail_estimate / result.value));
    double worst = worst_tail_.load(std::memory_order_relaxed);
    while (rel > worst && !worst_tail_.compare_exchange_weak(worst, rel)) {
    }
  }
  std::unique_lock lock(mutex_);
  values_.try_emplace(pack(key), result.value);
  return result.value;
}

template <class Real>
Real RingIntegralCache<Real>::unit_value(const RingPowers& key) {
  calls_.fetch_add(1, std::memory_order_relaxed);
  if (const Real* v = find_packed(pack(key))) {
    hits_.fetch_add(1, std::memory_order_relaxed);
    return *v;
  }
  return compute_and_store(key);
}

template <class Real>
Real RingIntegralCache<Real>::get(const RingPowers& powers, const Real& rate) {
  if (!(rate > 0)) throw InvalidArgument("ring cache: rate must be positive");
  return unit_value(canonical(powers)) * ipow(rate, -powers.dimension());
}

template <class Real>
void RingIntegralCache<Real>::ensure(std::span<const RingPowers> keys, int threads) {
  std::vector<RingPowers> missing;
  for (const auto& k : keys)
    if (!contains(k)) missing.push_back(k);
  // Expensive all-odd keys first so the workers finish together.
  std::stable_partition(missing.begin(), missing.end(), [](const RingPowers& r) { return r.all_n_odd(); });
  parallel_for(missing.size(), threads, [&](std::size_t i) { compute_and_store(missing[i]); });
}

#define HYLENT_INSTANTIATE_INTEGRALS(Real)                                                                     \
  template Real i2<Real>(int, int, int, Real, Real);                                                           \
  template RingIntegralResult<Real> i4_ring<Real>(const RingPowers&, const std::array<Real, 4>&,              \
                                                  const RingSeriesOptions&, OrderedIntegralCache<Real>*);     \
  template class RingIntegralCache<Real>;

HYLENT_INSTANTIATE_INTEGRALS(double)
HYLENT_INSTANTIATE_INTEGRALS(quad)

}  // namespace hylent
