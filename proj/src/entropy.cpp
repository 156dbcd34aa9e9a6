#include "hylent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <fmt/format.h>

#include "hylent/errors.hpp"
#include "hylent/parallel.hpp"

namespace hylent {
namespace {

Factor exchanged(const Factor& f) { return {f.m, f.k, f.n}; }

// Neumaier compensated sum.
template <class Real>
struct Accumulator {
  Real sum = 0;
  Real carry = 0;
  void add(const Real& x) {
    using std::abs;
    const Real t = sum + x;
    if (abs(sum) >= abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  Real value() const { return sum + carry; }
};

// Psi(r1,r3) Psi(r2,r3) Psi(r2,r4) Psi(r1,r4) with each factor already
// oriented: k sits on the electron 1/2 coordinate, m on the dummy r3/r4.
RingPowers ring_key(const Factor& a, const Factor& b, const Factor& c, const Factor& d, bool swap_dummies) {
  RingPowers r;
  if (!swap_dummies) {
    r.p = {a.k + d.k, b.k + c.k, a.m + b.m, c.m + d.m};
    r.n = {a.n, d.n, b.n, c.n};
  } else {
    // Same integral with r3 and r4 renamed.
    r.p = {a.k + d.k, b.k + c.k, c.m + d.m, a.m + b.m};
    r.n = {d.n, a.n, c.n, b.n};
  }
  return r;
}

// Unsymmetrized factors with merged coefficients: each symmetrized term
// contributes r1^mm r2^nn and r1^nn r2^mm.
template <class Real>
std::vector<std::pair<Factor, Real>> merged_factors(const SolveResult<Real>& solve) {
  std::map<std::array<int, 3>, Real> merged;
  for (std::size_t t = 0; t < solve.terms.size(); ++t) {
    const auto& term = solve.terms[t];
    merged[{term.mm, term.nn, term.kk}] += solve.coeffs[t];
    merged[{term.nn, term.mm, term.kk}] += solve.coeffs[t];
  }
  std::vector<std::pair<Factor, Real>> out;
  for (const auto& [key, c] : merged)
    if (c != 0) out.push_back({Factor{key[0], key[1], key[2]}, c});
  return out;
}

template <class Real>
struct Scales {
  std::vector<Real> by_dimension;
  Scales(Real rate, int max_dim) : by_dimension(static_cast<std::size_t>(max_dim + 1)) {
    const Real inv = 1 / rate;
    by_dimension[0] = 1;
    for (int d = 1; d <= max_dim; ++d) by_dimension[d] = by_dimension[d - 1] * inv;
  }
};

// One side of the grouped double sum: a pair of factors (first, second)
// reduced to what the ring key depends on.
struct PairKey {
  int k_sum, n_first, n_second, m_first, m_second;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

}  // namespace

std::array<RingPowers, 16> purity_terms(const Factor& a, const Factor& b, const Factor& c, const Factor& d) {
  std::array<RingPowers, 16> out;
  for (int bits = 0; bits < 16; ++bits) {
    const Factor fa = (bits & 8) ? exchanged(a) : a;
    const Factor fd = (bits & 4) ? exchanged(d) : d;
    const Factor fb = (bits & 2) ? exchanged(b) : b;
    const Factor fc = (bits & 1) ? exchanged(c) : c;
    out[bits] = ring_key(fa, fb, fc, fd, false);
  }
  return out;
}

template <class Real>
Real tr_rho_red(const SolveResult<Real>& solve) {
  const auto& terms = solve.terms;
  const Real rate = 2 * Real(solve.alpha);
  Real sum = 0;
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = 0; b < terms.size(); ++b) {
      const auto& x = terms[a];
      const auto& y = terms[b];
      const Real s = i2<Real>(x.mm + y.mm, x.nn + y.nn, x.kk + y.kk, rate, rate) +
                     i2<Real>(x.mm + y.nn, x.nn + y.mm, x.kk + y.kk, rate, rate);
      sum += solve.coeffs[a] * solve.coeffs[b] * 2 * s;
    }
  return sum;
}

template <class Real>
EntropyReport tr_rho2(const SolveResult<Real>& solve, RingIntegralCache<Real>& cache,
                      const EntropyOptions& options) {
  using std::abs;
  if (!(solve.alpha > 0)) throw InvalidArgument("tr_rho2: alpha must be positive");
  if (solve.coeffs.size() != solve.terms.size()) throw InvalidArgument("tr_rho2: coefficient count mismatch");

  const Real norm = tr_rho_red(solve);
  const auto factors = merged_factors(solve);
  const Real rate = 2 * Real(solve.alpha);
  int max_degree = 0;
  for (const auto& t : solve.terms) max_degree = std::max(max_degree, t.degree());
  const Scales<Real> scales(rate, 8 * max_degree + 12);
  const std::size_t before = cache.size();

  EntropyReport report;
  Real total = 0;
  Real abs_total = 0;
  std::uint64_t lookups = 0;
  std::size_t distinct = 0;

  auto lookup = [&](const RingPowers& r) -> Real {
    const Real* v = cache.find_packed(RingIntegralCache<Real>::pack(canonical(r)));
    if (!v) throw std::logic_error("tr_rho2: ring key missing after ensure");
    return *v * scales.by_dimension[r.dimension()];
  };

  if (options.grouped) {
    // Sum over (a, d) of C_a C_d depends on the factors only through PairKey;
    // (b, c) has the same structure. The two sides may be exchanged
    // (r1 <-> r2 is a ring symmetry), so only g <= h is visited.
    std::map<PairKey, Real> grouped;
    for (const auto& [fa, ca] : factors)
      for (const auto& [fd, cd] : factors) grouped[{fa.k + fd.k, fa.n, fd.n, fa.m, fd.m}] += ca * cd;
    std::vector<std::pair<PairKey, Real>> sides(grouped.begin(), grouped.end());
    const std::size_t g_count = sides.size();

    auto key_of = [&](const PairKey& g, const PairKey& h) {
      RingPowers r;
      if (!options.swap_dummies) {
        r.p = {g.k_sum, h.k_sum, g.m_first + h.m_first, h.m_second + g.m_second};
        r.n = {g.n_first, g.n_second, h.n_first, h.n_second};
      } else {
        r.p = {g.k_sum, h.k_sum, h.m_second + g.m_second, g.m_first + h.m_first};
        r.n = {g.n_second, g.n_first, h.n_second, h.n_first};
      }
      return r;
    };

    std::vector<RingPowers> keys;
    {
      std::unordered_set<std::uint64_t> seen;
      for (std::size_t g = 0; g < g_count; ++g)
        for (std::size_t h = g; h < g_count; ++h) {
          const RingPowers c = canonical(key_of(sides[g].first, sides[h].first));
          if (seen.insert(RingIntegralCache<Real>::pack(c)).second) keys.push_back(c);
        }
    }
    cache.ensure(keys, options.threads);
    distinct = keys.size();

    std::vector<Real> row_sum(g_count);
    std::vector<Real> row_abs(g_count);
    parallel_for(g_count, options.threads, [&](std::size_t g) {
      Accumulator<Real> acc;
      Real mag = 0;
      for (std::size_t h = g; h < g_count; ++h) {
        const Real weight = (h == g ? Real(1) : Real(2)) * sides[g].second * sides[h].second;
        const Real term = weight * lookup(key_of(sides[g].first, sides[h].first));
        acc.add(term);
        mag += abs(term);
      }
      row_sum[g] = acc.value();
      row_abs[g] = mag;
    });
    Accumulator<Real> acc;
    for (std::size_t g = 0; g < g_count; ++g) {
      acc.add(row_sum[g]);
      abs_total += row_abs[g];
    }
    total = acc.value();
    lookups = g_count * (g_count + 1) / 2;
  } else {
    // Literal quadruple sum over symmetrized terms with all sixteen
    // exchange patterns.
    const auto& terms = solve.terms;
    const std::size_t n = terms.size();
    auto factor = [&](std::size_t t) { return Factor{terms[t].mm, terms[t].nn, terms[t].kk}; };
    auto pattern_keys = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
      if (!options.swap_dummies) return purity_terms(factor(a), factor(b), factor(c), factor(d));
      std::array<RingPowers, 16> out;
      for (int bits = 0; bits < 16; ++bits) {
        const Factor fa = (bits & 8) ? exchanged(factor(a)) : factor(a);
        const Factor fd = (bits & 4) ? exchanged(factor(d)) : factor(d);
        const Factor fb = (bits & 2) ? exchanged(factor(b)) : factor(b);
        const Factor fc = (bits & 1) ? exchanged(factor(c)) : factor(c);
        out[bits] = ring_key(fa, fb, fc, fd, true);
      }
      return out;
    };

    std::vector<RingPowers> keys;
    {
      std::unordered_set<std::uint64_t> seen;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
              for (const auto& r : pattern_keys(a, b, c, d)) {
                const RingPowers cr = canonical(r);
                if (seen.insert(RingIntegralCache<Real>::pack(cr)).second) keys.push_back(cr);
              }
    }
    cache.ensure(keys, options.threads);
    distinct = keys.size();

    std::vector<Real> row_sum(n);
    std::vector<Real> row_abs(n);
    parallel_for(n, options.threads, [&](std::size_t a) {
      Accumulator<Real> acc;
      Real mag = 0;
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            const Real weight = solve.coeffs[a] * solve.coeffs[b] * solve.coeffs[c] * solve.coeffs[d];
            Real s = 0;
            for (const auto& r : pattern_keys(a, b, c, d)) s += lookup(r);
            acc.add(weight * s);
            mag += abs(weight * s);
          }
      row_sum[a] = acc.value();
      row_abs[a] = mag;
    });
    Accumulator<Real> acc;
    for (std::size_t a = 0; a < n; ++a) {
      acc.add(row_sum[a]);
      abs_total += row_abs[a];
    }
    total = acc.value();
    lookups = static_cast<std::uint64_t>(n) * n * n * n * 16;
  }

  const Real tr = total / (norm * norm);
  report.norm = to_double(norm);
  report.tr_rho2 = to_double(tr);
  report.linear_entropy = to_double(1 - tr);
  report.distinct_keys = distinct;
  const std::uint64_t fresh = cache.size() - before;
  report.i4_calls = lookups;
  report.cache_hits = lookups - std::min<std::uint64_t>(lookups, fresh);
  report.max_ell_used = cache.max_ell();
  report.cancellation = total != 0 ? to_double(abs_total / abs(total)) : 0.0;
  report.tail_bound = cache.worst_relative_tail() * to_double(abs_total / (norm * norm));
  return report;
}

#define HYLENT_INSTANTIATE_ENTROPY(Real)                   \
  template Real tr_rho_red<Real>(const SolveResult<Real>&); \
  template EntropyReport tr_rho2<Real>(const SolveResult<Real>&, RingIntegralCache<Real>&, const EntropyOptions&);

HYLENT_INSTANTIATE_ENTROPY(double)
HYLENT_INSTANTIATE_ENTROPY(quad)

}  // namespace hylent
