#include "hylent/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "hylent/errors.hpp"
#include "hylent/parallel.hpp"

namespace hylent {
namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Vec3 {
  double x, y, z;
};

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

Vec3 random_point(CounterRng& rng, double radius) {
  const double cz = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * M_PI * rng.uniform();
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  return {radius * sz * std::cos(phi), radius * sz * std::sin(phi), radius * cz};
}

// Gamma(shape, rate) for integer shape as a sum of exponentials.
double gamma_draw(CounterRng& rng, int shape, double rate) {
  double product = 1.0;
  for (int i = 0; i < shape; ++i) product *= rng.uniform();
  return -std::log(product) / rate;
}

double distance_squared(const Vec3& a, const Vec3& b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z);
}

// |a - b|^n for n >= 0 without a general pow.
double distance_power(const Vec3& a, const Vec3& b, int n) {
  const double d2 = distance_squared(a, b);
  const double even = ipow(d2, n / 2);
  return n % 2 ? even * std::sqrt(d2) : even;
}

struct ChunkStats {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t count = 0;
};

// Runs sample(rng) over fixed-size chunks, one stream per chunk, and merges
// the chunk statistics in chunk order.
template <class Sample>
McEstimate run_chunks(std::uint64_t samples, std::uint64_t seed, int threads, Sample&& sample) {
  if (samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkStats> stats(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    CounterRng rng(seed, c);
    const std::uint64_t n = std::min<std::uint64_t>(kMcChunk, samples - c * kMcChunk);
    ChunkStats s;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = sample(rng);
      ++s.count;
      const double d = x - s.mean;
      s.mean += d / static_cast<double>(s.count);
      s.m2 += d * (x - s.mean);
    }
    stats[c] = s;
  });
  ChunkStats total;
  for (const auto& s : stats) {
    if (s.count == 0) continue;
    const double n = static_cast<double>(total.count + s.count);
    const double d = s.mean - total.mean;
    total.m2 += s.m2 + d * d * static_cast<double>(total.count) * static_cast<double>(s.count) / n;
    total.mean += d * static_cast<double>(s.count) / n;
    total.count += s.count;
  }
  const double var = total.m2 / static_cast<double>(total.count - 1);
  return {total.mean, std::sqrt(var / static_cast<double>(total.count)), total.count, seed};
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix(seed ^ splitmix(stream + 1))) {}

std::uint64_t CounterRng::next() { return splitmix(key_ + 0x632be59bd9b4e019ull * ++counter_); }

double CounterRng::uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

McEstimate mc_i4_ring(const RingIntegralKey& key, std::uint64_t samples, std::uint64_t seed, int threads) {
  key.validate();
  const auto& p = key.powers.p;
  const auto& n = key.powers.n;
  double log_weight = 0.0;
  for (int i = 0; i < 4; ++i)
    log_weight += std::log(4.0 * M_PI) + std::lgamma(p[i] + 3.0) - (p[i] + 3.0) * std::log(key.rates[i]);
  const double weight = std::exp(log_weight);
  auto est = run_chunks(samples, seed, threads, [&](CounterRng& rng) {
    std::array<Vec3, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = random_point(rng, gamma_draw(rng, p[i] + 3, key.rates[i]));
    return distance_power(v[0], v[2], n[0]) * distance_power(v[0], v[3], n[1]) * distance_power(v[1], v[2], n[2]) *
           distance_power(v[1], v[3], n[3]);
  });
  est.mean *= weight;
  est.std_error *= weight;
  return est;
}

namespace {

// 8 pi^2 int r1 r2 r12 f(r1, r2, r12) over the triangle region. f must carry
// its own exponential decay; the r12 integrand must be a polynomial of degree
// below 40 times smooth factors.
template <class F>
double triangle_quadrature(F&& f, double rel_tol) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::tanh_sinh;
  auto finite = [](double v) { return std::isfinite(v) ? v : 0.0; };
  auto inner = [&](double r1, double r2) {
    return gauss<double, 20>::integrate([&](double s) { return finite(s * f(r1, r2, s)); }, std::abs(r1 - r2),
                                        r1 + r2);
  };
  tanh_sinh<double> near_rule;
  exp_sinh<double> far_rule;
  exp_sinh<double> outer_rule;
  auto middle = [&](double r1) {
    auto g = [&](double r2) { return finite(r2 * inner(r1, r2)); };
    const double near = near_rule.integrate(g, 0.0, r1, rel_tol);
    const double far = far_rule.integrate([&](double t) { return g(r1 + t); }, rel_tol);
    return finite(r1 * (near + far));
  };
  return 8.0 * M_PI * M_PI * outer_rule.integrate(middle, rel_tol);
}

}  // namespace

double quad_i2(const TwoElectronKey& key, double rel_tol) {
  if (key.i < -1 || key.j < -1 || key.k < -1) throw InvalidArgument("quad_i2: powers must be >= -1");
  if (!(key.a > 0) || !(key.b > 0)) throw InvalidArgument("quad_i2: rates must be positive");
  return triangle_quadrature(
      [&](double r1, double r2, double s) {
        return std::pow(r1, key.i) * std::pow(r2, key.j) * std::pow(s, key.k) * std::exp(-key.a * r1 - key.b * r2);
      },
      rel_tol);
}

template <class Real>
McEstimate mc_tr_rho2(const SolveResult<Real>& solve, std::uint64_t samples, std::uint64_t seed, int threads) {
  const double alpha = solve.alpha;
  std::vector<double> coeffs(solve.coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = to_double(solve.coeffs[i]);
  // Polynomial part of Psi; the exponentials are absorbed by the sampler.
  auto psi = [&](const Vec3& x, const Vec3& y) {
    const double rx = std::sqrt(x.x * x.x + x.y * x.y + x.z * x.z);
    const double ry = std::sqrt(y.x * y.x + y.y * y.y + y.z * y.z);
    const double rxy = std::clamp(distance(x, y), std::abs(rx - ry), rx + ry);
    double sum = 0.0;
    for (std::size_t t = 0; t < coeffs.size(); ++t) sum += coeffs[t] * evaluate_term(solve.terms[t], 0.0, rx, ry, rxy);
    return sum;
  };
  // Each radius ~ r^2 exp(-2 alpha r): int exp(-2 alpha r) d^3r = pi / alpha^3.
  const double weight = std::pow(M_PI / (alpha * alpha * alpha), 4);
  auto est = run_chunks(samples, seed, threads, [&](CounterRng& rng) {
    std::array<Vec3, 4> v;
    for (auto& p : v) p = random_point(rng, gamma_draw(rng, 3, 2.0 * alpha));
    return psi(v[0], v[2]) * psi(v[1], v[2]) * psi(v[1], v[3]) * psi(v[0], v[3]);
  });
  est.mean *= weight;
  est.std_error *= weight;
  return est;
}

namespace {

struct EdgeTerm {
  quad coeff;
  int ell;
  int power_i;
  int power_j;
};

// (r_i^2 + r_j^2 - 2 r_i r_j u)^q in Legendre polynomials of u.
std::vector<EdgeTerm> even_edge_expansion(int q) {
  using boost::math::factorial;
  std::vector<EdgeTerm> out;
  for (int a = 0; a <= q; ++a)
    for (int b = 0; a + b <= q; ++b) {
      const int c = q - a - b;
      const quad multinomial = factorial<quad>(q) / (factorial<quad>(a) * factorial<quad>(b) * factorial<quad>(c));
      const quad base = multinomial * ipow(quad(-2), c);
      // u^c = sum_l (2l+1) c! / (2^((c-l)/2) ((c-l)/2)! (c+l+1)!!) P_l(u)
      for (int ell = c % 2; ell <= c; ell += 2) {
        const int h = (c - ell) / 2;
        const quad proj = quad(2 * ell + 1) * factorial<quad>(c) /
                          (ipow(quad(2), h) * factorial<quad>(h) * boost::math::double_factorial<quad>(c + ell + 1));
        out.push_back({base * proj, ell, 2 * a + c, 2 * b + c});
      }
    }
  return out;
}

}  // namespace

RingIntegralKey random_ring_key(CounterRng& rng, int max_power, double rate_low, double rate_high) {
  auto draw = [&] { return static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_power + 1)); };
  RingIntegralKey key;
  for (auto& v : key.powers.p) v = draw();
  for (auto& v : key.powers.n) v = draw();
  for (auto& r : key.rates) r = rate_low + (rate_high - rate_low) * rng.uniform();
  return key;
}

quad exact_even_ring(const RingIntegralKey& key) {
  key.validate();
  for (int v : key.powers.n)
    if (v % 2 != 0) throw InvalidArgument("exact_even_ring: cross powers must be even");
  // Edges 13, 14, 23, 24 join variables (0,2), (0,3), (1,2), (1,3).
  static constexpr std::array<std::array<int, 2>, 4> ends{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};
  std::array<std::vector<EdgeTerm>, 4> edges;
  int max_ell = 0;
  for (int e = 0; e < 4; ++e) {
    edges[e] = even_edge_expansion(key.powers.n[e] / 2);
    max_ell = std::max(max_ell, key.powers.n[e] / 2);
  }
  const quad four_pi = 4 * pi<quad>();
  quad total = 0;
  for (int ell = 0; ell <= max_ell; ++ell) {
    quad w = 0;
    for (const auto& t0 : edges[0]) {
      if (t0.ell != ell) continue;
      for (const auto& t1 : edges[1]) {
        if (t1.ell != ell) continue;
        for (const auto& t2 : edges[2]) {
          if (t2.ell != ell) continue;
          for (const auto& t3 : edges[3]) {
            if (t3.ell != ell) continue;
            std::array<int, 4> pw = key.powers.p;
            const std::array<const EdgeTerm*, 4> ts{&t0, &t1, &t2, &t3};
            quad coeff = 1;
            for (int e = 0; e < 4; ++e) {
              coeff *= ts[e]->coeff;
              pw[ends[e][0]] += ts[e]->power_i;
              pw[ends[e][1]] += ts[e]->power_j;
            }
            quad radial = 1;
            for (int v = 0; v < 4; ++v)
              radial *= boost::math::factorial<quad>(pw[v] + 2) / ipow(quad(key.rates[v]), pw[v] + 3);
            w += coeff * radial;
          }
        }
      }
    }
    total += ipow(four_pi, 4) / ipow(quad(2 * ell + 1), 3) * w;
  }
  return total;
}

double quad_legendre_coeff(int n, int ell, double r1, double r2) {
  if (ell < 0) throw InvalidArgument("quad_legendre_coeff: ell must be >= 0");
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double value = integrator.integrate(
      [&](double u) {
        const double d2 = std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * u);
        return std::pow(d2, 0.5 * n) * boost::math::legendre_p(ell, u);
      },
      -1.0, 1.0);
  return 0.5 * (2 * ell + 1) * value;
}

namespace {

// Value and first derivatives of the symmetrized term in (r1, r2, s).
struct Jet {
  double f, d1, d2, ds;
};

Jet term_jet(const BasisTerm& t, double alpha, double r1, double r2, double s) {
  const double e = std::exp(-alpha * (r1 + r2)) * std::pow(s, t.kk);
  Jet out{0, 0, 0, 0};
  for (const auto& [m, n] : {std::pair{t.mm, t.nn}, std::pair{t.nn, t.mm}}) {
    const double g = e * std::pow(r1, m) * std::pow(r2, n);
    out.f += g;
    out.d1 += g * (m / r1 - alpha);
    out.d2 += g * (n / r2 - alpha);
    out.ds += t.kk == 0 ? 0.0 : g * t.kk / s;
  }
  return out;
}

}  // namespace

std::pair<double, double> quad_matrix_element(const BasisTerm& a, const BasisTerm& b, const HamiltonianParams& params,
                                              double alpha, double rel_tol) {
  const double overlap = triangle_quadrature(
      [&](double r1, double r2, double s) {
        return term_jet(a, alpha, r1, r2, s).f * term_jet(b, alpha, r1, r2, s).f;
      },
      rel_tol);
  const double energy = triangle_quadrature(
      [&](double r1, double r2, double s) {
        const Jet x = term_jet(a, alpha, r1, r2, s);
        const Jet y = term_jet(b, alpha, r1, r2, s);
        const double c1s = (r1 * r1 - r2 * r2 + s * s) / (2 * r1 * s);   // r1^ . s^
        const double c2s = (r1 * r1 - r2 * r2 - s * s) / (2 * s * r2);   // s^ . r2^
        const double c12 = (r1 * r1 + r2 * r2 - s * s) / (2 * r1 * r2);  // r1^ . r2^
        // grad_1 f = f_1 r1^ + f_s s^, grad_2 f = f_2 r2^ - f_s s^.
        const double g11 = x.d1 * y.d1 + (x.d1 * y.ds + x.ds * y.d1) * c1s + x.ds * y.ds;
        const double g22 = x.d2 * y.d2 - (x.d2 * y.ds + x.ds * y.d2) * c2s + x.ds * y.ds;
        auto cross = [&](const Jet& u, const Jet& v) {
          return u.d1 * v.d2 * c12 - u.d1 * v.ds * c1s + u.ds * v.d2 * c2s - u.ds * v.ds;
        };
        const double g12 = 0.5 * (cross(x, y) + cross(y, x));
        const double kinetic = (g11 + g22) / (2.0 * params.mu) + params.c_mp * g12;
        const double potential = x.f * y.f * (-params.Z / r1 - params.Z / r2 + 1.0 / s);
        return kinetic + potential;
      },
      rel_tol);
  return {overlap, energy};
}

template McEstimate mc_tr_rho2<double>(const SolveResult<double>&, std::uint64_t, std::uint64_t, int);
template McEstimate mc_tr_rho2<quad>(const SolveResult<quad>&, std::uint64_t, std::uint64_t, int);

}  // namespace hylent
