#include "hylent/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "hylent/errors.hpp"
#include "hylent/integrals.hpp"
#include "hylent/parallel.hpp"
#include "hylent/real.hpp"

namespace hylent {
namespace {

// Laurent polynomial in (r1, r2, r12) with a polynomial dependence on alpha.
// Key is (i, j, k, power of alpha); coefficients are small dyadic rationals,
// so every sum and product here is exact in double.
using Key = std::array<int, 4>;
using Poly = std::map<Key, double>;

Poly mono(double c, int i, int j, int k, int p = 0) { return Poly{{Key{i, j, k, p}, c}}; }

Poly operator+(Poly a, const Poly& b) {
  for (const auto& [key, c] : b) a[key] += c;
  return a;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b)
      out[Key{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]}] += ca * cb;
  return out;
}

Poly operator*(double s, Poly a) {
  for (auto& [key, c] : a) c *= s;
  return a;
}

struct Operators {
  Poly kinetic;  // (lap_1 + lap_2) f / f
  Poly mass;     // grad_1.grad_2 f / f
};

Operators derivative_ratios(int m, int n, int k) {
  const Poly a1 = mono(m, -1, 0, 0) + mono(-1, 0, 0, 0, 1);
  const Poly a2 = mono(n, 0, -1, 0) + mono(-1, 0, 0, 0, 1);
  const Poly b = mono(k, 0, 0, -1);

  const Poly f11 = a1 * a1 + mono(-m, -2, 0, 0);
  const Poly f22 = a2 * a2 + mono(-n, 0, -2, 0);
  const Poly fss = b * b + mono(-k, 0, 0, -2);
  const Poly f1s = a1 * b;
  const Poly f2s = a2 * b;
  const Poly f12 = a1 * a2;

  const Poly radial_s = fss + mono(2, 0, 0, -1) * b;
  const Poly lap1 = f11 + mono(2, -1, 0, 0) * a1 + radial_s +
                    (mono(1, 1, 0, -1) + mono(-1, -1, 2, -1) + mono(1, -1, 0, 1)) * f1s;
  const Poly lap2 = f22 + mono(2, 0, -1, 0) * a2 + radial_s +
                    (mono(1, 0, 1, -1) + mono(-1, 2, -1, -1) + mono(1, 0, -1, 1)) * f2s;

  const Poly cos12 = mono(0.5, 1, -1, 0) + mono(0.5, -1, 1, 0) + mono(-0.5, -1, -1, 2);
  const Poly cos2s = mono(0.5, 2, -1, -1) + mono(-0.5, 0, 1, -1) + mono(-0.5, 0, -1, 1);
  const Poly cos1s = mono(0.5, 1, 0, -1) + mono(-0.5, -1, 2, -1) + mono(0.5, -1, 0, 1);
  const Poly mass = f12 * cos12 + f2s * cos2s + (-1.0) * (f1s * cos1s) + (-1.0) * radial_s;

  return {lap1 + lap2, mass};
}

template <class Real>
void add_poly(std::map<std::array<int, 3>, Real>& out, const Poly& poly, Real scale, Real alpha, int m, int n,
              int k) {
  for (const auto& [key, c] : poly) {
    if (c == 0.0) continue;
    const int i = m + key[0];
    const int j = n + key[1];
    const int l = k + key[2];
    if (i < -1 || j < -1 || l < -1)
      throw std::logic_error(fmt::format("apply_h produced r1^{} r2^{} r12^{}", i, j, l));
    out[{i, j, l}] += scale * Real(c) * ipow(alpha, key[3]);
  }
}

}  // namespace

template <class Real>
std::vector<Monomial<Real>> apply_h(int i, int j, int k, const HamiltonianParams& params, Real alpha) {
  if (i < 0 || j < 0 || k < 0) throw InvalidArgument("apply_h: powers must be non-negative");
  const Operators ops = derivative_ratios(i, j, k);
  std::map<std::array<int, 3>, Real> acc;
  add_poly<Real>(acc, ops.kinetic, Real(-1) / (2 * Real(params.mu)), alpha, i, j, k);
  if (params.c_mp != 0.0) add_poly<Real>(acc, ops.mass, -Real(params.c_mp), alpha, i, j, k);
  acc[{i - 1, j, k}] -= Real(params.Z);
  acc[{i, j - 1, k}] -= Real(params.Z);
  acc[{i, j, k - 1}] += Real(1);
  std::vector<Monomial<Real>> out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc)
    if (c != 0) out.push_back({c, key[0], key[1], key[2]});
  return out;
}

template <class Real>
UnitI2Table<Real>::UnitI2Table(int max_power) : max_power_(max_power), stride_(max_power + 2) {
  values_.resize(static_cast<std::size_t>(stride_) * stride_ * stride_);
  for (int i = -1; i <= max_power; ++i)
    for (int j = -1; j <= max_power; ++j)
      for (int k = -1; k <= max_power; ++k)
        values_[static_cast<std::size_t>(((i + 1) * stride_ + (j + 1)) * stride_ + (k + 1))] =
            i2<Real>(i, j, k, Real(1), Real(1));
}

template <class Real>
const Real& UnitI2Table<Real>::operator()(int i, int j, int k) const {
  if (i < -1 || j < -1 || k < -1 || i > max_power_ || j > max_power_ || k > max_power_)
    throw std::out_of_range(fmt::format("UnitI2Table: ({}, {}, {}) outside table", i, j, k));
  return values_[static_cast<std::size_t>(((i + 1) * stride_ + (j + 1)) * stride_ + (k + 1))];
}

namespace {

int table_power(const std::vector<BasisTerm>& terms) {
  int top = 0;
  for (const auto& t : terms) top = std::max(top, t.degree());
  return 2 * top + 2;
}

template <class Real>
struct Part {
  int i, j, k;
  std::vector<Monomial<Real>> h;
};

}  // namespace

template <class Real>
MatrixPair<Real> assemble(const std::vector<BasisTerm>& terms, const HamiltonianParams& params, Real alpha,
                          int threads, const UnitI2Table<Real>* table) {
  if (terms.empty()) throw InvalidArgument("assemble: empty basis");
  if (!(alpha > 0)) throw InvalidArgument("assemble: alpha must be positive");
  std::unique_ptr<UnitI2Table<Real>> owned;
  const int need = table_power(terms);
  if (!table || table->max_power() < need) {
    owned = std::make_unique<UnitI2Table<Real>>(need);
    table = owned.get();
  }
  const std::size_t n = terms.size();

  // Equal rates 2 alpha: scale[d] = (2 alpha)^-(d), d = i + j + k + 6 >= 3.
  const int max_dim = 3 * need + 6;
  std::vector<Real> scale(static_cast<std::size_t>(max_dim + 1));
  const Real inv = Real(1) / (2 * alpha);
  scale[0] = 1;
  for (int d = 1; d <= max_dim; ++d) scale[d] = scale[d - 1] * inv;
  auto integral = [&](int i, int j, int k) { return (*table)(i, j, k) * scale[i + j + k + 6]; };

  std::vector<std::array<Part<Real>, 2>> parts(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& t = terms[a];
    parts[a][0] = {t.mm, t.nn, t.kk, apply_h<Real>(t.mm, t.nn, t.kk, params, alpha)};
    parts[a][1] = {t.nn, t.mm, t.kk, apply_h<Real>(t.nn, t.mm, t.kk, params, alpha)};
  }

  // H commutes with electron exchange, so <x1 + x2|y> = 2 <x1|y>.
  auto h_element = [&](std::size_t a, std::size_t b) {
    const auto& x = parts[a][0];
    Real sum = 0;
    for (const auto& y : parts[b])
      for (const auto& m : y.h) sum += m.coeff * integral(x.i + m.i, x.j + m.j, x.k + m.k);
    return 2 * sum;
  };

  MatrixPair<Real> out{Matrix<Real>(n, n), Matrix<Real>(n, n), 0.0};
  Matrix<Real> raw(n, n);
  parallel_for(n, threads, [&](std::size_t a) {
    const auto& x = parts[a][0];
    for (std::size_t b = 0; b < n; ++b) {
      if (b >= a) {
        Real s = 0;
        for (const auto& y : parts[b]) s += integral(x.i + y.i, x.j + y.j, x.k + y.k);
        out.S(a, b) = 2 * s;
      }
      raw(a, b) = h_element(a, b);
    }
  });

  using std::abs;
  Real worst = 0;
  Real largest = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      out.S(b, a) = out.S(a, b);
      const Real h = (raw(a, b) + raw(b, a)) / 2;
      out.H(a, b) = h;
      out.H(b, a) = h;
      worst = std::max(worst, Real(abs(raw(a, b) - raw(b, a))));
      largest = std::max(largest, Real(abs(h)));
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      using std::isfinite;
      if (!isfinite(out.H(a, b)) || !isfinite(out.S(a, b)))
        throw NumericalError(fmt::format("assemble: non-finite entry at ({}, {})", a, b));
    }
  out.max_asymmetry = largest > 0 ? to_double(worst / largest) : 0.0;
  return out;
}

template <class Real>
std::pair<Real, Real> matrix_element(const BasisTerm& a, const BasisTerm& b, const HamiltonianParams& params,
                                     Real alpha) {
  const std::array<std::array<int, 3>, 2> xa{{{a.mm, a.nn, a.kk}, {a.nn, a.mm, a.kk}}};
  const std::array<std::array<int, 3>, 2> yb{{{b.mm, b.nn, b.kk}, {b.nn, b.mm, b.kk}}};
  const Real rate = 2 * alpha;
  Real s = 0;
  Real h = 0;
  for (const auto& x : xa) {
    for (const auto& y : yb) {
      s += i2<Real>(x[0] + y[0], x[1] + y[1], x[2] + y[2], rate, rate);
      for (const auto& m : apply_h<Real>(y[0], y[1], y[2], params, alpha))
        h += m.coeff * i2<Real>(x[0] + m.i, x[1] + m.j, x[2] + m.k, rate, rate);
    }
  }
  return {s, h};
}

template <class Real>
double condition_estimate(const Matrix<Real>& s) {
  using std::sqrt;
  const std::size_t n = s.rows();
  Matrix<Real> scaled(n, n);
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 1 / sqrt(s(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = s(i, j) * d[i] * d[j];
  Vector<Real> values;
  Matrix<Real> vectors;
  symmetric_eigen(scaled, values, vectors);
  if (!(values.front() > 0)) return std::numeric_limits<double>::infinity();
  return to_double(values.back() / values.front());
}

template <class Real>
GroundState<Real> ground_state(const MatrixPair<Real>& mats, bool estimate_condition) {
  using std::abs;
  using std::isfinite;
  using std::sqrt;
  const std::size_t n = mats.S.rows();
  Matrix<Real> lower;
  if (!cholesky(mats.S, lower)) {
    const double cond = condition_estimate(mats.S);
    throw IllConditionedBasis(fmt::format("overlap matrix is not positive definite (condition ~ {:.3g})", cond),
                              cond);
  }

  // A = L^-1 H L^-T, built column by column with triangular solves.
  Matrix<Real> x(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      Real v = mats.H(i, col);
      for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * x(k, col);
      x(i, col) = v / lower(i, i);
    }
  Matrix<Real> a(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      Real v = x(col, i);
      for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * a(k, col);
      a(i, col) = v / lower(i, i);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Real v = (a(i, j) + a(j, i)) / 2;
      a(i, j) = v;
      a(j, i) = v;
    }

  Vector<Real> values;
  Matrix<Real> vectors;
  symmetric_eigen(a, values, vectors);

  Vector<Real> c(n);
  for (std::size_t i = n; i-- > 0;) {
    Real v = vectors(i, 0);
    for (std::size_t k = i + 1; k < n; ++k) v -= lower(k, i) * c[k];
    c[i] = v / lower(i, i);
  }

  auto rayleigh = [&](const Vector<Real>& v) { return dot(v, multiply(mats.H, v)) / dot(v, multiply(mats.S, v)); };
  Real energy = rayleigh(c);

  // One step of shifted inverse iteration polishes the eigenvector.
  {
    const Real shift = energy - abs(energy) * 1000 * epsilon<Real>();
    Matrix<Real> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = mats.H(i, j) - shift * mats.S(i, j);
    Vector<Real> next;
    if (lu_solve(m, multiply(mats.S, c), next)) {
      bool finite = true;
      for (const auto& v : next) finite = finite && isfinite(v);
      if (finite) {
        const Real e = rayleigh(next);
        if (isfinite(e) && e <= energy + abs(energy) * 100 * epsilon<Real>()) {
          c = std::move(next);
          energy = e;
        }
      }
    }
  }

  const Real norm = sqrt(dot(c, multiply(mats.S, c)));
  std::size_t big = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] /= norm;
    if (abs(c[i]) > abs(c[big])) big = i;
  }
  if (c[big] < 0)
    for (auto& v : c) v = -v;

  GroundState<Real> out{energy, std::move(c), 0.0};
  if (estimate_condition) out.condition_estimate = condition_estimate(mats.S);
  return out;
}

template <class Real>
SolveResult<Real> solve_at(int omega, const HamiltonianParams& params, double alpha, int threads) {
  auto terms = enumerate_terms(omega);
  const auto mats = assemble<Real>(terms, params, Real(alpha), threads);
  auto gs = ground_state(mats, true);
  return SolveResult<Real>{gs.energy, std::move(gs.coeffs), alpha, gs.condition_estimate, omega, std::move(terms),
                           params, 1};
}

AlphaBracket default_bracket(const HamiltonianParams& params) {
  const double scale = params.Z * params.mu;
  return {0.1 * scale, 2.5 * scale};
}

template <class Real>
SolveResult<Real> optimize_alpha(int omega, const HamiltonianParams& params, AlphaBracket bracket,
                                 const OptimizeOptions& options) {
  if (!(bracket.lo > 0) || !(bracket.hi > bracket.lo))
    throw InvalidArgument(fmt::format("optimize_alpha: bad bracket [{}, {}]", bracket.lo, bracket.hi));
  if (options.scan_points < 3) throw InvalidArgument("optimize_alpha: scan_points must be >= 3");
  const auto terms = enumerate_terms(omega);
  const UnitI2Table<Real> table(table_power(terms));
  int evaluations = 0;

  auto energy = [&](double alpha) -> double {
    ++evaluations;
    try {
      const auto mats = assemble<Real>(terms, params, Real(alpha), options.threads, &table);
      return to_double(ground_state(mats, false).energy);
    } catch (const IllConditionedBasis&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const int points = options.scan_points;
  const double ratio = std::pow(bracket.hi / bracket.lo, 1.0 / (points - 1));
  std::vector<double> grid(points);
  std::vector<double> values(points);
  std::size_t best = 0;
  for (int p = 0; p < points; ++p) {
    grid[p] = p == points - 1 ? bracket.hi : bracket.lo * std::pow(ratio, p);
    values[p] = energy(grid[p]);
    if (values[p] < values[best]) best = static_cast<std::size_t>(p);
  }
  if (!std::isfinite(values[best]))
    throw IllConditionedBasis(fmt::format("omega {}: overlap singular at every scanned alpha", omega),
                              std::numeric_limits<double>::infinity());
  if (best == 0 || best + 1 == static_cast<std::size_t>(points))
    throw BracketError(fmt::format("omega {}: no interior minimum of E(alpha) in [{}, {}] (lowest at {})", omega,
                                   bracket.lo, bracket.hi, grid[best]));

  double lo = grid[best - 1];
  double hi = grid[best + 1];
  // Brent stops at |dx| ~ 2^(1-bits) |x|; pick bits from the requested tolerance.
  const int bits = std::clamp(static_cast<int>(std::ceil(1.0 - std::log2(options.alpha_tol / hi))), 8,
                              std::numeric_limits<double>::digits / 2);
  std::uintmax_t max_iter = 200;
  const auto [alpha, e_min] = boost::math::tools::brent_find_minima(energy, lo, hi, bits, max_iter);
  (void)e_min;

  auto mats = assemble<Real>(terms, params, Real(alpha), options.threads, &table);
  auto gs = ground_state(mats, true);
  ++evaluations;
  return SolveResult<Real>{gs.energy, std::move(gs.coeffs), alpha, gs.condition_estimate, omega, terms, params,
                           evaluations};
}

#define HYLENT_INSTANTIATE_SOLVER(Real)                                                                         \
  template std::vector<Monomial<Real>> apply_h<Real>(int, int, int, const HamiltonianParams&, Real);           \
  template class UnitI2Table<Real>;                                                                             \
  template MatrixPair<Real> assemble<Real>(const std::vector<BasisTerm>&, const HamiltonianParams&, Real, int,  \
                                           const UnitI2Table<Real>*);                                           \
  template std::pair<Real, Real> matrix_element<Real>(const BasisTerm&, const BasisTerm&,                       \
                                                      const HamiltonianParams&, Real);                          \
  template double condition_estimate<Real>(const Matrix<Real>&);                                                \
  template GroundState<Real> ground_state<Real>(const MatrixPair<Real>&, bool);                                 \
  template SolveResult<Real> solve_at<Real>(int, const HamiltonianParams&, double, int);                        \
  template SolveResult<Real> optimize_alpha<Real>(int, const HamiltonianParams&, AlphaBracket,                  \
                                                  const OptimizeOptions&);

HYLENT_INSTANTIATE_SOLVER(double)
HYLENT_INSTANTIATE_SOLVER(quad)

}  // namespace hylent
