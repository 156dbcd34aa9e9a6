#include <doctest.h>

#include <cmath>
#include <random>

#include "hylent/errors.hpp"
#include "hylent/extrapolate.hpp"

using namespace hylent;

namespace {

Series make(int first, std::initializer_list<double> values) {
  Series s;
  int w = first;
  for (double v : values) {
    s.points.push_back({w, v});
    w += 2;
  }
  return s;
}

}  // namespace

TEST_CASE("tabulated series") {
  const auto e = geometric_extrapolate(make(6, {-2.903723702, -2.903724305, -2.903724366}));
  CHECK(std::abs(e.limit - -2.903724373) < 1e-9);
  CHECK(e.ratio == doctest::Approx(61.0 / 603.0).epsilon(1e-6));

  const auto l = geometric_extrapolate(make(7, {0.10610703, 0.10614786, 0.10615256}));
  CHECK(std::abs(l.limit - 0.10615317) < 2e-8);
}

TEST_CASE("constant series converges immediately") {
  const auto e = geometric_extrapolate(make(2, {1.25, 1.25, 1.25}));
  CHECK(e.limit == 1.25);
  CHECK(e.converged);
}

TEST_CASE("exact on geometric sequences") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double L = 3 * u(rng), A = u(rng), q = 0.9 * u(rng);
    if (std::abs(q) < 0.05 || std::abs(A) < 0.05) continue;
    Series s;
    for (int w = 4; w <= 8; w += 2) s.points.push_back({w, L + A * std::pow(q, w / 2)});
    const auto e = geometric_extrapolate(s);
    CHECK(e.limit == doctest::Approx(L).epsilon(1e-12).scale(1.0));
    CHECK(e.ratio == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("shift and scale equivariance") {
  const auto base = make(3, {0.5, 0.62, 0.65});
  const double s = -3.5, t = 7.25;
  Series moved = base;
  for (auto& p : moved.points) p.value = s * p.value + t;
  CHECK(geometric_extrapolate(moved).limit ==
        doctest::Approx(s * geometric_extrapolate(base).limit + t).epsilon(1e-14));
}

TEST_CASE("series errors") {
  CHECK_THROWS_AS(geometric_extrapolate(make(2, {1.0, 1.1, 1.3})), DivergentSeries);
  CHECK_THROWS_AS(geometric_extrapolate(make(2, {1.0, 1.1})), InvalidArgument);
  Series gap{{{2, 1.0}, {4, 1.1}, {8, 1.12}}};
  CHECK_THROWS_AS(gap.validate(), InvalidArgument);
  Series mixed{{{2, 1.0}, {3, 1.1}, {4, 1.12}}};
  CHECK_THROWS_AS(mixed.validate(), InvalidArgument);
  // equal increments of opposite sign: d1 - d2 = 0 is impossible, equal
  // magnitudes count as divergent
  CHECK_THROWS_AS(geometric_extrapolate(make(2, {1.0, 1.1, 1.0})), DivergentSeries);
}

TEST_CASE("parity selection") {
  std::vector<SeriesPoint> all{{5, 1}, {6, 2}, {7, 3}, {8, 4}, {9, 5}, {10, 6}};
  const auto even = Series::select(all, Parity::Even);
  REQUIRE(even.points.size() == 3);
  CHECK(even.points.front().omega == 6);
  CHECK(even.parity() == Parity::Even);
  CHECK(Series::select(all, Parity::Odd).points.back().omega == 9);
}

TEST_CASE("final estimates") {
  const auto he = final_estimate(0.015915650, 0.015915648);
  CHECK(he.value == doctest::Approx(0.0159156).epsilon(1e-12));
  CHECK(he.uncertainty == doctest::Approx(0.0000010).epsilon(1e-12));
  CHECK(he.spread == doctest::Approx(2e-9).epsilon(1e-6));

  const auto h = final_estimate(0.10615276, 0.10615317, 1e-5);
  CHECK(h.value == doctest::Approx(0.106153).epsilon(1e-12));
  CHECK(h.uncertainty == doctest::Approx(0.000010).epsilon(1e-12));

  const auto same = final_estimate(0.3, 0.3, 1e-6);
  CHECK(same.uncertainty == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(same.spread == 0);
}
