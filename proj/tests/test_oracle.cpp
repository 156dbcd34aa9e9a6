#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hylent/oracle.hpp"

using namespace hylent;

namespace {
const double kPi4 = std::pow(std::numbers::pi, 4);
}

TEST_CASE("ring Monte Carlo reference values") {
  RingIntegralKey plain{{}, {2, 2, 2, 2}};
  const auto a = mc_i4_ring(plain, 1u << 18, 1);
  CHECK(std::abs(a.mean - kPi4) < 3 * a.std_error + 1e-12 * kPi4);

  RingIntegralKey sq{{{0, 0, 0, 0}, {2, 0, 0, 0}}, {2, 2, 2, 2}};
  const auto b = mc_i4_ring(sq, 1u << 20, 2);
  CHECK(b.std_error > 0);
  CHECK(std::abs(b.mean - 6 * kPi4) < 3 * b.std_error);
}

TEST_CASE("Monte Carlo is reproducible and thread independent") {
  RingIntegralKey key{{{1, 0, 2, 1}, {1, 1, 3, 1}}, {1.2, 2.0, 1.5, 3.1}};
  const auto a = mc_i4_ring(key, 200000, 77, 1);
  const auto b = mc_i4_ring(key, 200000, 77, 1);
  const auto c = mc_i4_ring(key, 200000, 77, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  CHECK(a.seed == 77);
  CHECK(a.samples == 200000);
  const auto d = mc_i4_ring(key, 200000, 78, 1);
  CHECK(a.mean != d.mean);
}

TEST_CASE("standard error scales as one over root N") {
  RingIntegralKey key{{{0, 1, 0, 2}, {1, 0, 1, 1}}, {1.0, 1.5, 2.0, 2.5}};
  double ratio_sum = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto small = mc_i4_ring(key, 1u << 16, 1000 + rep);
    const auto large = mc_i4_ring(key, 1u << 18, 2000 + rep);
    ratio_sum += small.std_error / large.std_error;
  }
  CHECK(std::abs(ratio_sum / 10 - 2.0) < 0.4);
}

TEST_CASE("random keys respect their ranges") {
  CounterRng rng(5, 5);
  for (int i = 0; i < 100; ++i) {
    const auto key = random_ring_key(rng, 4, 1.0, 4.0);
    for (int v : key.powers.p) CHECK((v >= 0 && v <= 4));
    for (int v : key.powers.n) CHECK((v >= 0 && v <= 4));
    for (double r : key.rates) CHECK((r >= 1.0 && r <= 4.0));
  }
  CounterRng u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x > 0.0 && x <= 1.0));
  }
}

TEST_CASE("quadrature oracles") {
  CHECK(quad_i2({0, 0, 0, 2.0, 2.0}) == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-11));
  CHECK(quad_i2({2, 1, 3, 1.5, 2.5}) == doctest::Approx(i2<double>(2, 1, 3, 1.5, 2.5)).epsilon(1e-10));
  CHECK(quad_legendre_coeff(1, 0, 0.3, 1.0) == doctest::Approx(1.0 + 0.09 / 3.0).epsilon(1e-12));
  CHECK(quad_legendre_coeff(1, 0, 0.9, 1.0) == doctest::Approx(1.0 + 0.81 / 3.0).epsilon(1e-12));
}

TEST_CASE("exact even-power ring") {
  CHECK(to_double(exact_even_ring({{}, {2, 2, 2, 2}})) == doctest::Approx(kPi4).epsilon(1e-15));
  CHECK(to_double(exact_even_ring({{{0, 0, 0, 0}, {2, 0, 0, 0}}, {2, 2, 2, 2}})) ==
        doctest::Approx(6 * kPi4).epsilon(1e-15));
}

TEST_CASE("purity Monte Carlo") {
  const auto params = reduced_parameters(SystemSpec::helium());
  const auto one = solve_at<double>(0, params, 1.6875);
  const auto est = mc_tr_rho2(one, 1u << 16, 9);
  CHECK(std::abs(est.mean - 1.0) < 3 * est.std_error + 1e-12);

  auto twice = one;
  for (auto& c : twice.coeffs) c *= 2;
  const auto est2 = mc_tr_rho2(twice, 1u << 16, 9);
  CHECK(est2.mean == doctest::Approx(16 * est.mean).epsilon(1e-13));
}
