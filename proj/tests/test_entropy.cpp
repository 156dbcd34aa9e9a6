#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "hylent/entropy.hpp"
#include "hylent/oracle.hpp"

using namespace hylent;

namespace {

const HamiltonianParams kHelium = reduced_parameters(SystemSpec::helium());

// The sixteen integrand patterns as printed, one row per term: the powers of
// r1, r2, r3, r4 written as sums of factor exponents.
const char* const kPrinted[16][4] = {
    {"k1+k4", "k2+k3", "m1+m2", "m3+m4"}, {"k1+k4", "k2+m3", "m1+m2", "k3+m4"},
    {"k1+k4", "m2+k3", "m1+k2", "m3+m4"}, {"k1+k4", "m2+m3", "m1+k2", "k3+m4"},
    {"k1+m4", "k2+k3", "m1+m2", "m3+k4"}, {"k1+m4", "k2+m3", "m1+m2", "k3+k4"},
    {"k1+m4", "m2+k3", "m1+k2", "m3+k4"}, {"k1+m4", "m2+m3", "m1+k2", "k3+k4"},
    {"m1+k4", "k2+k3", "k1+m2", "m3+m4"}, {"m1+k4", "k2+m3", "k1+m2", "k3+m4"},
    {"m1+k4", "m2+k3", "k1+k2", "m3+m4"}, {"m1+k4", "m2+m3", "k1+k2", "k3+m4"},
    {"m1+m4", "k2+k3", "k1+m2", "m3+k4"}, {"m1+m4", "k2+m3", "k1+m2", "k3+k4"},
    {"m1+m4", "m2+k3", "k1+k2", "m3+k4"}, {"m1+m4", "m2+m3", "k1+k2", "k3+k4"},
};

int evaluate_sum(const std::string& expr, const std::map<std::string, int>& vars) {
  const auto plus = expr.find('+');
  return vars.at(expr.substr(0, plus)) + vars.at(expr.substr(plus + 1));
}

SolveResult<double> scaled(SolveResult<double> s, double factor) {
  for (auto& c : s.coeffs) c *= factor;
  return s;
}

}  // namespace

TEST_CASE("generated purity patterns equal the printed ones") {
  // Exponents chosen so that every sum of two is unique.
  const Factor f1{1, 16, 256}, f2{2, 32, 512}, f3{4, 64, 1024}, f4{8, 128, 2048};
  const std::map<std::string, int> vars{{"k1", 1}, {"m1", 16}, {"k2", 2},  {"m2", 32},
                                        {"k3", 4}, {"m3", 64}, {"k4", 8}, {"m4", 128}};
  const auto generated = purity_terms(f1, f2, f3, f4);
  for (int t = 0; t < 16; ++t) {
    INFO("term " << t);
    for (int r = 0; r < 4; ++r) CHECK(generated[t].p[r] == evaluate_sum(kPrinted[t][r], vars));
    // r13^n1 r14^n4 r23^n2 r24^n3 in every term
    CHECK(generated[t].n == std::array<int, 4>{256, 2048, 512, 1024});
  }
}

TEST_CASE("trace of the reduced density matrix") {
  const auto s = optimize_alpha<double>(3, kHelium, default_bracket(kHelium));
  CHECK(tr_rho_red(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tr_rho_red(scaled(s, 2.0)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("uncorrelated single term is separable") {
  RingIntegralCache<double> cache;
  const auto s = solve_at<double>(0, kHelium, 1.6875);
  const auto r = tr_rho2(s, cache);
  CHECK(std::abs(r.linear_entropy) < 1e-12);
  CHECK(r.linear_entropy == linear_entropy(r.tr_rho2));

  RingIntegralCache<quad> qcache;
  const auto q = tr_rho2(solve_at<quad>(0, kHelium, 1.6875), qcache);
  CHECK(std::abs(q.linear_entropy) < 1e-12);
}

TEST_CASE("grouped, direct and dummy-swapped sums agree") {
  const auto s = solve_at<double>(2, kHelium, 1.8);
  RingIntegralCache<double> cache;
  const auto grouped = tr_rho2(s, cache);
  EntropyOptions direct_opt;
  direct_opt.grouped = false;
  const auto direct = tr_rho2(s, cache, direct_opt);
  EntropyOptions swap_opt;
  swap_opt.swap_dummies = true;
  const auto swapped = tr_rho2(s, cache, swap_opt);
  CHECK(direct.tr_rho2 == doctest::Approx(grouped.tr_rho2).epsilon(1e-12));
  CHECK(swapped.tr_rho2 == doctest::Approx(grouped.tr_rho2).epsilon(1e-12));

  // normalization is divided out
  const auto twice = tr_rho2(scaled(s, 2.0), cache);
  CHECK(twice.tr_rho2 == doctest::Approx(grouped.tr_rho2).epsilon(1e-12));
  CHECK(twice.norm == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("helium omega 3 linear entropy") {
  const auto s = optimize_alpha<double>(3, kHelium, default_bracket(kHelium));
  RingIntegralCache<double> cache;
  const auto r = tr_rho2(s, cache);
  CHECK(std::abs(r.linear_entropy - 0.015886739) < 2e-5);
  CHECK(r.tr_rho2 > 0);
  CHECK(r.tr_rho2 <= 1 + 1e-10);
  CHECK(r.tail_bound < 1e-10);

  const auto mc = mc_tr_rho2(s, 1u << 21, 17);
  INFO("mc " << mc.mean << " +- " << mc.std_error << " analytic " << r.tr_rho2);
  CHECK(std::abs(mc.mean - r.tr_rho2) < 3 * mc.std_error);
}

TEST_CASE("cache reuse grows with the basis") {
  const auto s = solve_at<double>(5, kHelium, 2.1);
  REQUIRE(s.terms.size() >= 34);
  RingIntegralCache<double> cache;
  const auto r = tr_rho2(s, cache);
  CHECK(r.i4_calls > 0);
  CHECK(static_cast<double>(r.cache_hits) / static_cast<double>(r.i4_calls) > 0.5);
  CHECK(r.distinct_keys == cache.size());
}
