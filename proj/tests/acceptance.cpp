// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "hylent/entropy.hpp"
#include "hylent/extrapolate.hpp"
#include "hylent/kernels.hpp"
#include "hylent/oracle.hpp"

using namespace hylent;

namespace {

using Clock = std::chrono::steady_clock;

struct Row {
  double energy;
  double ls;
  double alpha;
};

struct Target {
  double energy;
  double ls;
};

constexpr double kEnergyTol = 5e-7;
constexpr double kLsTol = 2e-5;

RingIntegralCache<quad>& shared_cache() {
  static RingIntegralCache<quad> cache;
  return cache;
}

std::map<std::pair<std::string, int>, SolveResult<quad>> g_solves;
std::map<std::pair<std::string, int>, EntropyReport> g_reports;

const SolveResult<quad>& solve(const std::string& name, int omega) {
  const auto key = std::make_pair(name, omega);
  if (auto it = g_solves.find(key); it != g_solves.end()) return it->second;
  const auto params = reduced_parameters(SystemSpec::preset(name));
  return g_solves.emplace(key, optimize_alpha<quad>(omega, params, default_bracket(params))).first->second;
}

Row entropy_row(const std::string& name, int omega) {
  const auto& s = solve(name, omega);
  const auto key = std::make_pair(name, omega);
  auto it = g_reports.find(key);
  if (it == g_reports.end()) it = g_reports.emplace(key, tr_rho2(s, shared_cache())).first;
  return {to_double(s.energy), it->second.linear_entropy, s.alpha};
}

bool g_all_pass = true;

void report(int number, bool pass, const std::string& summary, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("criterion %d: %s  %s  [%.1fs]\n", number, pass ? "PASS" : "FAIL", summary.c_str(), secs);
  std::fflush(stdout);
  g_all_pass = g_all_pass && pass;
}

void detail(const std::string& line) {
  std::printf("    %s\n", line.c_str());
  std::fflush(stdout);
}

bool table_rows(const std::string& name, const std::map<int, Target>& targets) {
  bool ok = true;
  for (const auto& [omega, t] : targets) {
    const auto row = entropy_row(name, omega);
    const double de = std::abs(row.energy - t.energy);
    const double dl = std::abs(row.ls - t.ls);
    const bool pass = de <= kEnergyTol && dl <= kLsTol;
    detail(fmt::format("{} w={} alpha={:.7f} E={:.10f} (|dE|={:.2e}) Ls={:.9f} (|dLs|={:.2e}) {}", name, omega,
                       row.alpha, row.energy, de, row.ls, dl, pass ? "ok" : "out of tolerance"));
    ok = ok && pass;
  }
  return ok;
}

void criterion_1() {
  const auto start = Clock::now();
  const bool ok = table_rows("helium", {{3, {-2.903640446, 0.015886739}},
                                        {4, {-2.903713944, 0.015922114}},
                                        {5, {-2.903720967, 0.015915605}}});
  // Stretch row, reported but not part of the criterion.
  const auto stretch = entropy_row("helium", 6);
  detail(fmt::format("stretch helium w=6 E={:.10f} (|dE|={:.2e}) Ls={:.9f} (|dLs|={:.2e})", stretch.energy,
                     std::abs(stretch.energy - -2.903723702), stretch.ls, std::abs(stretch.ls - 0.015916146)));
  report(1, ok, "helium w=3,4,5 energies within 5e-7 and Ls within 2e-5", start);
}

void criterion_2() {
  const auto start = Clock::now();
  const bool ok = table_rows("h-minus", {{5, {-0.527707183, 0.10553029}}, {6, {-0.527743248, 0.10605049}}});
  report(2, ok, "H- w=5,6 energies within 5e-7 and Ls within 2e-5", start);
}

void criterion_3() {
  const auto start = Clock::now();
  const bool ok = table_rows("ps-minus", {{5, {-0.261957583, 0.119612504}}, {6, {-0.262001051, 0.120694682}}});
  report(3, ok, "Ps- w=5,6 energies within 5e-7 and Ls within 2e-5", start);
}

void criterion_4() {
  const auto start = Clock::now();
  const auto e = geometric_extrapolate(Series{{{6, -2.903723702}, {8, -2.903724305}, {10, -2.903724366}}});
  const auto l = geometric_extrapolate(Series{{{7, 0.10610703}, {9, 0.10614786}, {11, 0.10615256}}});
  const double de = std::abs(e.limit - -2.903724373);
  const double dl = std::abs(l.limit - 0.10615317);
  detail(fmt::format("E(6,8,10) -> {:.12f} (|d|={:.2e}); Ls(7,9,11) -> {:.12f} (|d|={:.2e})", e.limit, de, l.limit, dl));
  report(4, de <= 1e-9 && dl <= 2e-8, "geometric extrapolation of reference series", start);
}

void criterion_5() {
  const auto start = Clock::now();
  constexpr std::uint64_t kSamples = 10'000'000;
  CounterRng rng(20140611, 1);
  bool ok = true;
  double worst_z = 0;
  for (int i = 0; i < 25; ++i) {
    const auto key = random_ring_key(rng, 4, 1.0, 4.0);
    const double analytic = to_double(i4_ring<quad>(key).value);
    const auto mc = mc_i4_ring(key, kSamples, 1000 + static_cast<std::uint64_t>(i));
    const double z = (mc.mean - analytic) / mc.std_error;
    worst_z = std::max(worst_z, std::abs(z));
    if (std::abs(z) >= 3) {
      ok = false;
      detail(fmt::format("key {} z={:.2f}", key.to_string(), z));
    }
  }
  double worst_rel = 0;
  for (int i = 0; i < 25; ++i) {
    auto key = random_ring_key(rng, 4, 1.0, 4.0);
    for (auto& n : key.powers.n) n = 2 * (n / 2);
    const quad exact = exact_even_ring(key);
    const quad analytic = i4_ring<quad>(key).value;
    const double rel = to_double(abs(analytic - exact) / exact);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-10) {
      ok = false;
      detail(fmt::format("even key {} rel={:.2e}", key.to_string(), rel));
    }
  }
  detail(fmt::format("25 random keys at 1e7 samples: max |z| = {:.2f}; 25 even keys: max rel = {:.2e}", worst_z,
                     worst_rel));
  report(5, ok, "ring integrals agree with Monte Carlo (3 sigma) and exact even expansion (1e-10)", start);
}

void criterion_6() {
  const auto start = Clock::now();
  const std::map<std::string, double> bounds{
      {"helium", -2.9037243770341196}, {"h-minus", -0.527751016544}, {"ps-minus", -0.262005070232}};
  bool ok = true;
  for (const auto& [name, bound] : bounds) {
    std::string line = name + ":";
    double previous = 0;
    for (int omega = 2; omega <= 6; ++omega) {
      const double e = to_double(solve(name, omega).energy);
      line += fmt::format(" {:.10f}", e);
      if (omega > 2 && !(e <= previous)) ok = false;
      if (e < bound - 1e-12) ok = false;
      previous = e;
    }
    detail(line);
  }
  report(6, ok, "E(w) non-increasing over w=2..6 and above the reference energies", start);
}

std::vector<double> sweep(bool charge_axis, const std::vector<double>& grid) {
  std::vector<double> ls;
  for (double x : grid) {
    SystemSpec spec;
    spec.Z = charge_axis ? x : 1.0;
    spec.m3 = charge_axis ? ParticleMass::infinite() : ParticleMass::from_inverse(x);
    const auto params = reduced_parameters(spec);
    const auto s = optimize_alpha<quad>(5, params, default_bracket(params));
    ls.push_back(tr_rho2(s, shared_cache()).linear_entropy);
  }
  return ls;
}

void criterion_7() {
  const auto start = Clock::now();
  const std::vector<double> inv_mass{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const std::vector<double> charge{1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  const auto by_mass = sweep(false, inv_mass);
  const auto by_charge = sweep(true, charge);
  bool ok = true;
  std::string a = "Ls vs 1/m:", b = "Ls vs Z:  ";
  for (std::size_t i = 0; i < inv_mass.size(); ++i) {
    a += fmt::format(" {:.9f}", by_mass[i]);
    b += fmt::format(" {:.9f}", by_charge[i]);
    if (i > 0 && !(by_mass[i] > by_mass[i - 1])) ok = false;
    if (i > 0 && !(by_charge[i] < by_charge[i - 1])) ok = false;
  }
  detail(a);
  detail(b);
  const double h_end = std::abs(by_mass.front() - 0.10553029);
  const double h_end2 = std::abs(by_charge.front() - 0.10553029);
  const double ps_end = std::abs(by_mass.back() - 0.119612504);
  detail(fmt::format("endpoint deviations: H- {:.2e} / {:.2e}, Ps- {:.2e}", h_end, h_end2, ps_end));
  ok = ok && h_end <= kLsTol && h_end2 <= kLsTol && ps_end <= kLsTol;
  report(7, ok, "sweep monotonicity at w=5 and endpoints matching the reference values", start);
}

void criterion_8() {
  const auto start = Clock::now();
  bool ok = true;

  const double norm = to_double(tr_rho_red(solve("helium", 3)));
  const bool norm_ok = std::abs(norm - 1) <= 1e-12;
  RingIntegralCache<quad> local;
  const auto params = reduced_parameters(SystemSpec::helium());
  const double separable = tr_rho2(solve_at<quad>(0, params, 1.6875), local).linear_entropy;
  const bool sep_ok = std::abs(separable) <= 1e-12;
  detail(fmt::format("Tr rho_red - 1 = {:.2e}; one-term Ls = {:.2e}", norm - 1, separable));
  ok = ok && norm_ok && sep_ok;

  // Ring symmetries at working precision.
  CounterRng rng(8, 8);
  double worst_sym = 0;
  for (int i = 0; i < 20; ++i) {
    const auto key = random_ring_key(rng, 4, 1.0, 4.0);
    const quad base = i4_ring<quad>(key).value;
    for (int g = 1; g < 8; ++g) {
      const quad image = i4_ring<quad>(apply_symmetry(key, g)).value;
      worst_sym = std::max(worst_sym, to_double(abs(image - base) / base));
    }
  }
  const bool sym_ok = worst_sym <= 1e3 * to_double(epsilon<quad>());
  ok = ok && sym_ok;

  // Even-power Legendre reconstruction on random triangles.
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> r(0.05, 4.0), u(-1.0, 1.0);
  double worst_rec = 0;
  for (int i = 0; i < 100; ++i) {
    const quad a = r(gen), b = r(gen), x = u(gen);
    const quad d2 = a * a + b * b - 2 * a * b * x;
    for (int n = 0; n <= 10; n += 2) {
      quad sum = 0;
      for (int ell = 0; ell <= n / 2; ++ell)
        sum += evaluate_kernel<quad>(kernel_terms<quad>(n, ell), a, b) * boost::math::legendre_p(ell, x);
      const quad want = ipow(d2, n / 2);
      worst_rec = std::max(worst_rec, to_double(abs(sum - want) / want));
    }
  }
  const bool rec_ok = worst_rec <= 1e-12;
  ok = ok && rec_ok;

  // Homogeneity of the radial integral under a common rate scaling.
  double worst_hom = 0;
  for (int i = 0; i < 10; ++i) {
    const auto key = random_ring_key(rng, 4, 1.0, 1.0);
    const int ell = static_cast<int>(rng.next() % 3);
    RingKernels<quad> kernels;
    for (int p = 0; p < 4; ++p) kernels[p] = kernel_terms<quad>(key.powers.n[p], ell);
    bool empty = false;
    for (const auto& k : kernels) empty = empty || k.empty();
    if (empty) continue;
    const quad one = simplex_radial_integral<quad>(key.powers.p, kernels, {1, 1, 1, 1});
    const quad two = simplex_radial_integral<quad>(key.powers.p, kernels, {2, 2, 2, 2});
    const quad scale = ipow(quad(2), -key.powers.dimension());
    worst_hom = std::max(worst_hom, to_double(abs(two - one * scale) / abs(one * scale)));
  }
  const bool hom_ok = worst_hom <= 1e-12;
  ok = ok && hom_ok;
  detail(fmt::format("ring symmetry max rel = {:.2e}; Legendre reconstruction max rel = {:.2e}; "
                     "homogeneity max rel = {:.2e}",
                     worst_sym, worst_rec, worst_hom));
  report(8, ok, "structural invariants", start);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  criterion_4();
  criterion_8();
  criterion_5();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_6();
  criterion_7();
  std::printf("acceptance: %s in %.0fs\n", g_all_pass ? "all criteria pass" : "some criteria FAIL",
              std::chrono::duration<double>(Clock::now() - start).count());
  return g_all_pass ? 0 : 1;
}
