#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "cli.hpp"
#include "titchlab/arith_core.hpp"
#include "titchlab/characters.hpp"
#include "titchlab/cusp_forms.hpp"
#include "titchlab/exp_sums.hpp"
#include "titchlab/experiments.hpp"
#include "titchlab/singular_series.hpp"

namespace titchlab::cli {

namespace {

// zeta(2) zeta(3) / zeta(6)
constexpr double kC0One = 1.9435964368207592;

struct Check {
  bool ok;
  std::string detail;
};

std::string kv(const char* key, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.12g", key, v);
  return buf;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
  return s;
}

Check sieve_matches_factorization(unsigned threads) {
  const u64 N = 20'000;
  const auto t = build_sieve(1, N, threads);
  u64 bad = 0;
  for (u64 n = 1; n <= N; ++n) {
    const auto f = factorize(n);
    if (t.mu(n) != moebius(f) || t.phi(n) != euler_phi(f) || t.tau(n) != divisor_count(f) ||
        std::fabs(t.lambda(n) - von_mangoldt(n)) > 1e-12)
      ++bad;
  }
  return {bad == 0, join({kv("n_max", N), kv("mismatches", static_cast<double>(bad))})};
}

Check heath_brown_identity() {
  const u64 x = 2'000;
  double worst = 0.0;
  for (int J = 1; J <= 3; ++J)
    for (u64 n = 1; n <= x; ++n) worst = std::max(worst, std::fabs(heath_brown_lambda(n, x, J) - von_mangoldt(n)));
  return {worst <= 1e-9, kv("max_err", worst)};
}

Check two_squares_counts() {
  u64 bad = 0;
  for (u64 n = 1; n <= 3'000; ++n)
    if (two_squares_count_nonzero(n) != two_squares_count_nonzero_enumerate(n)) ++bad;
  return {bad == 0, kv("mismatches", static_cast<double>(bad))};
}

Check character_groups() {
  u64 bad = 0, total = 0;
  for (u64 q = 1; q <= 60; ++q) {
    const auto chars = enumerate_characters(q);
    if (chars.size() != euler_phi(q)) ++bad;
    for (const auto& chi : chars) {
      ++total;
      if (chi.conductor() != conductor_by_induction(chi)) ++bad;
      std::complex<double> s = 0;
      for (u64 n = 0; n < q; ++n) s += chi(static_cast<i64>(n));
      const double expect = chi.is_principal() ? static_cast<double>(euler_phi(q)) : 0.0;
      if (std::abs(s - expect) > 1e-9) ++bad;
    }
  }
  return {bad == 0, join({kv("characters", static_cast<double>(total)), kv("failures", static_cast<double>(bad))})};
}

Check l_values() {
  // L(1, chi_-4) = pi / 4
  const auto v = l_one(chi_minus4());
  const double err = std::abs(v.value - std::complex<double>(M_PI / 4, 0.0));
  return {err <= v.tail_bound + 1e-14 && v.tail_bound <= 1e-9,
          join({kv("L1_chi_m4", v.value.real()), kv("err", err), kv("tail_bound", v.tail_bound)})};
}

Check euler_products() {
  const auto c = c_s(1, 0.0, 100'000);
  const auto principal = c_chi(principal_character(1), 1, 100'000);
  // tail_bound certifies |log(true / value)|
  const double err = std::fabs(std::log(kC0One / c.value));
  return {err <= c.tail_bound && principal.value.real() == c.value && principal.value.imag() == 0.0,
          join({kv("c0_1", c.value), kv("log_err", err), kv("tail_bound", c.tail_bound)})};
}

Check kloosterman_routes() {
  u64 bad = 0;
  for (u64 c = 1; c <= 300; ++c)
    for (i64 m = -3; m <= 6; ++m)
      for (i64 n : {1, 2, 5, 12}) {
        const double d = kloosterman_direct(m, n, c);
        if (std::fabs(d - kloosterman_multiplicative(m, n, c)) > 1e-8 || std::fabs(d - kloosterman(n, m, c)) > 1e-8)
          ++bad;
      }
  return {bad == 0 && std::fabs(kloosterman(1, 1, 3) + 1.0) <= 1e-12, join({kv("S_1_1_3", kloosterman(1, 1, 3)), kv("mismatches", static_cast<double>(bad))})};
}

Check weil(unsigned threads, u64 seed) {
  const auto w = weil_sweep(300, 20, seed, threads);
  return {w.violations == 0 && w.max_ratio <= 1 + 1e-9,
          join({kv("checked", static_cast<double>(w.checked)), kv("max_ratio", w.max_ratio)})};
}

Check ramanujan() {
  u64 bad = 0;
  for (u64 q = 1; q <= 200; ++q)
    for (i64 n = -10; n <= 40; ++n)
      if (ramanujan_sum(q, n) != ramanujan_sum_direct(q, n)) ++bad;
  return {bad == 0, kv("mismatches", static_cast<double>(bad))};
}

Check triple_sums(unsigned threads) {
  double worst = 0.0;
  for (u64 c = 2; c <= 12; ++c)
    for (i64 a = 1; a < static_cast<i64>(c); ++a) {
      if (std::gcd(static_cast<u64>(a), c) != 1) continue;
      for (i64 h = 0; h < 3; ++h)
        worst = std::max(worst, std::abs(char_triple_sum(1, 2, h, 1, a, c) - char_triple_sum_factored(1, 2, h, 1, a, c)));
    }
  const auto s = char_triple_sweep_exhaustive(16, 0.1, threads);
  return {worst <= 1e-8, join({kv("route_err", worst), kv("sweep_max_ratio", s.max_ratio), kv("cases", static_cast<double>(s.cases))})};
}

Check delta_symbol() {
  const auto k = make_delta_kernel(1'000.0);
  double off = 0.0;
  for (i64 n = 1; n <= 30; ++n) off = std::max({off, std::fabs(delta_symbol_eval(k, n)), std::fabs(delta_symbol_eval(k, -n))});
  const double zero = delta_symbol_eval(k, 0);
  return {off <= 1e-8 && std::fabs(zero - 1.0) <= 1e-8, join({kv("eval0", zero), kv("max_offdiag", off)})};
}

Check hecke(unsigned threads) {
  const auto t = build_tau_table(50'000, threads);
  const auto r = hecke_consistency_report(t);
  return {r.ok() && to_string(t.tau_at(2)) == "-24" && to_string(t.tau_at(6)) == "-6048",
          join({kv("violations", static_cast<double>(r.violation_count)), kv("max_lambda_over_d", r.max_lambda_over_d),
                kv("rs_ratio", rankin_selberg_partial(t, 50'000) / 50'000.0)})};
}

Check titchmarsh_routes(unsigned threads) {
  ShiftedSumSpec s;
  s.X = 5'000;
  s.Y = 2'500;
  s.f = 1;
  const double a = titchmarsh_lhs(s, threads), b = titchmarsh_lhs_by_factorization(s);
  ShiftedSumSpec m;
  m.sigma = -1;
  m.X = 3'000;
  m.f = 4'500;
  m.Y = 0;
  const double c = titchmarsh_lhs(m, threads), d = titchmarsh_lhs_by_factorization(m);
  const double err = std::max(std::fabs(a - b) / b, std::fabs(c - d) / d);
  return {err <= 1e-12, join({kv("lhs", a), kv("lhs_minus", c), kv("rel_diff", err)})};
}

Check hooley_real(unsigned threads) {
  ShiftedSumSpec s;
  s.X = 20'000;
  s.Y = 10'000;
  const auto v = hooley_lhs(principal_character(1), chi_minus4(), s, threads);
  return {std::fabs(v.imag()) <= 1e-9 * std::fabs(v.real()), kv("lhs", v.real())};
}

Check two_squares_experiment() {
  const u64 n = 10'007;
  const double lhs = static_cast<double>(two_squares_lhs(n));
  const double main = two_squares_main_term(n, 100'000);
  return {lhs > 0 && std::fabs(lhs / main - 1.0) < 0.2, join({kv("lhs", lhs), kv("ratio", lhs / main)})};
}

Check dispersion_small(unsigned threads) {
  DispersionSpec s;
  s.x = 50'000;
  s.Q = 223;
  const auto r = dispersion(s, threads);
  return {std::isfinite(r.value), join({kv("value", r.value), kv("admissible_q", static_cast<double>(r.admissible_q))})};
}

Check cusp_cancellation(unsigned threads) {
  const auto t = build_tau_table(20'001, threads);
  ShiftedSumSpec s;
  s.X = 20'000;
  s.Y = 0;
  const double v = cusp_shift_lhs(t, s, threads);
  const auto tr = triple_shift_lhs(t, 1, 1, 10, 10, 10);
  return {std::fabs(v) < 0.1 * 20'000 && tr.ratio < 0.5,
          join({kv("cusp_shift", v), kv("triple_ratio", tr.ratio)})};
}

}  // namespace

int selftest(const RunConfig& config, std::ostream& out) {
  const unsigned th = config.threads;
  const std::vector<std::pair<const char*, std::function<Check()>>> suites = {
      {"arith_core.sieve_vs_factorize", [&] { return sieve_matches_factorization(th); }},
      {"arith_core.heath_brown", heath_brown_identity},
      {"arith_core.two_squares", two_squares_counts},
      {"characters.groups", character_groups},
      {"characters.l_one", l_values},
      {"singular_series.c0", euler_products},
      {"exp_sums.kloosterman_routes", kloosterman_routes},
      {"exp_sums.weil_sweep", [&] { return weil(th, config.seed); }},
      {"exp_sums.ramanujan", ramanujan},
      {"exp_sums.triple_sum", [&] { return triple_sums(th); }},
      {"exp_sums.delta_symbol", delta_symbol},
      {"cusp_forms.hecke", [&] { return hecke(th); }},
      {"experiments.titchmarsh_routes", [&] { return titchmarsh_routes(th); }},
      {"experiments.hooley_real", [&] { return hooley_real(th); }},
      {"experiments.two_squares", two_squares_experiment},
      {"experiments.dispersion", [&] { return dispersion_small(th); }},
      {"experiments.cusp_cancellation", [&] { return cusp_cancellation(th); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : suites) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c = {false, std::string("exception: ") + e.what()};
    }
    failed += c.ok ? 0 : 1;
    out << (c.ok ? "PASS " : "FAIL ") << name << ' ' << c.detail << '\n';
  }
  out << "selftest " << (suites.size() - failed) << '/' << suites.size() << " passed\n";
  out.flush();
  return failed ? kPropertyFailure : kOk;
}

}  // namespace titchlab::cli
