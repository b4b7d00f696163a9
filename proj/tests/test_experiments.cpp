#include <doctest.h>

#include <cmath>

#include "lhs_oracles.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/experiments.hpp"

using namespace titchlab;

namespace {

const TauTable& table() {
  static const TauTable t = build_tau_table(20'000);
  return t;
}

void check_close(double got, long double want, double tol) {
  CHECK(std::fabs(got - static_cast<double>(want)) <= tol);
}

}  // namespace

TEST_CASE("titchmarsh_lhs against the naive loop, randomized") {
  oracle::Gen g(101);
  for (int i = 0; i < 80; ++i) {
    const auto s = oracle::random_spec(g, 1000);
    CAPTURE(s.sigma);
    CAPTURE(s.f);
    CAPTURE(s.Y);
    CAPTURE(s.X);
    check_close(titchmarsh_lhs(s), oracle::titchmarsh(s), 1e-9);
    check_close(titchmarsh_lhs_by_factorization(s), oracle::titchmarsh(s), 1e-9);
  }
  check_close(titchmarsh_lhs({-1, 100, 10, 90}), oracle::titchmarsh({-1, 100, 10, 90}), 1e-9);
}

TEST_CASE("sieve and factorization routes agree up to 10^5") {
  for (const ShiftedSumSpec s : {ShiftedSumSpec{1, 1, 50'000, 100'000}, ShiftedSumSpec{-1, 250'000, 0, 100'000},
                                 ShiftedSumSpec{1, -70'000, 70'000, 100'000}}) {
    const double a = titchmarsh_lhs(s), b = titchmarsh_lhs_by_factorization(s);
    CHECK(std::fabs(a - b) <= 1e-12 * b);
  }
}

TEST_CASE("hooley_lhs against the naive loop, randomized") {
  oracle::Gen g(202);
  for (int i = 0; i < 60; ++i) {
    const auto s = oracle::random_spec(g, 600);
    const auto c1 = enumerate_characters(g.urange(1, 12));
    const auto c2 = enumerate_characters(g.urange(1, 12));
    const auto& chi1 = g.pick(c1);
    const auto& chi2 = g.pick(c2);
    const auto got = hooley_lhs(chi1, chi2, s);
    const auto want = oracle::hooley(chi1, chi2, s);
    check_close(got.real(), want.real(), 1e-9);
    check_close(got.imag(), want.imag(), 1e-9);
  }
  // principal characters mod 1 give the divisor function
  const ShiftedSumSpec s{1, 3, 200, 900};
  CHECK(hooley_lhs(principal_character(1), principal_character(1), s).real() ==
        doctest::Approx(titchmarsh_lhs(s)).epsilon(1e-14));
}

TEST_CASE("two_squares_lhs against the naive loop") {
  CHECK(two_squares_lhs(6) == 0);
  CHECK(two_squares_lhs(7) == oracle::two_squares(7));
  CHECK(two_squares_lhs(7) == 12);
  oracle::Gen g(303);
  for (int i = 0; i < 60; ++i) {
    const u64 n = g.urange(5, 1000);
    CHECK(two_squares_lhs(n) == oracle::two_squares(n));
    check_close(two_squares_lhs_lambda(n), oracle::two_squares_lambda(n), 1e-9);
  }
  CHECK(two_squares_lhs(10'000) == oracle::two_squares(10'000));
  CHECK_THROWS_AS(two_squares_lhs(4), DomainError);
}

TEST_CASE("cusp_shift_lhs against the naive loop") {
  const ShiftedSumSpec small{1, 1, 2, 5};
  const auto& t = table();
  check_close(cusp_shift_lhs(t, small), std::log(3.0L) * oracle::lambda_from_tau(t.tau[4], 4) +
                                            std::log(2.0L) * oracle::lambda_from_tau(t.tau[5], 5) +
                                            std::log(5.0L) * oracle::lambda_from_tau(t.tau[6], 6),
              1e-15);
  oracle::Gen g(404);
  for (int i = 0; i < 80; ++i) {
    const auto s = oracle::random_spec(g, 1000);
    check_close(cusp_shift_lhs(t, s), oracle::cusp_shift(t, s), 1e-9);
  }
  CHECK_THROWS_AS(cusp_shift_lhs(t, ShiftedSumSpec{1, 1, 0, 20'000}), RangeError);
}

TEST_CASE("cusp_shift_lhs sanity at 10^5") {
  const auto t = build_tau_table(100'001);
  const ShiftedSumSpec s{1, 1, 0, 100'000};
  const double v = cusp_shift_lhs(t, s);
  long double trivial = 0;
  for (u64 n = 2; n <= 100'000; ++n) trivial += oracle::mangoldt(n) * std::fabs(t.lambda[n + 1]);
  CHECK(std::fabs(v) < static_cast<double>(trivial));
}

TEST_CASE("triple_shift_lhs against the naive loop") {
  const auto& t = table();
  CHECK(triple_shift_lhs(t, 1, 1, 1, 1, 1).value == 0.0);
  check_close(triple_shift_lhs(t, 1, 1, 8, 8, 8).value, oracle::triple_shift(t, 1, 1, 8, 8, 8), 1e-12);
  oracle::Gen g(505);
  for (int i = 0; i < 60; ++i) {
    const i64 r = g.range(1, 3);
    const u64 X1 = g.urange(1, 6), X2 = g.urange(1, 6), X3 = g.urange(1, 6);
    const i64 f = g.coin() ? g.range(1, 60) : -g.range(0, static_cast<i64>(r * X1 * X2 * X3) - 1);
    if (f == 0) continue;
    check_close(triple_shift_lhs(t, r, f, X1, X2, X3).value, oracle::triple_shift(t, r, f, X1, X2, X3), 1e-12);
  }
  CHECK_THROWS_AS(triple_shift_lhs(t, 0, 1, 2, 2, 2), DomainError);
  CHECK_THROWS_AS(triple_shift_lhs(t, 1, 1, 20, 20, 20), RangeError);
}

TEST_CASE("triple_shift_lhs at X = 20 and its cancellation trend") {
  const auto t = build_tau_table(8 * 40 * 40 * 40 + 1);
  check_close(triple_shift_lhs(t, 1, 1, 20, 20, 20).value, oracle::triple_shift(t, 1, 1, 20, 20, 20), 1e-12);
  const double r10 = triple_shift_lhs(t, 1, 1, 10, 10, 10).ratio;
  const double r40 = triple_shift_lhs(t, 1, 1, 40, 40, 40).ratio;
  CHECK(r40 < r10);
}

TEST_CASE("double_shift_lhs against the naive loop") {
  const auto& t = table();
  check_close(double_shift_lhs(t, 1, 2, 1, 10).value, oracle::double_shift(t, 1, 2, 1, 10), 1e-14);
  CHECK(double_shift_lhs(t, 1, 2, 1, 10, SmoothWindow{0.0}).value == 0.0);
  CHECK_THROWS_AS(double_shift_lhs(t, 2, 2, 1, 10), DomainError);
  CHECK_THROWS_AS(double_shift_lhs(t, 1, 4, 1, 10), DomainError);
  CHECK_THROWS_AS(double_shift_lhs(t, 1, -2, 100, 10), DomainError);
  const std::vector<i64> pos = {1, 2, 3, 5, 6, 7};
  oracle::Gen g(606);
  for (int i = 0; i < 60; ++i) {
    i64 m1 = g.pick(pos), m2 = g.pick(pos);
    if (m1 == m2) continue;
    const u64 X = g.urange(1, 300);
    i64 f = g.range(1, 100);
    if (g.coin() && m1 <= 3 && m2 <= 3) {
      m1 = -m1;
      m2 = -m2;
      f = 3 * 2 * static_cast<i64>(X) + g.range(1, 500);
    }
    check_close(double_shift_lhs(t, m1, m2, f, X).value, oracle::double_shift(t, m1, m2, f, X), 1e-12);
  }
}

TEST_CASE("dispersion against the naive loop") {
  DispersionSpec small;
  small.x = 100;
  small.Q = 3;
  check_close(dispersion(small).value, oracle::dispersion(small), 1e-9);
  CHECK(dispersion(small).admissible_q == 3);
  oracle::Gen g(707);
  for (int i = 0; i < 60; ++i) {
    const auto s = oracle::random_dispersion(g, 1000);
    CAPTURE(s.x);
    CAPTURE(s.Q);
    CAPTURE(s.c);
    CAPTURE(s.d);
    check_close(dispersion(s).value, oracle::dispersion(s), 1e-9);
  }
  // every q is excluded by the congruence condition
  DispersionSpec none;
  none.x = 1000;
  none.Q = 4;
  none.c = 7;
  none.c0 = 5;
  CHECK(dispersion(none).value == 0.0);
  CHECK(dispersion(none).admissible_q == 0);
  DispersionSpec bad = small;
  bad.d = 2;
  bad.c = 3;
  CHECK_THROWS_AS(dispersion(bad), DomainError);
  bad = small;
  bad.x = 20'000'000;
  CHECK_THROWS_AS(dispersion(bad), CapacityError);
}

TEST_CASE("every left-hand side is bitwise independent of the thread count") {
  const ShiftedSumSpec s{1, 1, 100'000, 300'000};
  CHECK(titchmarsh_lhs(s, 1) == titchmarsh_lhs(s, 4));
  const auto chi3 = enumerate_characters(3)[1];
  CHECK(hooley_lhs(chi3, chi_minus4(), s, 1) == hooley_lhs(chi3, chi_minus4(), s, 4));
  const auto t = build_tau_table(300'001);
  CHECK(cusp_shift_lhs(t, s, 1) == cusp_shift_lhs(t, s, 4));
  DispersionSpec d;
  d.x = 300'000;
  d.Q = 547;
  CHECK(dispersion(d, 1).value == dispersion(d, 4).value);
}

TEST_CASE("size budget") {
  const u64 saved = lhs_budget();
  set_lhs_budget(1000);
  CHECK_THROWS_AS(titchmarsh_lhs(ShiftedSumSpec{1, 1, 0, 1001}), CapacityError);
  CHECK_THROWS_AS(two_squares_lhs(1001), CapacityError);
  set_lhs_budget(saved);
  CHECK_THROWS_AS(titchmarsh_lhs(ShiftedSumSpec{1, 0, 0, 100}), DomainError);
  CHECK_THROWS_AS(titchmarsh_lhs(ShiftedSumSpec{-1, 50, 0, 100}), DomainError);
}

TEST_CASE("Brun-Titchmarsh scan") {
  const auto r = brun_titchmarsh_check(1'000'000, 10'000, 100);
  CHECK(r.max_ratio > 0.0);
  CHECK(r.max_ratio <= kBrunTitchmarshSlack);
  CHECK_FALSE(r.flagged);
  CHECK(brun_titchmarsh_check(1'000'000, 10'000, 100).max_ratio == r.max_ratio);
  // q = 1 alone: (psi(x + y) - psi(x)) log y / (y log(x + y))
  const auto one = brun_titchmarsh_check(10'000, 1'000, 1);
  long double psi = 0;
  for (u64 n = 10'000; n <= 11'000; ++n) psi += oracle::mangoldt(n);
  check_close(one.max_ratio, psi * std::log(1000.0L) / (1000.0L * std::log(11'000.0L)), 1e-12);
}

TEST_CASE("result rows") {
  const auto a = compare("x", 10, 5.0, 5.0);
  CHECK(*a.abs_err == 0.0);
  CHECK(*a.rel_err == 0.0);
  const auto b = compare("x", 10, 5.0, std::nullopt);
  CHECK_FALSE(b.main_term.has_value());
  CHECK_FALSE(b.abs_err.has_value());
  CHECK_FALSE(b.rel_err.has_value());
  const auto c = compare("x", 10, 5.0, 0.0);
  CHECK(*c.abs_err == 5.0);
  CHECK_FALSE(c.rel_err.has_value());
}

TEST_CASE("averages of m/phi(m), 1/phi(m) and chi(n)/phi(n) at small scale") {
  for (const bool weighted : {false, true}) {
    const auto rows = lemma51_errors(10'000, 20, weighted, 100'000);
    CHECK(rows.size() == 20);
    for (const auto& r : rows) CHECK(r.normalized <= 30.0);
  }
  const auto rows = lemma52_errors(10'000, 12, 6, false, 100'000);
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows) CHECK(r.normalized <= 30.0);
}
