#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "oracles.hpp"
#include "titchlab/characters.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/singular_series.hpp"

using namespace titchlab;

namespace {

const std::vector<u64>& small_primes() {
  static const auto p = oracle::primes(10'000'000);
  return p;
}

// log c_0(f) and its s-derivative at s = 0, straight from the product
std::pair<long double, long double> log_c0_and_derivative(i64 f, u64 P0) {
  const u64 af = static_cast<u64>(std::llabs(f));
  long double lg = 0.0L, dlg = 0.0L;
  for (const u64 p : small_primes()) {
    const long double pl = p, lp = std::log(pl);
    if (af % p == 0) {
      lg += std::log(1.0L - 1.0L / pl);
      dlg += lp / (pl - 1.0L);
    } else if (p <= P0) {
      lg += std::log(1.0L + 1.0L / (pl * (pl - 1.0L)));
      dlg -= lp / (pl * (pl - 1.0L) + 1.0L);
    }
  }
  return {lg, dlg};
}

std::complex<long double> c_chi_product(const DirichletCharacter& chi, i64 f, u64 P0) {
  const u64 af = static_cast<u64>(std::llabs(f));
  std::complex<long double> prod = 1.0L;
  for (const u64 p : small_primes()) {
    if (p > P0 && af % p != 0) break;
    const auto c = chi(static_cast<i64>(p));
    const std::complex<long double> x(c.real(), c.imag());
    const long double pl = p;
    prod *= af % p == 0 ? 1.0L - x / pl : 1.0L + x / (pl * (pl - 1.0L));
  }
  return prod;
}

std::complex<long double> l_one_digamma(const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  std::complex<long double> s = 0;
  for (u64 a = 1; a < q; ++a) {
    const auto v = chi(static_cast<i64>(a));
    s += std::complex<long double>(v.real(), v.imag()) *
         boost::math::digamma(static_cast<long double>(a) / static_cast<long double>(q));
  }
  return s / -static_cast<long double>(q);
}

}  // namespace

TEST_CASE("c_0(1) against zeta(2) zeta(3) / zeta(6)") {
  const long double want = boost::math::zeta(2.0L) * boost::math::zeta(3.0L) / boost::math::zeta(6.0L);
  const auto v = c_s(1, 0.0, 1'000'000);
  CHECK(v.tail_bound <= 1e-5);
  CHECK(v.tail_bound <= 2.0 / (1e6 * std::log(1e6)));
  CHECK(std::fabs(static_cast<double>(std::log(want / v.value))) <= v.tail_bound);
  CHECK(v.cutoff == 1'000'000);
}

TEST_CASE("c_0(2) swaps the factor at 2") {
  const auto one = c_s(1, 0.0, 1'000'000), two = c_s(2, 0.0, 1'000'000);
  CHECK(std::fabs(std::log(3.0 * two.value / one.value)) <= one.tail_bound + two.tail_bound);
}

TEST_CASE("c_s is certified across cutoffs") {
  for (const i64 a : {1, 2, 6, 35, -12}) {
    for (const double s : {0.0, 0.5, 1.0}) {
      EulerProductValue prev = c_s(a, s, 1'000);
      for (const u64 P0 : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
        const auto cur = c_s(a, s, P0);
        CHECK(cur.tail_bound <= prev.tail_bound);
        CHECK(std::fabs(std::log(cur.value / prev.value)) < prev.tail_bound);
        prev = cur;
      }
    }
  }
  CHECK_THROWS_AS(c_s(0, 0.0, 1000), DomainError);
  CHECK_THROWS_AS(c_s(1, -0.5, 1000), DomainError);
}

TEST_CASE("c_0 matches a long double product") {
  for (const i64 a : {1, 4, 30, 97, 1001}) {
    const auto v = c_s(a, 0.0, 100'000);
    const auto [lg, dlg] = log_c0_and_derivative(a, 100'000);
    CHECK(std::fabs(std::log(v.value) - static_cast<double>(lg)) < 1e-12);
    const auto d = c0_prime(a, 100'000);
    CHECK(std::fabs(d.value - static_cast<double>(std::exp(lg) * dlg)) < 1e-10);
  }
}

TEST_CASE("c_0'(1) is negative and matches numerical differentiation") {
  const auto d = c0_prime(1, 1'000'000);
  CHECK(d.value < 0.0);
  const double h = 1e-4;
  const double f0 = c_s(1, 0.0, 1'000'000).value, f1 = c_s(1, h, 1'000'000).value,
               f2 = c_s(1, 2 * h, 1'000'000).value;
  const double fd = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
  CHECK(std::fabs(d.value - fd) < 1e-6);
  // the truncated value is within its certificate of the full-product derivative
  const auto [lg, dlg] = log_c0_and_derivative(1, 10'000'000);
  CHECK(std::fabs(d.value - static_cast<double>(std::exp(lg) * dlg)) <= d.abs_err);
}

TEST_CASE("c_0'(6) differs from c_0'(1) by the swapped factors at 2 and 3") {
  const u64 P0 = 1'000'000;
  const double r1 = c0_prime(1, P0).value / c_s(1, 0.0, P0).value;
  const double r6 = c0_prime(6, P0).value / c_s(6, 0.0, P0).value;
  double swap = 0.0;
  for (const double p : {2.0, 3.0}) swap += std::log(p) / (p - 1.0) + std::log(p) / (p * p - p + 1.0);
  CHECK(std::fabs(r6 - r1 - swap) < 1e-12);
}

TEST_CASE("c(chi, f)") {
  for (const i64 f : {1, 2, 12, -7, 360}) {
    const auto a = c_chi(principal_character(1), f, 100'000);
    const auto b = c_s(f, 0.0, 100'000);
    CHECK(a.value.real() == b.value);
    CHECK(a.value.imag() == 0.0);
  }
  const auto chi4 = chi_minus4();
  const auto v = c_chi(chi4, 1, 1'000'000);
  CHECK(std::fabs(v.value.imag()) < 1e-15);
  CHECK(v.value.real() > 0.0);
  CHECK(v.value.real() < 2.0);
  const auto full = c_chi_product(chi4, 1, 10'000'000);
  CHECK(std::fabs(std::log(static_cast<double>(full.real()) / v.value.real())) <= v.tail_bound);
  // chi(2) = 0: the factor at 2 is exactly 1 whether or not 2 | f
  CHECK(c_chi(chi4, 2, 1'000'000).value == v.value);
  for (const auto& chi : enumerate_characters(15)) {
    const auto got = c_chi(chi, 6, 50'000);
    const auto want = c_chi_product(chi, 6, 50'000);
    CHECK(std::abs(got.value - std::complex<double>(static_cast<double>(want.real()), static_cast<double>(want.imag()))) < 1e-12);
  }
}

TEST_CASE("Titchmarsh main term against an independent assembly") {
  const long double g = 0.57721566490153286060651209L;
  for (const auto& [sigma, f, Y, X] : std::vector<std::tuple<int, i64, i64, i64>>{
           {1, 1, 500'000, 1'000'000}, {1, 500'000, 500'000, 1'000'000}, {-1, 150, 10, 100}, {1, -3, 10, 1000}}) {
    ShiftedSumSpec s{sigma, f, Y, X};
    const auto [lg, dlg] = log_c0_and_derivative(f, 1'000'000);
    const long double c0 = std::exp(lg), c0p = c0 * dlg;
    const long double ax = sigma * X + f, ay = sigma * Y + f;
    const long double want = c0 * ((X + sigma * f) * std::log(ax) - (Y + sigma * f) * std::log(ay) + (2 * g - 1) * (X - Y)) +
                             2 * c0p * (X - Y);
    CHECK(std::fabs(titchmarsh_main_term(s, 1'000'000) / static_cast<double>(want) - 1.0) < 1e-10);
  }
  ShiftedSumSpec empty{1, 1, 1000, 1000};
  CHECK(titchmarsh_main_term(empty, 1000) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Hooley main term against an independent assembly") {
  ShiftedSumSpec s{1, 1, 500, 1000};
  const auto one = principal_character(1);
  const auto chi4 = chi_minus4();
  // mu(4) = 0 leaves L(1, chi_-4) c(chi_-4, 1) (X - Y)
  const auto v = hooley_main_term(one, chi4, s, 1'000'000);
  const double want = M_PI / 4 * static_cast<double>(c_chi_product(chi4, 1, 1'000'000).real()) * 500.0;
  CHECK(std::fabs(v.real() - want) < 1e-9 * want);
  CHECK(std::fabs(v.imag()) < 1e-8);

  const auto chi3 = enumerate_characters(3)[1];
  for (const i64 f : {1, 2, 5}) {
    ShiftedSumSpec t{1, f, 0, 1000};
    const auto got = hooley_main_term(chi3, chi4, t, 100'000);
    // psi = chi3 conj(chi4) mod 12; terms weighted by mu(c2)/phi(c2) and mu(c1)/phi(c1)
    const auto psi = character_product(chi3, chi4.conj());
    const auto want_c = l_one_digamma(psi) * c_chi_product(psi, f, 100'000) * (0.0L / 2.0L) +
                        l_one_digamma(psi.conj()) * c_chi_product(psi.conj(), f, 100'000) * (-1.0L / 2.0L);
    // each L(1) value is certified to kDefaultLTarget and enters with weight at most 1/2
    const double tol = 1000.0 * kDefaultLTarget * 0.5 *
                           static_cast<double>(std::abs(c_chi_product(psi, f, 100'000)) +
                                               std::abs(c_chi_product(psi.conj(), f, 100'000))) +
                       1e-11;
    CHECK(std::fabs(got.real() - 1000.0 * static_cast<double>(want_c.real())) < tol);
    CHECK(std::fabs(got.imag() - 1000.0 * static_cast<double>(want_c.imag())) < tol);
  }
  CHECK_THROWS_AS(hooley_main_term(chi4, chi4, s, 1000), DomainError);
  CHECK_THROWS_AS(hooley_main_term(principal_character(3), chi4, s, 1000), DomainError);
}

TEST_CASE("logarithmic integral") {
  CHECK(log_integral(2.0) == 0.0);
  for (const double x : {3.0, 10.0, 1e3, 1e6, 1e9}) {
    const double want = boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
    CHECK(std::fabs(log_integral(x) / want - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(log_integral(1.0), DomainError);
}

TEST_CASE("two squares main term") {
  for (const u64 n : {10'007ULL, 100'003ULL, 999'983ULL, 1000ULL}) {
    const auto chi4 = chi_minus4();
    long double local = 1.0L;
    for (const auto& [p, e] : oracle::factor(n)) {
      const long double pl = p, c = chi4(static_cast<i64>(p)).real();
      local *= (pl - 1) * (pl - 1) / (pl * pl - pl + c);
    }
    const long double li = boost::math::expint(std::log(static_cast<long double>(n))) - boost::math::expint(std::log(2.0L));
    const long double want = M_PI * li * c_chi_product(chi4, 1, 1'000'000).real() * local;
    CHECK(std::fabs(two_squares_main_term(n, 1'000'000) / static_cast<double>(want) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(two_squares_main_term(2, 1000), DomainError);
}

TEST_CASE("sums of m/phi(m) and 1/phi(m)") {
  CHECK(sum_over_phi(3, 1, true) == doctest::Approx(4.5));
  CHECK(sum_over_phi(3, 2, true) == doctest::Approx(2.5));
  CHECK(sum_over_phi(3, 1, false) == doctest::Approx(2.5));
  for (const i64 a : {1, 6, 10}) {
    long double w = 0, u = 0;
    for (u64 m = 1; m <= 2000; ++m) {
      if (std::gcd(m, static_cast<u64>(a)) != 1) continue;
      w += static_cast<long double>(m) / oracle::phi(m);
      u += 1.0L / oracle::phi(m);
    }
    CHECK(std::fabs(sum_over_phi(2000, a, true) - static_cast<double>(w)) < 1e-9);
    CHECK(std::fabs(sum_over_phi(2000, a, false) - static_cast<double>(u)) < 1e-12);
  }
  const double x = 1e5;
  CHECK(std::fabs(sum_over_phi(100'000, 1, true) - x * c_s(1, 0.0, 1'000'000).value) <= 25 * std::log(x));
}
