#include "titchlab/singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "titchlab/errors.hpp"
#include "titchlab/parallel.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

constexpr u64 kMaxCutoff = 2'000'000'000ULL;
constexpr std::size_t kPrimeBlock = 1 << 14;

// pi(t) < 1.25506 t / log t (t > 1) and theta(t) < 1.01624 t (t > 0).
constexpr double kPiUpper = 1.25506;
constexpr double kThetaUpper = 1.01624;

// integral_P^inf (2t - 1) / (t (t-1)^2) dt
double tail_integral(double P) { return -std::log1p(-1.0 / P) + 1.0 / (P - 1.0); }

std::vector<u64> prime_divisors(i64 a) {
  std::vector<u64> ps;
  const u64 m = a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a);
  for (const auto& pp : factorize(m).prime_powers) ps.push_back(pp.p);
  return ps;
}

bool contains(const std::vector<u64>& sorted, u64 p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

// Sums term(p) over primes p <= P0 in fixed blocks, merged in block order.
template <class Term>
double blocked_prime_sum(u64 P0, Term term) {
  const auto& primes = cached_primes(P0);
  const auto end = static_cast<std::size_t>(
      std::upper_bound(primes.begin(), primes.end(), P0) - primes.begin());
  const std::size_t n_blocks = (end + kPrimeBlock - 1) / kPrimeBlock;
  std::vector<CompensatedSum> partial(n_blocks);
  parallel_for_blocks(n_blocks, 0, [&](std::size_t b) {
    const std::size_t hi = std::min(end, (b + 1) * kPrimeBlock);
    for (std::size_t i = b * kPrimeBlock; i < hi; ++i) partial[b] += term(u64{primes[i]});
  });
  CompensatedSum total;
  for (const auto& s : partial) total.add(s);
  return total.value();
}

void check_cutoff(u64 P0) {
  if (P0 < 2) throw DomainError("Euler product cutoff P0 must be >= 2");
  if (P0 > kMaxCutoff) throw CapacityError("Euler product cutoff exceeds " + std::to_string(kMaxCutoff));
}

// p^{-(s+1)}
double neg_pow(u64 p, double s) {
  if (s == 0.0) return 1.0 / static_cast<double>(p);
  return std::pow(static_cast<double>(p), -(s + 1.0));
}

double factor_tail(u64 p, double s) {
  // 1 / ((p - 1) p^{s+1})
  if (s == 0.0) return 1.0 / (static_cast<double>(p - 1) * static_cast<double>(p));
  return std::pow(static_cast<double>(p), -(s + 1.0)) / static_cast<double>(p - 1);
}

}  // namespace

double prime_tail_bound(u64 P) {
  if (P < 2) throw DomainError("prime_tail_bound: P must be >= 2");
  const double Pd = static_cast<double>(P);
  // sum_{n > P} 1/(n(n-1)) = 1/P always holds
  double bound = 1.0 / Pd;
  if (P >= 17) {
    // Stieltjes integration against pi(t), with pi(P) >= P / log P for P >= 17
    const double refined = (kPiUpper * tail_integral(Pd) - 1.0 / (Pd - 1.0)) / std::log(Pd);
    bound = std::min(bound, refined);
  }
  return bound;
}

double prime_log_tail_bound(u64 P) {
  if (P < 2) throw DomainError("prime_log_tail_bound: P must be >= 2");
  return kThetaUpper * tail_integral(static_cast<double>(P));
}

const std::vector<std::uint32_t>& cached_primes(u64 limit) {
  static std::mutex mu;
  static std::vector<std::uint32_t> primes;
  static u64 sieved_to = 0;
  std::lock_guard lock(mu);
  if (limit > sieved_to) {
    const u64 target = std::max<u64>(limit, 1'000'000);
    if (target > kMaxCutoff) throw CapacityError("cached_primes: limit too large");
    primes = primes_up_to(static_cast<std::uint32_t>(target));
    sieved_to = target;
  }
  return primes;
}

void ShiftedSumSpec::validate() const {
  if (sigma != 1 && sigma != -1) throw DomainError("ShiftedSumSpec: sigma must be +1 or -1");
  if (f == 0) throw DomainError("ShiftedSumSpec: f must be nonzero");
  if (Y < std::max<i64>(-f, 0)) throw DomainError("ShiftedSumSpec: requires Y >= max(-f, 0)");
  if (!(Y < X)) throw DomainError("ShiftedSumSpec: requires Y < X");
  if (sigma == 1) {
    const double ratio = static_cast<double>(X + f) / static_cast<double>(X);
    if (ratio < 0.25 || ratio > 4.0)
      throw DomainError("ShiftedSumSpec: (X + f)/X must lie in [1/4, 4]");
  } else if (f <= X) {
    throw DomainError("ShiftedSumSpec: sigma = -1 requires f > X");
  }
}

EulerProductValue c_s(i64 a, double s, u64 P0) {
  if (a == 0) throw DomainError("c_s: a must be nonzero");
  if (!(s >= 0.0)) throw DomainError("c_s: s must be >= 0");
  check_cutoff(P0);
  const auto divs = prime_divisors(a);

  CompensatedSum log_sum;
  for (const u64 p : divs) log_sum += std::log1p(-neg_pow(p, s));
  log_sum += blocked_prime_sum(P0, [&](u64 p) {
    return contains(divs, p) ? 0.0 : std::log1p(factor_tail(p, s));
  });
  return {std::exp(log_sum.value()), P0, prime_tail_bound(P0)};
}

CertifiedValue c0_prime(i64 a, u64 P0) {
  const auto c0 = c_s(a, 0.0, P0);
  const auto divs = prime_divisors(a);

  CompensatedSum dlog;
  for (const u64 p : divs) dlog += std::log(static_cast<double>(p)) / static_cast<double>(p - 1);
  dlog += -blocked_prime_sum(P0, [&](u64 p) {
    if (contains(divs, p)) return 0.0;
    const double pd = static_cast<double>(p);
    return std::log(pd) / ((pd - 1.0) * pd + 1.0);
  });
  const double L = dlog.value();
  const double tc = c0.tail_bound;
  const double tl = prime_log_tail_bound(P0);
  const double err = c0.value * std::expm1(tc) * std::fabs(L) + c0.value * std::exp(tc) * tl;
  return {c0.value * L, P0, err};
}

ComplexEulerProductValue c_chi(const DirichletCharacter& chi, i64 f, u64 P0) {
  if (f == 0) throw DomainError("c_chi: f must be nonzero");
  check_cutoff(P0);
  const auto divs = prime_divisors(f);

  // log(1 + z) with the real-axis case routed through log1p, so that the
  // principal character reproduces c_0(f) bit for bit
  auto log1p_c = [](std::complex<double> z) -> std::complex<double> {
    if (z.imag() == 0.0) return std::log1p(z.real());
    return {0.5 * std::log1p(2.0 * z.real() + std::norm(z)), std::atan2(z.imag(), 1.0 + z.real())};
  };

  CompensatedComplexSum log_sum;
  for (const u64 p : divs)
    log_sum += log1p_c(-chi(static_cast<i64>(p)) * neg_pow(p, 0.0));
  const double re = blocked_prime_sum(P0, [&](u64 p) {
    if (contains(divs, p)) return 0.0;
    return log1p_c(chi(static_cast<i64>(p)) * factor_tail(p, 0.0)).real();
  });
  const double im = blocked_prime_sum(P0, [&](u64 p) {
    if (contains(divs, p)) return 0.0;
    return log1p_c(chi(static_cast<i64>(p)) * factor_tail(p, 0.0)).imag();
  });
  log_sum += std::complex<double>(re, im);
  // |log(1 + z)| <= 2|z| for |z| <= 1/2
  return {std::exp(log_sum.value()), P0, 2.0 * prime_tail_bound(P0)};
}

double titchmarsh_main_term(const ShiftedSumSpec& spec, u64 P0) {
  const double sigma = spec.sigma;
  const double f = static_cast<double>(spec.f);
  const double X = static_cast<double>(spec.X);
  const double Y = static_cast<double>(spec.Y);
  const double arg_x = sigma * X + f;
  const double arg_y = sigma * Y + f;
  if (arg_x <= 0.0 || arg_y <= 0.0)
    throw DomainError("titchmarsh_main_term: logarithm argument sigma*X+f or sigma*Y+f is <= 0");
  const double c0 = c_s(spec.f, 0.0, P0).value;
  const double c0p = c0_prime(spec.f, P0).value;
  const double bracket = (X + sigma * f) * std::log(arg_x) - (Y + sigma * f) * std::log(arg_y) +
                         (2.0 * kEulerGamma - 1.0) * (X - Y);
  return c0 * bracket + 2.0 * c0p * (X - Y);
}

std::complex<double> hooley_main_term(const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2,
                                      const ShiftedSumSpec& spec, u64 P0) {
  if (!chi1.is_primitive() || !chi2.is_primitive())
    throw DomainError("hooley_main_term: both characters must be primitive");
  if (chi1 == chi2) throw DomainError("hooley_main_term: chi1 == chi2 (pole of L(1, chi1 conj(chi2)))");
  const u64 c1 = chi1.modulus();
  const u64 c2 = chi2.modulus();
  const auto psi = character_product(chi1, chi2.conj());  // chi1 conj(chi2)
  const double X_minus_Y = static_cast<double>(spec.X - spec.Y);

  std::complex<double> total = 0.0;
  if (const int mu2 = moebius(c2); mu2 != 0) {
    const auto L = l_one(psi).value;
    const auto c = c_chi(psi, spec.f, P0).value;
    total += L * c * (static_cast<double>(mu2) / static_cast<double>(euler_phi(c2)));
  }
  if (const int mu1 = moebius(c1); mu1 != 0) {
    const auto psi_bar = psi.conj();
    const auto L = l_one(psi_bar).value;
    const auto c = c_chi(psi_bar, spec.f, P0).value;
    total += L * c * (static_cast<double>(mu1) / static_cast<double>(euler_phi(c1)));
  }
  return total * X_minus_Y;
}

double log_integral(double x) {
  if (!(x > 1.0)) throw DomainError("log_integral: x must be > 1");
  if (x == 2.0) return 0.0;
  // t = e^u: integral_{log 2}^{log x} e^u / u du
  auto integrand = [](double u) { return std::exp(u) / u; };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, std::log(2.0), std::log(x), 20, 1e-12, &err);
  return v;
}

double two_squares_main_term(u64 n, u64 P0) {
  if (n < 3) throw DomainError("two_squares_main_term: n must be >= 3");
  const auto chi = chi_minus4();
  const double product = c_chi(chi, 1, P0).value.real();
  double local = 1.0;
  for (const auto& pp : factorize(n).prime_powers) {
    const double p = static_cast<double>(pp.p);
    const double c = chi(static_cast<i64>(pp.p)).real();
    local *= (p - 1.0) * (p - 1.0) / (p * p - p + c);
  }
  return std::numbers::pi * log_integral(static_cast<double>(n)) * product * local;
}

double sum_over_phi(const SieveTables& tables, u64 x, i64 a, bool weighted) {
  if (x < 2) throw DomainError("sum_over_phi: x must be >= 2");
  if (a == 0) throw DomainError("sum_over_phi: a must be nonzero");
  if (tables.range_start() != 1 || tables.range_end() <= x)
    throw RangeError("sum_over_phi: sieve must cover [1, x]");
  const auto divs = prime_divisors(a);
  CompensatedSum s;
  for (u64 m = 1; m <= x; ++m) {
    bool coprime = true;
    for (const u64 p : divs)
      if (m % p == 0) {
        coprime = false;
        break;
      }
    if (!coprime) continue;
    const double phi = static_cast<double>(tables.phi(m));
    s += weighted ? static_cast<double>(m) / phi : 1.0 / phi;
  }
  return s.value();
}

double sum_over_phi(u64 x, i64 a, bool weighted) {
  if (x < 2) throw DomainError("sum_over_phi: x must be >= 2");
  return sum_over_phi(build_sieve(1, x), x, a, weighted);
}

}  // namespace titchlab
