#include "titchlab/cusp_forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ntt.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

constexpr std::size_t kMaxListedViolations = 32;
constexpr char kMagic[4] = {'T', 'A', 'U', '1'};

double normalize(i128 tau, u64 n) {
  const long double v = static_cast<long double>(tau) / std::pow(static_cast<long double>(n), 5.5L);
  return static_cast<double>(v);
}

void fill_lambda(TauTable& t) {
  t.lambda.assign(t.n_max + 1, 0.0);
  for (u64 n = 1; n <= t.n_max; ++n) t.lambda[n] = normalize(t.tau[n], n);
}

void check_range(const TauTable& t, u64 n) {
  if (n == 0 || n > t.n_max)
    throw RangeError("tau table covers 1.." + std::to_string(t.n_max) + ", asked for " + std::to_string(n));
}

std::vector<std::uint32_t> smallest_prime_factors(u64 n_max) {
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (u64 i = 2; i <= n_max; ++i) {
    if (spf[i]) continue;
    for (u64 j = i; j <= n_max; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

bool checked_mul(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }

}  // namespace

i128 TauTable::tau_at(u64 n) const {
  check_range(*this, n);
  return tau[n];
}

double TauTable::lambda_at(u64 n) const {
  check_range(*this, n);
  return lambda[n];
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 m = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string s;
  while (m) {
    s.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

TauTable build_tau_table(u64 n_max, unsigned threads) {
  if (n_max == 0) throw DomainError("build_tau_table: n_max must be >= 1");
  if (n_max > kTauTableMax)
    throw CapacityError("build_tau_table: n_max exceeds " + std::to_string(kTauTableMax));
  const auto series = detail::eta24_series(n_max, threads);
  TauTable t;
  t.n_max = n_max;
  t.tau.assign(n_max + 1, 0);
  for (u64 n = 1; n <= n_max; ++n) t.tau[n] = series[n - 1];
  fill_lambda(t);
  return t;
}

HeckeReport hecke_consistency_report(const TauTable& table) {
  HeckeReport rep;
  const u64 N = table.n_max;
  const auto& tau = table.tau;
  auto violate = [&](const char* kind, u64 n) {
    ++rep.violation_count;
    const auto listed = std::count_if(rep.violations.begin(), rep.violations.end(),
                                      [&](const HeckeViolation& v) { return v.kind == kind; });
    if (static_cast<u64>(listed) < kMaxListedViolations) rep.violations.push_back({kind, n});
  };

  if (N >= 1 && tau[1] != 1) violate("multiplicative", 1);

  const auto spf = smallest_prime_factors(N);
  std::vector<std::uint32_t> d(N + 1, 1);
  for (u64 n = 2; n <= N; ++n) {
    const u64 p = spf[n];
    u64 pe = 1;
    int e = 0;
    u64 m = n;
    while (m % p == 0) {
      m /= p;
      pe *= p;
      ++e;
    }
    d[n] = d[m] * static_cast<std::uint32_t>(e + 1);
    if (m > 1) {
      ++rep.factorizations;
      i128 prod;
      if (!checked_mul(tau[pe], tau[m], prod) || prod != tau[n]) violate("factorization", n);
    }
  }

  const u64 lim = std::min<u64>(N, 100'000);
  for (u64 m = 2; m * 2 <= lim; ++m)
    for (u64 n = 2; m * n <= lim; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ++rep.coprime_pairs;
      i128 prod;
      if (!checked_mul(tau[m], tau[n], prod) || prod != tau[m * n]) violate("multiplicative", m * n);
    }

  for (u64 p = 2; p * p <= N; ++p) {
    if (spf[p] != p) continue;
    i128 p11 = 1;
    for (int i = 0; i < 11; ++i) p11 *= static_cast<i128>(p);
    // tau(p^{k+1}) with p^{k+1} <= N
    for (u64 pk = p, pk_prev = 1; pk * p <= N; pk_prev = pk, pk *= p) {
      ++rep.prime_powers;
      i128 a, b;
      const bool ok = checked_mul(tau[p], tau[pk], a) && checked_mul(p11, tau[pk_prev], b);
      if (!ok || a - b != tau[pk * p]) violate("recursion", pk * p);
    }
  }

  bool pos = false, neg = false;
  for (u64 n = 1; n <= N; ++n) {
    ++rep.deligne;
    const double ratio = std::fabs(table.lambda[n]) / d[n];
    rep.max_lambda_over_d = std::max(rep.max_lambda_over_d, ratio);
    if (ratio > 1.0 + 1e-12) violate("deligne", n);
    if (n >= 2 && spf[n] == n) {
      rep.max_abs_lambda_prime = std::max(rep.max_abs_lambda_prime, std::fabs(table.lambda[n]));
      if (n <= 10'000) {
        pos = pos || table.lambda[n] > 0;
        neg = neg || table.lambda[n] < 0;
      }
    }
  }
  rep.lambda_prime_both_signs = pos && neg;
  return rep;
}

double rankin_selberg_partial(const TauTable& table, u64 X) {
  if (X > table.n_max) throw RangeError("rankin_selberg_partial: X exceeds table");
  CompensatedSum s;
  for (u64 n = 1; n <= X; ++n) s += table.lambda[n] * table.lambda[n];
  return s.value();
}

double rankin_selberg_gcd_weighted(const TauTable& table, u64 X, u64 c) {
  if (X > table.n_max) throw RangeError("rankin_selberg_gcd_weighted: X exceeds table");
  if (c == 0) throw DomainError("rankin_selberg_gcd_weighted: c must be >= 1");
  CompensatedSum s;
  for (u64 n = 1; n <= X; ++n)
    s += std::fabs(table.lambda[n]) * std::sqrt(static_cast<double>(std::gcd(n, c)));
  return s.value();
}

void save_tau_table(const TauTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_tau_table: cannot open " + path);
  out.write(kMagic, 4);
  unsigned char buf[16];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(table.n_max >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
  for (u64 n = 1; n <= table.n_max; ++n) {
    const u128 v = static_cast<u128>(table.tau[n]);
    for (int i = 0; i < 16; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 16);
  }
  if (!out) throw std::runtime_error("save_tau_table: write failed for " + path);
}

TauTable load_tau_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_tau_table: cannot open " + path);
  char magic[4];
  unsigned char buf[16];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
    throw DomainError("load_tau_table: bad magic in " + path);
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw DomainError("load_tau_table: truncated header");
  u64 n_max = 0;
  for (int i = 0; i < 8; ++i) n_max |= static_cast<u64>(buf[i]) << (8 * i);
  if (n_max == 0 || n_max > kTauTableMax) throw DomainError("load_tau_table: n_max out of range");
  TauTable t;
  t.n_max = n_max;
  t.tau.assign(n_max + 1, 0);
  for (u64 n = 1; n <= n_max; ++n) {
    if (!in.read(reinterpret_cast<char*>(buf), 16)) throw DomainError("load_tau_table: truncated body");
    u128 v = 0;
    for (int i = 0; i < 16; ++i) v |= static_cast<u128>(buf[i]) << (8 * i);
    t.tau[n] = static_cast<i128>(v);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DomainError("load_tau_table: trailing bytes");
  fill_lambda(t);
  return t;
}

}  // namespace titchlab
