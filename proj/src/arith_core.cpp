#include "titchlab/arith_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "titchlab/errors.hpp"
#include "titchlab/parallel.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

std::atomic<u64> g_budget_mb{0};

u64 env_budget_mb() {
  if (const char* s = std::getenv("TITCHLAB_MEM_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && v > 0) return v;
  }
  return 2048;
}

}  // namespace

u64 sieve_memory_budget_bytes() {
  const u64 mb = g_budget_mb.load();
  return (mb != 0 ? mb : env_budget_mb()) << 20;
}

void set_sieve_memory_budget_mb(u64 mb) { g_budget_mb = mb; }

u64 sieve_bytes_required(u64 range_start, u64 range_len) {
  constexpr u64 kPerEntry = sizeof(double) + sizeof(std::int8_t) + sizeof(u64) +
                            sizeof(std::uint32_t) + sizeof(u64);
  const u64 root = isqrt(range_start + range_len);
  // base primes (~root / ln root entries) plus the odd-only marking array
  const u64 base = root / 2 + 4 * (root / 8 + 1);
  return range_len * kPerEntry + base;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  // composite[i] marks 2i + 1
  const std::size_t half = (static_cast<std::size_t>(limit) - 1) / 2 + 1;
  std::vector<bool> composite(half, false);
  for (std::size_t i = 1; i < half; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (u64 m = p * p; m <= limit; m += 2 * p) composite[(m - 1) / 2] = true;
  }
  return primes;
}

SieveTables build_sieve(u64 range_start, u64 range_len, unsigned threads) {
  if (range_start < 1) throw DomainError("build_sieve: range_start must be >= 1");
  if (range_len < 1) throw DomainError("build_sieve: range_len must be >= 1");
  if (range_start > (u64{1} << 63) || range_len > (u64{1} << 63) - range_start)
    throw DomainError("build_sieve: range exceeds 2^63");
  if (sieve_bytes_required(range_start, range_len) > sieve_memory_budget_bytes())
    throw CapacityError("build_sieve: range_len " + std::to_string(range_len) +
                        " exceeds the sieve memory budget");

  SieveTables t;
  t.start_ = range_start;
  t.len_ = range_len;
  t.lambda_.assign(range_len, 0.0);
  t.mu_.assign(range_len, 1);
  t.phi_.assign(range_len, 1);
  t.tau_.assign(range_len, 1);
  t.spf_.assign(range_len, 0);

  const u64 end = range_start + range_len;  // exclusive
  const u64 root = isqrt(end - 1);
  if (root > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("build_sieve: base primes exceed 32 bits");
  const auto base = primes_up_to(static_cast<std::uint32_t>(root));

  const u64 n_blocks = (range_len + kSieveBlock - 1) / kSieveBlock;
  parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
    const u64 off_lo = b * kSieveBlock;
    const u64 off_hi = std::min(range_len, off_lo + kSieveBlock);
    const u64 lo = range_start + off_lo;
    const u64 hi = range_start + off_hi;
    std::vector<u64> rem(off_hi - off_lo);
    std::vector<std::uint8_t> distinct(off_hi - off_lo, 0);
    for (u64 i = 0; i < rem.size(); ++i) rem[i] = lo + i;

    for (const u64 p : base) {
      u64 m = (lo + p - 1) / p * p;
      for (; m < hi; m += p) {
        const u64 i = m - lo;
        const u64 k = off_lo + i;
        int e = 0;
        u64 pk = 1;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          pk *= p;
          ++e;
        }
        t.mu_[k] = e > 1 ? 0 : static_cast<std::int8_t>(-t.mu_[k]);
        t.phi_[k] *= (pk / p) * (p - 1);
        t.tau_[k] *= static_cast<std::uint32_t>(e + 1);
        if (t.spf_[k] == 0) t.spf_[k] = p;
        ++distinct[i];
      }
    }
    for (u64 i = 0; i < rem.size(); ++i) {
      const u64 k = off_lo + i;
      if (rem[i] > 1) {
        t.mu_[k] = static_cast<std::int8_t>(-t.mu_[k]);
        t.phi_[k] *= rem[i] - 1;
        t.tau_[k] *= 2;
        if (t.spf_[k] == 0) t.spf_[k] = rem[i];
        ++distinct[i];
      }
      if (distinct[i] == 1) t.lambda_[k] = std::log(static_cast<double>(t.spf_[k]));
    }
  });
  return t;
}

u64 FactorizationView::radical() const {
  u64 r = 1;
  for (const auto& pp : prime_powers) r *= pp.p;
  return r;
}

bool FactorizationView::is_squarefree() const {
  return std::all_of(prime_powers.begin(), prime_powers.end(),
                     [](const PrimePower& pp) { return pp.e == 1; });
}

bool FactorizationView::divisible_by(u64 p) const {
  return std::any_of(prime_powers.begin(), prime_powers.end(),
                     [p](const PrimePower& pp) { return pp.p == p; });
}

namespace {

void split_into(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  split_into(d, primes);
  split_into(n / d, primes);
}

FactorizationView assemble(u64 n, std::vector<u64>& primes) {
  std::sort(primes.begin(), primes.end());
  FactorizationView f;
  f.n = n;
  for (const u64 p : primes) {
    if (!f.prime_powers.empty() && f.prime_powers.back().p == p)
      ++f.prime_powers.back().e;
    else
      f.prime_powers.push_back({p, 1});
  }
  return f;
}

void factor_remaining(u64 m, std::vector<u64>& primes) {
  for (u64 p = 2; p < 1024 && p * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  split_into(m, primes);
}

}  // namespace

FactorizationView factorize(u64 n) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  std::vector<u64> primes;
  factor_remaining(n, primes);
  return assemble(n, primes);
}

FactorizationView factorize(u64 n, const SieveTables& tables) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  std::vector<u64> primes;
  u64 m = n;
  while (m > 1 && tables.contains(m)) {
    const u64 p = tables.spf(m);
    primes.push_back(p);
    m /= p;
  }
  if (m > 1) factor_remaining(m, primes);
  return assemble(n, primes);
}

std::vector<u64> divisors(const FactorizationView& f) {
  std::vector<u64> ds{1};
  for (const auto& [p, e] : f.prime_powers) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

int moebius(const FactorizationView& f) {
  if (!f.is_squarefree()) return 0;
  return f.prime_powers.size() % 2 == 0 ? 1 : -1;
}

u64 euler_phi(const FactorizationView& f) {
  u64 r = 1;
  for (const auto& [p, e] : f.prime_powers) {
    r *= p - 1;
    for (int k = 1; k < e; ++k) r *= p;
  }
  return r;
}

u64 divisor_count(const FactorizationView& f) {
  u64 r = 1;
  for (const auto& pp : f.prime_powers) r *= static_cast<u64>(pp.e + 1);
  return r;
}

double von_mangoldt(u64 n) {
  if (n < 2) return 0.0;
  const auto f = factorize(n);
  return f.is_prime_power() ? std::log(static_cast<double>(f.prime_powers[0].p)) : 0.0;
}

std::pair<u64, u64> squarefree_powerfull_split(u64 c) {
  if (c == 0) throw DomainError("squarefree_powerfull_split: c must be >= 1");
  u64 c1 = 1;
  for (const auto& [p, e] : factorize(c).prime_powers)
    if (e == 1) c1 *= p;
  return {c1, c / c1};
}

u64 two_squares_count_nonzero(const FactorizationView& f) {
  u64 r = 4;
  for (const auto& [p, e] : f.prime_powers) {
    if (p % 4 == 1) {
      r *= static_cast<u64>(e + 1);
    } else if (p % 4 == 3 && e % 2 == 1) {
      r = 0;
      break;
    }
  }
  if (f.n >= 1 && is_square(f.n)) r -= 4;  // axis points (0, ±k), (±k, 0)
  return r;
}

u64 two_squares_count_nonzero(u64 n) {
  if (n == 0) throw DomainError("two_squares_count_nonzero: n must be >= 1");
  return two_squares_count_nonzero(factorize(n));
}

u64 two_squares_count_nonzero_enumerate(u64 n) {
  if (n == 0) throw DomainError("two_squares_count_nonzero_enumerate: n must be >= 1");
  u64 positive = 0;
  for (u64 x = 1; x * x < n; ++x)
    if (is_square(n - x * x)) ++positive;
  return 4 * positive;
}

double heath_brown_lambda(u64 n, u64 x, int J) {
  if (J < 1 || J > 5) throw DomainError("heath_brown_lambda: J must be in [1, 5]");
  if (n < 1 || n > x) throw DomainError("heath_brown_lambda: requires 1 <= n <= x");

  const auto fact = factorize(n);
  const auto ds = divisors(fact);
  const std::size_t k = ds.size();
  auto index_of = [&](u64 d) {
    return static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), d) - ds.begin());
  };
  // pairs[i] lists (index(e), index(d_i / e)) over e | d_i
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (ds[i] % ds[j] == 0) pairs[i].emplace_back(j, index_of(ds[i] / ds[j]));

  auto convolve = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
    std::vector<i64> out(k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (const auto& [e, q] : pairs[i]) out[i] += a[e] * b[q];
    return out;
  };

  // m <= x^{1/J}  <=>  m^J <= x
  auto below_cutoff = [&](u64 m) {
    u128 acc = 1;
    for (int i = 0; i < J; ++i) {
      acc *= m;
      if (acc > x) return false;
    }
    return true;
  };
  std::vector<i64> mu_cut(k), one(k, 1);
  for (std::size_t i = 0; i < k; ++i)
    mu_cut[i] = below_cutoff(ds[i]) ? moebius(factorize(ds[i])) : 0;

  CompensatedSum total;
  std::vector<i64> mu_power = mu_cut;  // mu_z^{*j}
  std::vector<i64> one_power(k, 0);    // 1^{*(j-1)}
  one_power[0] = 1;
  i64 binom = J;  // C(J, j)
  for (int j = 1; j <= J; ++j) {
    const auto weight = convolve(mu_power, one_power);
    // (weight * log)(n) = sum_{d | n} weight(d) log(n / d)
    CompensatedSum term;
    for (std::size_t i = 0; i < k; ++i)
      if (weight[i] != 0)
        term += static_cast<double>(weight[i]) * std::log(static_cast<double>(n / ds[i]));
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * static_cast<double>(binom) * term.value();

    mu_power = convolve(mu_power, mu_cut);
    one_power = convolve(one_power, one);
    binom = binom * (J - j) / (j + 1);
  }
  return total.value();
}

}  // namespace titchlab
