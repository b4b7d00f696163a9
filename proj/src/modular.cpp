#include "titchlab/modular.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace titchlab {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    const i128 tr = old_r - q * r;
    old_r = r;
    r = tr;
    const i128 ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) return std::nullopt;
  i128 inv = old_s % static_cast<i128>(m);
  if (inv < 0) inv += m;
  return static_cast<u64>(inv);
}

std::vector<u64> batch_inverse(std::span<const u64> values, u64 m) {
  const std::size_t n = values.size();
  std::vector<u64> prefix(n);
  u64 acc = 1 % m;
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i] = acc;
    acc = mul_mod(acc, values[i], m);
  }
  const auto inv_total = inverse_mod(acc, m);
  if (!inv_total) throw std::domain_error("batch_inverse: non-unit in batch");
  std::vector<u64> out(n);
  u64 running = *inv_total;
  for (std::size_t i = n; i-- > 0;) {
    out[i] = mul_mod(running, prefix[i], m);
    running = mul_mod(running, values[i], m);
  }
  return out;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(u64 n) {
  const u64 r = isqrt(n);
  return r * r == n;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient below 3.3e24.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1;
    constexpr u64 kBatch = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace titchlab
