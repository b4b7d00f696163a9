#include "ntt.hpp"

#include <stdexcept>

#include "titchlab/parallel.hpp"

namespace titchlab::detail {

namespace {

u32 pow_u32(u32 b, u64 e, u32 p) { return static_cast<u32>(pow_mod(b, e, p)); }

u32 primitive_root(u32 p) {
  std::vector<u32> qs;
  u32 m = p - 1;
  for (u32 q = 2; static_cast<u64>(q) * q <= m; ++q) {
    if (m % q) continue;
    qs.push_back(q);
    while (m % q == 0) m /= q;
  }
  if (m > 1) qs.push_back(m);
  for (u32 g = 2;; ++g) {
    bool ok = true;
    for (const u32 q : qs) ok = ok && pow_u32(g, (p - 1) / q, p) != 1;
    if (ok) return g;
  }
}

std::size_t ntt_size(std::size_t length) {
  std::size_t n = 1;
  while (n < 2 * length) n <<= 1;
  return n;
}

}  // namespace

NttPrime::NttPrime(u32 p) : p_(p) {
  u32 inv = p;  // Newton iteration for p^{-1} mod 2^32
  for (int i = 0; i < 5; ++i) inv *= 2u - p * inv;
  neg_inv_ = 0u - inv;
  r2_ = static_cast<u32>((static_cast<u128>(1) << 64) % p);
  generator_ = primitive_root(p);
}

void NttPrime::prepare(std::size_t n) const {
  if (table_size_ == n) return;
  if ((p_ - 1) % n != 0) throw std::logic_error("NttPrime: transform length does not divide p - 1");
  roots_.assign(n, 0);
  inv_roots_.assign(n, 0);
  for (std::size_t len = 1; len < n; len <<= 1) {
    const u32 w = pow_u32(generator_, (p_ - 1) / (2 * len), p_);
    const u32 wm = to_mont(w);
    const u32 wi = to_mont(pow_u32(w, p_ - 2, p_));
    u32 cur = to_mont(1), cur_inv = to_mont(1);
    for (std::size_t j = 0; j < len; ++j) {
      roots_[len + j] = cur;
      inv_roots_[len + j] = cur_inv;
      cur = mul(cur, wm);
      cur_inv = mul(cur_inv, wi);
    }
  }
  table_size_ = n;
}

void NttPrime::forward(std::vector<u32>& a) const {
  const std::size_t n = a.size();
  prepare(n);
  for (std::size_t len = n >> 1; len >= 1; len >>= 1)
    for (std::size_t i = 0; i < n; i += 2 * len)
      for (std::size_t j = 0; j < len; ++j) {
        const u32 u = a[i + j], v = a[i + j + len];
        a[i + j] = add(u, v);
        a[i + j + len] = mul(sub(u, v), roots_[len + j]);
      }
}

void NttPrime::inverse(std::vector<u32>& a) const {
  const std::size_t n = a.size();
  prepare(n);
  for (std::size_t len = 1; len < n; len <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * len)
      for (std::size_t j = 0; j < len; ++j) {
        const u32 u = a[i + j], v = mul(a[i + j + len], inv_roots_[len + j]);
        a[i + j] = add(u, v);
        a[i + j + len] = sub(u, v);
      }
  const u32 n_inv = to_mont(pow_u32(static_cast<u32>(n % p_), p_ - 2, p_));
  for (auto& x : a) x = mul(x, n_inv);
}

namespace {

struct GarnerConstants {
  // radix_mod[i][j] = prod_{l < j} p_l mod p_i; inv_radix[i] = 1 / radix_mod[i][i]
  u64 radix_mod[5][5];
  u64 inv_radix[5];
  GarnerConstants() {
    for (int i = 0; i < 5; ++i) {
      const u64 p = kNttPrimes[i];
      u64 prefix = 1;
      for (int j = 0; j < 5; ++j) {
        radix_mod[i][j] = prefix;
        prefix = mul_mod(prefix, kNttPrimes[j] % p, p);
      }
      inv_radix[i] = pow_mod(radix_mod[i][i], p - 2, p);
    }
  }
};

const GarnerConstants& garner_constants() {
  static const GarnerConstants g;
  return g;
}

// Value of x mod prod(kNttPrimes) in [0, prod), if it is below 2^127.
bool garner_small(std::span<const u32, 5> r, u128& out) {
  const auto& g = garner_constants();
  u64 digits[5];
  for (int i = 0; i < 5; ++i) {
    const u64 p = kNttPrimes[i];
    u64 acc = 0;
    for (int j = 0; j < i; ++j) acc = (acc + mul_mod(digits[j], g.radix_mod[i][j], p)) % p;
    digits[i] = mul_mod((r[i] % p + p - acc) % p, g.inv_radix[i], p);
  }
  // the first four primes multiply to below 2^121, so radix never overflows
  u128 value = 0, radix = 1;
  for (int i = 0; i < 5; ++i) {
    u128 term = 0;
    if (__builtin_mul_overflow(radix, static_cast<u128>(digits[i]), &term)) return false;
    if (__builtin_add_overflow(value, term, &value)) return false;
    if (i < 4) radix *= kNttPrimes[i];
  }
  out = value;
  return value < (static_cast<u128>(1) << 127);
}

}  // namespace

i128 crt_symmetric(std::span<const u32, 5> residues) {
  u128 pos = 0;
  if (garner_small(residues, pos)) return static_cast<i128>(pos);
  u32 neg[5];
  for (int i = 0; i < 5; ++i) {
    const u32 v = residues[i] % kNttPrimes[i];
    neg[i] = v == 0 ? 0 : kNttPrimes[i] - v;
  }
  u128 mag = 0;
  if (garner_small(std::span<const u32, 5>(neg), mag)) return -static_cast<i128>(mag);
  throw std::logic_error("crt_symmetric: value outside the signed 128-bit range");
}

std::vector<i128> eta24_series(std::size_t length, unsigned threads) {
  if (length == 0) return {};
  const std::size_t n = ntt_size(length);
  std::vector<std::vector<u32>> residues(5);

  parallel_for_blocks(5, threads, [&](std::size_t k) {
    const NttPrime P(kNttPrimes[k]);
    const u32 one = P.to_mont(1), minus_one = P.to_mont(P.modulus() - 1);

    std::vector<u32> a(n, 0);
    // sum_k (-1)^k q^{k(3k-1)/2} over all integers k
    a[0] = one;
    for (u64 j = 1;; ++j) {
      const u64 e1 = j * (3 * j - 1) / 2, e2 = j * (3 * j + 1) / 2;
      if (e1 >= length) break;
      const u32 s = (j & 1) ? minus_one : one;
      a[e1] = s;
      if (e2 < length) a[e2] = s;
    }
    auto truncate = [&](std::vector<u32>& v) { std::fill(v.begin() + static_cast<std::ptrdiff_t>(length), v.end(), 0u); };
    auto square = [&](std::vector<u32>& v) {
      P.forward(v);
      for (auto& x : v) x = P.mul(x, x);
      P.inverse(v);
      truncate(v);
    };
    square(a);  // eta^2
    square(a);  // eta^4
    square(a);  // eta^8
    std::vector<u32> f8 = a;
    P.forward(f8);
    for (std::size_t i = 0; i < n; ++i) a[i] = P.mul(f8[i], f8[i]);
    P.inverse(a);  // eta^16
    truncate(a);
    P.forward(a);
    for (std::size_t i = 0; i < n; ++i) a[i] = P.mul(a[i], f8[i]);
    P.inverse(a);  // eta^24
    a.resize(length);
    for (auto& x : a) x = P.from_mont(x);
    residues[k] = std::move(a);
  });

  std::vector<i128> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const u32 r[5] = {residues[0][i], residues[1][i], residues[2][i], residues[3][i], residues[4][i]};
    out[i] = crt_symmetric(std::span<const u32, 5>(r));
  }
  return out;
}

}  // namespace titchlab::detail
