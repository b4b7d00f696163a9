#pragma once

// Number-theoretic transforms over word-sized primes, used to build exact
// power-series products that are reconstructed by CRT.

#include <cstdint>
#include <span>
#include <vector>

#include "titchlab/modular.hpp"

namespace titchlab::detail {

using u32 = std::uint32_t;

/// Arithmetic mod an odd prime p < 2^31 with 2^k | p - 1, in Montgomery form.
class NttPrime {
 public:
  explicit NttPrime(u32 p);

  u32 modulus() const { return p_; }
  u32 to_mont(u32 x) const { return reduce(static_cast<u64>(x) * r2_); }
  u32 from_mont(u32 x) const { return reduce(x); }
  u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
  u32 add(u32 a, u32 b) const {
    const u32 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p_ - b; }

  // In place, length a power of two. forward leaves the output in
  // bit-reversed order and inverse expects it, so pointwise products compose.
  void forward(std::vector<u32>& a) const;
  void inverse(std::vector<u32>& a) const;

 private:
  u32 reduce(u64 x) const {
    const u32 m = static_cast<u32>(x) * neg_inv_;
    const u64 t = (x + static_cast<u64>(m) * p_) >> 32;
    return static_cast<u32>(t >= p_ ? t - p_ : t);
  }
  void prepare(std::size_t n) const;

  u32 p_;
  u32 neg_inv_;  // -p^{-1} mod 2^32
  u32 r2_;       // 2^64 mod p
  u32 generator_;
  mutable std::size_t table_size_ = 0;
  mutable std::vector<u32> roots_;      // roots_[len + j] = w_{2 len}^j (Montgomery)
  mutable std::vector<u32> inv_roots_;
};

// Five primes whose product exceeds 2^146, each with 2^23 | p - 1.
inline constexpr u32 kNttPrimes[5] = {2013265921u, 998244353u, 754974721u, 469762049u, 167772161u};

/// Garner reconstruction of x from residues mod kNttPrimes, for |x| < 2^127.
/// Throws std::logic_error if the residues do not come from such an x.
i128 crt_symmetric(std::span<const u32, 5> residues);

/// Coefficients of q^0 .. q^{length-1} in prod_{m >= 1} (1 - q^m)^24: the
/// eta series from the pentagonal theorem, squared to the 16th power and
/// multiplied by the 8th, exactly modulo each prime.
std::vector<i128> eta24_series(std::size_t length, unsigned threads = 0);

}  // namespace titchlab::detail
