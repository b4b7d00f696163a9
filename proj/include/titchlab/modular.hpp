#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace titchlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

// Least non-negative residue of a mod m (m >= 1).
inline u64 reduce_mod(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

// Inverse of a mod m, or nullopt when gcd(a, m) > 1.
std::optional<u64> inverse_mod(u64 a, u64 m);

/// Montgomery's simultaneous inversion: one extended-gcd for the whole
/// batch. Every entry must be a unit mod m.
std::vector<u64> batch_inverse(std::span<const u64> values, u64 m);

u64 isqrt(u64 n);
bool is_square(u64 n);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime_u64(u64 n);

// Some nontrivial factor of composite n (Pollard-Brent rho).
u64 pollard_rho(u64 n);

}  // namespace titchlab
