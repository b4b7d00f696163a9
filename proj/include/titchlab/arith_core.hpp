#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "titchlab/modular.hpp"

namespace titchlab {

struct PrimePower {
  u64 p = 0;
  int e = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Exact factorization of n; primes strictly increasing, n == 1 has no
/// prime powers.
struct FactorizationView {
  u64 n = 1;
  std::vector<PrimePower> prime_powers;

  u64 radical() const;
  bool is_squarefree() const;
  bool is_prime_power() const { return prime_powers.size() == 1; }
  bool divisible_by(u64 p) const;
};

/// Multiplicative-function tables over [range_start, range_start + range_len).
/// Immutable once built.
class SieveTables {
 public:
  u64 range_start() const { return start_; }
  u64 range_len() const { return len_; }
  u64 range_end() const { return start_ + len_; }  // exclusive
  bool contains(u64 n) const { return n >= start_ && n - start_ < len_; }

  double lambda(u64 n) const { return lambda_[n - start_]; }
  int mu(u64 n) const { return mu_[n - start_]; }
  u64 phi(u64 n) const { return phi_[n - start_]; }
  std::uint32_t tau(u64 n) const { return tau_[n - start_]; }
  u64 spf(u64 n) const { return spf_[n - start_]; }

  std::span<const double> lambda_table() const { return lambda_; }
  std::span<const std::int8_t> mu_table() const { return mu_; }
  std::span<const u64> phi_table() const { return phi_; }
  std::span<const std::uint32_t> tau_table() const { return tau_; }
  std::span<const u64> spf_table() const { return spf_; }

 private:
  friend SieveTables build_sieve(u64, u64, unsigned);

  u64 start_ = 1;
  u64 len_ = 0;
  std::vector<double> lambda_;
  std::vector<std::int8_t> mu_;
  std::vector<u64> phi_;
  std::vector<std::uint32_t> tau_;
  std::vector<u64> spf_;
};

inline constexpr u64 kSieveBlock = u64{1} << 20;

// Bytes a sieve over range_len entries may use; defaults to the
// TITCHLAB_MEM_MB environment variable, else 2048 MB.
u64 sieve_memory_budget_bytes();
void set_sieve_memory_budget_mb(u64 mb);
u64 sieve_bytes_required(u64 range_start, u64 range_len);

/// Segmented sieve. Output is independent of `threads` (0 = default).
/// Throws CapacityError above the memory budget.
SieveTables build_sieve(u64 range_start, u64 range_len, unsigned threads = 0);

// Primes <= limit, odd-only Eratosthenes.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

FactorizationView factorize(u64 n);
// Walks spf links while they stay inside `tables`, then falls back.
FactorizationView factorize(u64 n, const SieveTables& tables);

std::vector<u64> divisors(const FactorizationView& f);

int moebius(const FactorizationView& f);
u64 euler_phi(const FactorizationView& f);
u64 divisor_count(const FactorizationView& f);
double von_mangoldt(u64 n);

inline int moebius(u64 n) { return moebius(factorize(n)); }
inline u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }
inline u64 divisor_count(u64 n) { return divisor_count(factorize(n)); }

/// c = c1 * c2 with c1 squarefree, c2 powerfull, gcd(c1, c2) = 1.
std::pair<u64, u64> squarefree_powerfull_split(u64 c);

// #{(x, y) : x, y != 0, x^2 + y^2 = n} via r2(n) = 4 sum_{d|n} chi_{-4}(d).
u64 two_squares_count_nonzero(u64 n);
u64 two_squares_count_nonzero(const FactorizationView& f);
// Same count by direct enumeration of x^2 < n.
u64 two_squares_count_nonzero_enumerate(u64 n);

/// J-fold Heath-Brown decomposition of Lambda(n) with cutoff x^{1/J}, by
/// exhaustive Dirichlet convolution on the divisor lattice of n.
/// Requires 1 <= n <= x and 1 <= J <= 5.
double heath_brown_lambda(u64 n, u64 x, int J);

}  // namespace titchlab
