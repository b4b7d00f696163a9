#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "titchlab/modular.hpp"

namespace titchlab {

inline constexpr u64 kTauTableMax = 2'000'000;

/// Ramanujan tau(n) for 1 <= n <= n_max and lambda(n) = tau(n) / n^{11/2}.
/// Index 0 of both arrays is unused.
struct TauTable {
  u64 n_max = 0;
  std::vector<i128> tau;
  std::vector<double> lambda;

  i128 tau_at(u64 n) const;      // RangeError outside [1, n_max]
  double lambda_at(u64 n) const;
};

/// Coefficients of q prod (1 - q^m)^24 by exact NTT products modulo five
/// primes and CRT. Throws CapacityError above kTauTableMax.
TauTable build_tau_table(u64 n_max, unsigned threads = 0);

std::string to_string(i128 v);

struct HeckeViolation {
  std::string kind;  // "multiplicative", "factorization", "recursion", "deligne"
  u64 n = 0;
};

struct HeckeReport {
  u64 coprime_pairs = 0;     // tau(mn) = tau(m) tau(n), (m, n) = 1, mn <= min(n_max, 10^5)
  u64 factorizations = 0;    // tau(n) = prod tau(p^e) for every n <= n_max
  u64 prime_powers = 0;      // tau(p^{k+1}) = tau(p) tau(p^k) - p^11 tau(p^{k-1})
  u64 deligne = 0;           // |lambda(n)| <= d(n)
  u64 violation_count = 0;
  std::vector<HeckeViolation> violations;  // first few of each kind
  double max_lambda_over_d = 0.0;
  double max_abs_lambda_prime = 0.0;
  bool lambda_prime_both_signs = false;  // among p <= min(n_max, 10^4)

  bool ok() const { return violation_count == 0; }
};

HeckeReport hecke_consistency_report(const TauTable& table);

// sum_{n <= X} lambda(n)^2
double rankin_selberg_partial(const TauTable& table, u64 X);
// sum_{n <= X} |lambda(n)| (n, c)^{1/2}
double rankin_selberg_gcd_weighted(const TauTable& table, u64 X, u64 c);

/// Binary cache: "TAU1", n_max as u64 little-endian, then tau(1..n_max) as
/// 16-byte little-endian two's complement.
void save_tau_table(const TauTable& table, const std::string& path);
TauTable load_tau_table(const std::string& path);

}  // namespace titchlab
