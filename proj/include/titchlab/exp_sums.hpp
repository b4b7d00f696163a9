#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "titchlab/modular.hpp"

namespace titchlab {

inline constexpr u64 kKloostermanDirectMax = 1'000'000;
inline constexpr u64 kKloostermanMax = 1'000'000'000;

/// S(m, n; c) = sum_{x mod c, (x, c) = 1} e((m x + n xbar) / c).
/// Direct summation (batched inverses) for c <= 10^6, otherwise through the
/// prime-power factorization of c.
double kloosterman(i64 m, i64 n, u64 c);
double kloosterman_direct(i64 m, i64 n, u64 c);
// S(m, n; c1 c2) = S(m conj(c2)^2, n; c1) S(m conj(c1)^2, n; c2) over prime powers
double kloosterman_multiplicative(i64 m, i64 n, u64 c);

/// Units mod c with their inverses and a table of e(k/c), for evaluating
/// many S(m, n; c) at one modulus (c <= kKloostermanDirectMax).
class KloostermanModulus {
 public:
  explicit KloostermanModulus(u64 c);
  u64 modulus() const { return c_; }
  double operator()(i64 m, i64 n) const;

 private:
  u64 c_;
  std::vector<u64> units_;
  std::vector<u64> inverses_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

struct WeilCheck {
  bool holds = false;
  double ratio = 0.0;  // |S| / (tau(c) (m, n, c)^{1/2} c^{1/2})
};
WeilCheck weil_check(i64 m, i64 n, u64 c);

struct WeilSweep {
  u64 checked = 0;
  u64 violations = 0;
  double max_ratio = 0.0;
};
// pairs_per_c random (m, n) with |m|, |n| <= 10^6 for every 1 <= c <= c_max
WeilSweep weil_sweep(u64 c_max, u64 pairs_per_c, u64 seed, unsigned threads = 0);

// c_q(n) from mu(q/(q,n)) phi(q) / phi(q/(q,n))
i64 ramanujan_sum(u64 q, i64 n);
// c_q(n) by summing e(an/q) over reduced residues, rounded
i64 ramanujan_sum_direct(u64 q, i64 n);

inline constexpr u64 kTripleSumMaxModulus = 300;

/// The literal triple sum over x, y, z mod c with (x y z (z+h), c) = 1 of
/// e((a xbar - r x - abar y + r y + alpha x zbar - beta y conj(z+h)) / c).
/// abar is the inverse of a when (a, c) = 1; for prime c dividing a it is
/// read as 0. Other non-coprime a are rejected.
std::complex<double> char_triple_sum(i64 alpha, i64 beta, i64 h, i64 r, i64 a, u64 c);

/// Same sum, collapsed: the x-sum is S(alpha zbar - r, a; c) and the y-sum a
/// Ramanujan sum, leaving one loop over z. Real-valued.
double char_triple_sum_factored(i64 alpha, i64 beta, i64 h, i64 r, i64 a, u64 c);

// (alpha - beta, alpha h, beta h, c1)^{1/2} c2^2 c1^{3/2 + eps} (a, c)
double char_triple_bound(i64 alpha, i64 beta, i64 h, i64 a, u64 c, double eps);

struct TripleSumSweep {
  double max_ratio = 0.0;
  u64 cases = 0;
  std::vector<double> max_ratio_by_c;  // index c (0 unused) for exhaustive sweeps
  std::array<i64, 6> argmax{};         // alpha, beta, h, r, a, c
};

/// Every (alpha, beta, h, r) mod c and unit a, for 1 <= c <= c_max.
/// Triples (alpha, beta, h) are reduced to orbits under scaling by units,
/// which leaves both the sum and the bound unchanged.
TripleSumSweep char_triple_sweep_exhaustive(u64 c_max, double eps, unsigned threads = 0);
// n_cases random tuples with 1 <= c <= c_max and (a, c) = 1
TripleSumSweep char_triple_sweep_random(u64 n_cases, u64 c_max, u64 seed, double eps);

/// Smooth-bump data for the delta-symbol expansion at level T:
/// w is supported on (Q, 2Q), Q = sqrt(T), normalized so sum_{q >= 1} w(q) = 1.
struct DeltaKernel {
  double T = 1.0;
  double Q = 1.0;
  double norm = 1.0;
  u64 c_max = 1;  // Delta_c vanishes for c > c_max

  double w(double t) const;
  u64 r_max(u64 c) const;
};

DeltaKernel make_delta_kernel(double T);

// Delta_c(u) = sum_{r >= 1} (1/r) (w(c r) - w(|u| / (c r)))
double delta_kernel_value(const DeltaKernel& kernel, u64 c, double u);

// sum_{c} (1/c) c_c(n) Delta_c(n); reproduces the Kronecker delta at n = 0
double delta_symbol_eval(const DeltaKernel& kernel, i64 n);

struct DeltaBoundsReport {
  double T = 0.0;
  // max over the sample grid of |d^j/du^j Delta_t(u)| T^{1/2} u^j, j = 0, 1, 2
  std::array<double, 3> max_scaled{};
  // max relative gap between first-derivative estimates at steps h and h/2
  double fd_consistency = 0.0;
  bool zero_outside_support = true;
};

DeltaBoundsReport delta_kernel_bounds_check(const DeltaKernel& kernel);

struct DeltaGrowthReport {
  std::vector<DeltaBoundsReport> per_T;
  std::array<bool, 3> grows{};  // some consecutive T step raised the max by > 50%
  bool flagged = false;
};

DeltaGrowthReport delta_kernel_growth_check(const std::vector<double>& Ts = {1e2, 1e3, 1e4});

}  // namespace titchlab
