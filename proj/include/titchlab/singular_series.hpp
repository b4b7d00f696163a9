#pragma once

#include <complex>
#include <cstdint>

#include "titchlab/arith_core.hpp"
#include "titchlab/characters.hpp"

namespace titchlab {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Truncated Euler product over primes <= cutoff. tail_bound certifies
/// |log(true / value)|; factors at primes dividing the shift are always
/// complete.
struct EulerProductValue {
  double value = 0.0;
  u64 cutoff = 0;
  double tail_bound = 0.0;
};

struct ComplexEulerProductValue {
  std::complex<double> value;
  u64 cutoff = 0;
  double tail_bound = 0.0;  // bound on |log(true / value)|
};

// A real quantity with a certified absolute error (derivatives of products).
struct CertifiedValue {
  double value = 0.0;
  u64 cutoff = 0;
  double abs_err = 0.0;
};

/// Parameters of sum_{Y < n <= X} Lambda(n) w(sigma n + f).
struct ShiftedSumSpec {
  int sigma = 1;
  i64 f = 1;
  i64 Y = 0;
  i64 X = 1;

  // max(-f, 0) <= Y < X; (X + f)/X in [1/4, 4] for sigma = 1; f > X for sigma = -1
  void validate() const;
  i64 shifted(i64 n) const { return sigma * n + f; }
  // smallest and largest sigma n + f over Y < n <= X
  i64 min_shifted() const { return sigma > 0 ? shifted(Y + 1) : shifted(X); }
  i64 max_shifted() const { return sigma > 0 ? shifted(X) : shifted(Y + 1); }
};

// Certified sum_{p > P} 1/(p(p-1)) and sum_{p > P} log p/(p(p-1)), from
// explicit Chebyshev-type bounds on pi(t) and theta(t).
double prime_tail_bound(u64 P);
double prime_log_tail_bound(u64 P);

// Primes <= limit, cached across calls.
const std::vector<std::uint32_t>& cached_primes(u64 limit);

EulerProductValue c_s(i64 a, double s, u64 P0);
// d/ds c_s(a) at s = 0 via the logarithmic derivative.
CertifiedValue c0_prime(i64 a, u64 P0);
ComplexEulerProductValue c_chi(const DirichletCharacter& chi, i64 f, u64 P0);

double titchmarsh_main_term(const ShiftedSumSpec& spec, u64 P0);

/// Main term for sum Lambda(n) (chi1 * chi2)(sigma n + f). Complex in
/// general; real when the character pair is closed under conjugation.
std::complex<double> hooley_main_term(const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2,
                                      const ShiftedSumSpec& spec, u64 P0);

// Li(x) = integral_2^x dt / log t by adaptive Gauss-Kronrod quadrature.
double log_integral(double x);

double two_squares_main_term(u64 n, u64 P0);

// sum_{m <= x, (m, a) = 1} m/phi(m)  (weighted)  or  1/phi(m)
double sum_over_phi(u64 x, i64 a, bool weighted);
double sum_over_phi(const SieveTables& tables, u64 x, i64 a, bool weighted);

}  // namespace titchlab
