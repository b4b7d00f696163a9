#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "titchlab/characters.hpp"
#include "titchlab/cusp_forms.hpp"
#include "titchlab/modular.hpp"
#include "titchlab/singular_series.hpp"

namespace titchlab {

/// One row of an experiment: the exact left-hand side, an optional main
/// term and the errors between them.
struct ExperimentResult {
  std::string experiment;
  i64 scale = 0;
  double lhs = 0.0;
  std::optional<double> main_term;
  std::optional<double> abs_err;
  std::optional<double> rel_err;
  double wall_s = 0.0;
  std::vector<std::pair<std::string, double>> params;  // input echo, in order
};

ExperimentResult compare(std::string experiment, i64 scale, double lhs,
                         std::optional<double> main_term,
                         std::vector<std::pair<std::string, double>> params = {},
                         double wall_s = 0.0);

// Largest X (or x) accepted by the left-hand-side evaluators.
u64 lhs_budget();
void set_lhs_budget(u64 max_x);

// sum_{Y < n <= X} Lambda(n) tau(sigma n + f), divisor counts sieved over the shifted range
double titchmarsh_lhs(const ShiftedSumSpec& spec, unsigned threads = 0);
// same sum, factorizing every sigma n + f separately
double titchmarsh_lhs_by_factorization(const ShiftedSumSpec& spec);

// sum_{Y < n <= X} Lambda(n) (chi1 * chi2)(sigma n + f)
std::complex<double> hooley_lhs(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                const ShiftedSumSpec& spec, unsigned threads = 0);

// sum_{p < n} r'(n - p), r'(m) = #{x, y != 0 : x^2 + y^2 = m}
u64 two_squares_lhs(u64 n);
// sum_{p^k < n} log p r'(n - p^k)
double two_squares_lhs_lambda(u64 n);

// sum_{Y < n <= X} Lambda(n) lambda(sigma n + f)
double cusp_shift_lhs(const TauTable& table, const ShiftedSumSpec& spec, unsigned threads = 0);

/// Bump profile exp(-1/(1 - u^2)), u = 2t - 3, on 1 < t < 2, times
/// `amplitude`; amplitude 0 gives the zero window.
struct SmoothWindow {
  double amplitude = 1.0;
  double operator()(double t) const;
};

struct CancellationResult {
  double value = 0.0;
  double trivial = 0.0;  // the same sum with |weight * lambda|
  double ratio = 0.0;    // |value| / trivial, 0 when trivial == 0
};

/// sum_{k, l, m} W(k/X1) W(l/X2) W(m/X3) lambda(r k l m + f)
CancellationResult triple_shift_lhs(const TauTable& table, i64 r, i64 f, u64 X1, u64 X2, u64 X3,
                                    const SmoothWindow& window = {});

/// sum_n lambda(m1 n + f) lambda(m2 n + f) g(n / X); m1 != m2 squarefree, same sign
CancellationResult double_shift_lhs(const TauTable& table, i64 m1, i64 m2, i64 f, u64 X,
                                    const SmoothWindow& window = {});

struct DispersionSpec {
  u64 x = 2;
  u64 Q = 1;
  u64 c = 1;
  i64 c0 = 0;
  u64 d = 1;
  i64 d0 = 0;
  i64 a1 = 1;
  i64 a2 = 1;

  // (c0, c) = (d0, d) = 1, d | c^infinity, a1 a2 != 0
  void validate() const;
};

struct DispersionResult {
  double value = 0.0;
  u64 admissible_q = 0;
  u64 skipped_q = 0;  // q meeting every stated condition except (q, d) = 1
};

/// sum over q <= Q, (q, a1 a2) = 1, q == c0 (c) of
///   sum_{n <= x, n == a1 conj(a2) (q), n == d0 (d)} Lambda(n)
///   - (1/phi(qd)) sum_{n <= x, (n, qd) = 1} Lambda(n).
/// Moduli with (q, d) > 1 are skipped and counted. An empty q-range gives 0.
DispersionResult dispersion(const DispersionSpec& spec, unsigned threads = 0);

struct BrunTitchmarshReport {
  double max_ratio = 0.0;
  u64 argmax_q = 0;
  u64 argmax_a = 0;
  u64 classes = 0;
  bool flagged = false;  // max_ratio > kBrunTitchmarshSlack
};

inline constexpr double kBrunTitchmarshSlack = 4.0;

/// max over q <= q_max, (a, q) = 1 of
///   sum_{x <= n <= x + y, n == a (q)} Lambda(n) phi(q) log(y/q) / (y log(x + y)).
BrunTitchmarshReport brun_titchmarsh_check(u64 x, u64 y, u64 q_max);

/// Normalized errors in the averages of m/phi(m), 1/phi(m) and chi(n)/phi(n).
struct LemmaErrorRow {
  i64 a = 0;        // shift a (or f)
  u64 modulus = 0;  // character modulus, 0 for the phi averages
  u64 character = 0;  // index into enumerate_characters(modulus)
  double lhs = 0.0;
  double main_term = 0.0;
  double normalized = 0.0;  // |lhs - main_term| / error shape
};

// a = 1..a_max at level x; weighted: m/phi(m) against x c_0(a) over tau(a) log x,
// otherwise 1/phi(m) against c_0(a)(log x + gamma) + c_0'(a) over tau(a) log x / x
std::vector<LemmaErrorRow> lemma51_errors(u64 x, u64 a_max, bool weighted, u64 P0);

// Every non-principal chi mod m <= m_max and 1 <= f <= f_max.
// weighted = false: sum chi(n)/phi(n) against L(1, chi) c(chi, f) over
//   tau(f) m^{1/2} log m log x / x;
// weighted = true: |sum chi(n) n/phi(n)| over tau(f) m^{1/2} log m log x.
std::vector<LemmaErrorRow> lemma52_errors(u64 x, u64 m_max, u64 f_max, bool weighted, u64 P0);

}  // namespace titchlab
