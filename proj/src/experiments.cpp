#include "titchlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "titchlab/arith_core.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/parallel.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

constexpr u64 kLhsBlock = u64{1} << 16;
constexpr u64 kDispersionMax = 10'000'000;
constexpr u64 kDispersionQBlock = 256;

std::atomic<u64> g_lhs_budget{100'000'000};

u64 abs_u64(i64 a) { return a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a); }

void check_budget(u64 x, const char* what) {
  if (x > g_lhs_budget.load())
    throw CapacityError(std::string(what) + ": size " + std::to_string(x) + " exceeds budget " +
                        std::to_string(g_lhs_budget.load()));
}

// Lambda(n) for lo <= n <= hi. Call cached_primes(isqrt(hi)) first when
// running from several threads.
std::vector<double> lambda_segment(u64 lo, u64 hi) {
  std::vector<double> lam(hi - lo + 1, 0.0);
  std::vector<char> composite(hi - lo + 1, 0);
  const u64 root = isqrt(hi);
  const auto& primes = cached_primes(std::max<u64>(root, 2));
  for (const u64 p : primes) {
    if (p > root) break;
    for (u64 m = std::max(p * p, (lo + p - 1) / p * p); m <= hi; m += p) composite[m - lo] = 1;
  }
  for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
    if (!composite[n - lo]) lam[n - lo] = std::log(static_cast<double>(n));
  for (const u64 p : primes) {
    if (p > root) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p * p; pk <= hi; pk *= p) {
      if (pk >= lo) lam[pk - lo] = lp;
      if (pk > hi / p) break;
    }
  }
  return lam;
}

std::vector<std::uint32_t> divisor_count_segment(u64 lo, u64 hi) {
  std::vector<std::uint32_t> t(hi - lo + 1, 0);
  for (u64 d = 1; d * d <= hi; ++d) {
    const u64 dd = d * d;
    for (u64 m = std::max(dd, (lo + d - 1) / d * d); m <= hi; m += d) t[m - lo] += m == dd ? 1 : 2;
  }
  return t;
}

/// sum_{Y < n <= X} Lambda(n) w(sigma n + f), where fill(lo, hi) returns
/// w(lo..hi). Blocks of n are fixed, so the result ignores `threads`.
template <class W, class Fill>
auto shifted_sum(const ShiftedSumSpec& spec, unsigned threads, Fill fill) {
  using Acc = std::conditional_t<std::is_same_v<W, double>, CompensatedSum, CompensatedComplexSum>;
  const u64 first = static_cast<u64>(spec.Y) + 1;
  const u64 last = static_cast<u64>(spec.X);
  const u64 n_blocks = (last - first + kLhsBlock) / kLhsBlock;
  cached_primes(isqrt(last) + 1);
  std::vector<Acc> partial(n_blocks);
  parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
    const u64 lo = first + b * kLhsBlock;
    const u64 hi = std::min(last, lo + kLhsBlock - 1);
    const auto lam = lambda_segment(lo, hi);
    const i64 s1 = spec.shifted(static_cast<i64>(lo)), s2 = spec.shifted(static_cast<i64>(hi));
    const u64 mlo = static_cast<u64>(std::min(s1, s2)), mhi = static_cast<u64>(std::max(s1, s2));
    const auto w = fill(mlo, mhi);
    auto& acc = partial[b];
    for (u64 n = lo; n <= hi; ++n) {
      const double l = lam[n - lo];
      if (l == 0.0) continue;
      acc += l * w[static_cast<u64>(spec.shifted(static_cast<i64>(n))) - mlo];
    }
  });
  Acc total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

// r'(m) for 0 <= m <= n via r2(m) = 4 sum_{d | m} chi_{-4}(d)
std::vector<u64> two_squares_table(u64 n) {
  std::vector<i64> s(n + 1, 0);
  for (u64 d = 1; d <= n; d += 2) {
    const i64 chi = d % 4 == 1 ? 1 : -1;
    for (u64 m = d; m <= n; m += d) s[m] += chi;
  }
  std::vector<u64> r(n + 1, 0);
  for (u64 m = 1; m <= n; ++m) r[m] = static_cast<u64>(4 * s[m]) - (is_square(m) ? 4 : 0);
  return r;
}

void check_two_squares(u64 n) {
  if (n < 5) throw DomainError("two_squares_lhs: n must be >= 5");
  check_budget(n, "two_squares_lhs");
}

bool is_squarefree_i64(i64 m) { return m != 0 && factorize(abs_u64(m)).is_squarefree(); }

}  // namespace

ExperimentResult compare(std::string experiment, i64 scale, double lhs,
                         std::optional<double> main_term,
                         std::vector<std::pair<std::string, double>> params, double wall_s) {
  ExperimentResult r;
  r.experiment = std::move(experiment);
  r.scale = scale;
  r.lhs = lhs;
  r.main_term = main_term;
  r.wall_s = wall_s;
  r.params = std::move(params);
  if (main_term) {
    r.abs_err = std::fabs(lhs - *main_term);
    if (*main_term != 0.0) r.rel_err = *r.abs_err / std::fabs(*main_term);
  }
  return r;
}

u64 lhs_budget() { return g_lhs_budget.load(); }
void set_lhs_budget(u64 max_x) { g_lhs_budget.store(max_x); }

double titchmarsh_lhs(const ShiftedSumSpec& spec, unsigned threads) {
  spec.validate();
  check_budget(static_cast<u64>(spec.X), "titchmarsh_lhs");
  return shifted_sum<double>(spec, threads, [](u64 lo, u64 hi) {
    const auto t = divisor_count_segment(lo, hi);
    return std::vector<double>(t.begin(), t.end());
  });
}

double titchmarsh_lhs_by_factorization(const ShiftedSumSpec& spec) {
  spec.validate();
  check_budget(static_cast<u64>(spec.X), "titchmarsh_lhs");
  CompensatedSum s;
  for (i64 n = spec.Y + 1; n <= spec.X; ++n) {
    const double l = von_mangoldt(static_cast<u64>(n));
    if (l == 0.0) continue;
    s += l * static_cast<double>(divisor_count(static_cast<u64>(spec.shifted(n))));
  }
  return s.value();
}

std::complex<double> hooley_lhs(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                const ShiftedSumSpec& spec, unsigned threads) {
  spec.validate();
  check_budget(static_cast<u64>(spec.X), "hooley_lhs");
  const auto v1 = chi1.values();
  const auto v2 = chi2.values();
  const u64 q1 = chi1.modulus(), q2 = chi2.modulus();
  return shifted_sum<std::complex<double>>(spec, threads, [&](u64 lo, u64 hi) {
    std::vector<std::complex<double>> w(hi - lo + 1, 0.0);
    for (u64 d = 1; d * d <= hi; ++d) {
      const u64 dd = d * d;
      const auto a1 = v1[d % q1], a2 = v2[d % q2];
      for (u64 m = std::max(dd, (lo + d - 1) / d * d); m <= hi; m += d) {
        const u64 e = m / d;
        w[m - lo] += a1 * v2[e % q2];
        if (e != d) w[m - lo] += v1[e % q1] * a2;
      }
    }
    return w;
  });
}

u64 two_squares_lhs(u64 n) {
  check_two_squares(n);
  const auto r = two_squares_table(n);
  u64 total = 0;
  for (const u64 p : primes_up_to(static_cast<std::uint32_t>(n - 1))) total += r[n - p];
  return total;
}

double two_squares_lhs_lambda(u64 n) {
  check_two_squares(n);
  const auto r = two_squares_table(n);
  CompensatedSum s;
  for (const u64 p : primes_up_to(static_cast<std::uint32_t>(n - 1))) {
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p; pk < n; pk *= p) {
      s += lp * static_cast<double>(r[n - pk]);
      if (pk > n / p) break;
    }
  }
  return s.value();
}

double cusp_shift_lhs(const TauTable& table, const ShiftedSumSpec& spec, unsigned threads) {
  spec.validate();
  if (static_cast<u64>(spec.max_shifted()) > table.n_max)
    throw RangeError("cusp_shift_lhs: sigma n + f reaches " + std::to_string(spec.max_shifted()) +
                     " beyond the tau table (" + std::to_string(table.n_max) + ")");
  return shifted_sum<double>(spec, threads, [&](u64 lo, u64 hi) {
    return std::vector<double>(table.lambda.begin() + static_cast<std::ptrdiff_t>(lo),
                               table.lambda.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  });
}

double SmoothWindow::operator()(double t) const {
  if (amplitude == 0.0 || !(t > 1.0 && t < 2.0)) return 0.0;
  const double u = 2.0 * t - 3.0;
  const double d = 1.0 - u * u;
  return d <= 0.0 ? 0.0 : amplitude * std::exp(-1.0 / d);
}

CancellationResult triple_shift_lhs(const TauTable& table, i64 r, i64 f, u64 X1, u64 X2, u64 X3,
                                    const SmoothWindow& window) {
  if (r < 1) throw DomainError("triple_shift_lhs: r must be >= 1");
  if (X1 == 0 || X2 == 0 || X3 == 0) throw DomainError("triple_shift_lhs: X1, X2, X3 must be >= 1");
  const i128 top = static_cast<i128>(r) * (2 * X1) * (2 * X2) * (2 * X3) + f;
  const i128 bottom = static_cast<i128>(r) * X1 * X2 * X3 + f;
  if (top > static_cast<i128>(table.n_max) || bottom < 1)
    throw RangeError("triple_shift_lhs: r k l m + f leaves the tau table");

  auto weights = [&](u64 X) {
    std::vector<std::pair<u64, double>> w;
    for (u64 k = X + 1; k < 2 * X; ++k) {
      const double g = window(static_cast<double>(k) / static_cast<double>(X));
      if (g != 0.0) w.emplace_back(k, g);
    }
    return w;
  };
  const auto w1 = weights(X1), w2 = weights(X2), w3 = weights(X3);
  CompensatedSum value, trivial;
  for (const auto& [k, g1] : w1)
    for (const auto& [l, g2] : w2)
      for (const auto& [m, g3] : w3) {
        const u64 idx = static_cast<u64>(r * static_cast<i64>(k * l * m) + f);
        const double t = g1 * g2 * g3 * table.lambda[idx];
        value += t;
        trivial += std::fabs(t);
      }
  CancellationResult out{value.value(), trivial.value(), 0.0};
  if (out.trivial > 0.0) out.ratio = std::fabs(out.value) / out.trivial;
  return out;
}

CancellationResult double_shift_lhs(const TauTable& table, i64 m1, i64 m2, i64 f, u64 X,
                                    const SmoothWindow& window) {
  if (m1 == m2) throw DomainError("double_shift_lhs: m1 and m2 must differ");
  if (!is_squarefree_i64(m1) || !is_squarefree_i64(m2))
    throw DomainError("double_shift_lhs: m1 and m2 must be squarefree");
  if ((m1 > 0) != (m2 > 0)) throw DomainError("double_shift_lhs: m1 and m2 must have the same sign");
  if (X == 0) throw DomainError("double_shift_lhs: X must be >= 1");
  for (const i64 m : {m1, m2}) {
    const i128 a = static_cast<i128>(m) * static_cast<i128>(2 * X) + f;
    const i128 b = static_cast<i128>(m) * static_cast<i128>(X) + f;
    if (std::max(a, b) > static_cast<i128>(table.n_max) || std::min(a, b) < 1)
      throw RangeError("double_shift_lhs: m n + f leaves the tau table");
  }
  CompensatedSum value, trivial;
  for (u64 n = X + 1; n < 2 * X; ++n) {
    const double g = window(static_cast<double>(n) / static_cast<double>(X));
    if (g == 0.0) continue;
    const i64 ni = static_cast<i64>(n);
    const double t = g * table.lambda[static_cast<u64>(m1 * ni + f)] * table.lambda[static_cast<u64>(m2 * ni + f)];
    value += t;
    trivial += std::fabs(t);
  }
  CancellationResult out{value.value(), trivial.value(), 0.0};
  if (out.trivial > 0.0) out.ratio = std::fabs(out.value) / out.trivial;
  return out;
}

void DispersionSpec::validate() const {
  if (x < 2) throw DomainError("dispersion: x must be >= 2");
  if (Q < 1 || c < 1 || d < 1) throw DomainError("dispersion: Q, c, d must be >= 1");
  if (a1 == 0 || a2 == 0) throw DomainError("dispersion: a1, a2 must be nonzero");
  if (std::gcd(reduce_mod(c0, c), c) != 1) throw DomainError("dispersion: requires (c0, c) = 1");
  if (std::gcd(reduce_mod(d0, d), d) != 1) throw DomainError("dispersion: requires (d0, d) = 1");
  for (const auto& pp : factorize(d).prime_powers)
    if (c % pp.p != 0) throw DomainError("dispersion: requires d | c^infinity");
}

DispersionResult dispersion(const DispersionSpec& spec, unsigned threads) {
  spec.validate();
  if (spec.x > kDispersionMax) throw CapacityError("dispersion: x exceeds 10^7");
  check_budget(spec.x, "dispersion");

  cached_primes(isqrt(spec.x) + 1);
  const auto lam = lambda_segment(1, spec.x);  // lam[n - 1]
  CompensatedSum psi_sum;
  for (const double l : lam) psi_sum += l;
  const double psi = psi_sum.value();

  const u64 ua1 = abs_u64(spec.a1), ua2 = abs_u64(spec.a2);
  const u64 c0r = reduce_mod(spec.c0, spec.c);
  const u64 d0r = reduce_mod(spec.d0, spec.d);

  std::vector<u64> moduli;
  DispersionResult out;
  for (u64 q = c0r == 0 ? spec.c : c0r; q <= spec.Q; q += spec.c) {
    if (std::gcd(q, ua1) != 1 || std::gcd(q, ua2) != 1) continue;
    if (std::gcd(q, spec.d) != 1) {
      ++out.skipped_q;
      continue;
    }
    moduli.push_back(q);
  }
  out.admissible_q = moduli.size();

  const std::size_t n_blocks = (moduli.size() + kDispersionQBlock - 1) / kDispersionQBlock;
  std::vector<CompensatedSum> partial(n_blocks);
  parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(moduli.size(), (b + 1) * kDispersionQBlock);
    for (std::size_t i = b * kDispersionQBlock; i < end; ++i) {
      const u64 q = moduli[i];
      const u64 qd = q * spec.d;
      // n == a1 conj(a2) (q) and n == d0 (d), combined mod qd
      const u64 t = mul_mod(reduce_mod(spec.a1, q), *inverse_mod(reduce_mod(spec.a2, q), q), q);
      const u64 dq = *inverse_mod(spec.d % q, q);
      const u64 k = mul_mod((t + q - d0r % q) % q, dq, q);
      const u64 s = (d0r + spec.d * k) % qd;
      CompensatedSum progression;
      for (u64 n = s == 0 ? qd : s; n <= spec.x; n += qd) progression += lam[n - 1];

      double removed = 0.0;
      for (const auto& pp : factorize(qd).prime_powers) {
        u64 count = 0;
        for (u64 pk = pp.p; pk <= spec.x; pk *= pp.p) {
          ++count;
          if (pk > spec.x / pp.p) break;
        }
        removed += static_cast<double>(count) * std::log(static_cast<double>(pp.p));
      }
      const double phi = static_cast<double>(euler_phi(q) * euler_phi(spec.d));
      partial[b] += progression.value();
      partial[b] += -(psi - removed) / phi;
    }
  });
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  out.value = total.value();
  return out;
}

BrunTitchmarshReport brun_titchmarsh_check(u64 x, u64 y, u64 q_max) {
  if (x < 1 || y < 2) throw DomainError("brun_titchmarsh_check: requires x >= 1, y >= 2");
  if (q_max < 1 || q_max >= y) throw DomainError("brun_titchmarsh_check: requires 1 <= q_max < y");
  check_budget(x + y, "brun_titchmarsh_check");
  const auto lam = lambda_segment(x, x + y);
  const double scale = static_cast<double>(y) * std::log(static_cast<double>(x + y));
  BrunTitchmarshReport rep;
  std::vector<CompensatedSum> sums;
  for (u64 q = 1; q <= q_max; ++q) {
    sums.assign(q, CompensatedSum{});
    for (u64 n = x; n <= x + y; ++n)
      if (lam[n - x] != 0.0) sums[n % q] += lam[n - x];
    const double w = static_cast<double>(euler_phi(q)) *
                     std::log(static_cast<double>(y) / static_cast<double>(q)) / scale;
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      ++rep.classes;
      const double ratio = sums[a].value() * w;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.argmax_q = q;
        rep.argmax_a = a;
      }
    }
  }
  rep.flagged = rep.max_ratio > kBrunTitchmarshSlack;
  return rep;
}

std::vector<LemmaErrorRow> lemma51_errors(u64 x, u64 a_max, bool weighted, u64 P0) {
  if (x < 2) throw DomainError("lemma51_errors: x must be >= 2");
  check_budget(x, "lemma51_errors");
  const auto tables = build_sieve(1, x);
  const double lx = std::log(static_cast<double>(x));
  const double xd = static_cast<double>(x);
  std::vector<LemmaErrorRow> rows;
  for (u64 a = 1; a <= a_max; ++a) {
    const i64 ai = static_cast<i64>(a);
    LemmaErrorRow row;
    row.a = ai;
    row.lhs = sum_over_phi(tables, x, ai, weighted);
    const double c0 = c_s(ai, 0.0, P0).value;
    const double tau = static_cast<double>(divisor_count(a));
    if (weighted) {
      row.main_term = xd * c0;
      row.normalized = std::fabs(row.lhs - row.main_term) / (tau * lx);
    } else {
      row.main_term = c0 * (lx + kEulerGamma) + c0_prime(ai, P0).value;
      row.normalized = std::fabs(row.lhs - row.main_term) / (tau * lx / xd);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<LemmaErrorRow> lemma52_errors(u64 x, u64 m_max, u64 f_max, bool weighted, u64 P0) {
  if (x < 2) throw DomainError("lemma52_errors: x must be >= 2");
  if (f_max < 1 || f_max > 30) throw DomainError("lemma52_errors: f_max must lie in [1, 30]");
  check_budget(x, "lemma52_errors");
  const auto tables = build_sieve(1, x);
  const auto small = primes_up_to(static_cast<std::uint32_t>(std::max<u64>(f_max, 2)));
  const std::size_t n_masks = std::size_t{1} << small.size();

  // which small primes divide n, as a bit mask
  std::vector<std::uint16_t> mask(x + 1, 0);
  for (std::size_t i = 0; i < small.size(); ++i)
    for (u64 n = small[i]; n <= x; n += small[i]) mask[n] |= static_cast<std::uint16_t>(1u << i);
  auto f_mask = [&](u64 f) {
    std::uint16_t m = 0;
    for (std::size_t i = 0; i < small.size(); ++i)
      if (f % small[i] == 0) m |= static_cast<std::uint16_t>(1u << i);
    return m;
  };

  const double lx = std::log(static_cast<double>(x));
  const double xd = static_cast<double>(x);
  std::vector<LemmaErrorRow> rows;
  for (u64 m = 3; m <= m_max; ++m) {
    const auto chars = enumerate_characters(m);
    const double shape_m = std::sqrt(static_cast<double>(m)) * std::log(static_cast<double>(m));
    for (std::size_t ci = 0; ci < chars.size(); ++ci) {
      const auto& chi = chars[ci];
      if (chi.is_principal()) continue;
      const auto vals = chi.values();
      std::vector<CompensatedComplexSum> bucket(n_masks);
      for (u64 n = 1; n <= x; ++n) {
        const auto v = vals[n % m];
        if (v == 0.0) continue;
        const double phi = static_cast<double>(tables.phi(n));
        bucket[mask[n]] += weighted ? v * (static_cast<double>(n) / phi) : v / phi;
      }
      std::complex<double> L = 0.0, c1 = 0.0;
      if (!weighted) {
        L = l_one(chi).value;
        c1 = c_chi(chi, 1, P0).value;
      }
      for (u64 f = 1; f <= f_max; ++f) {
        const auto fm = f_mask(f);
        CompensatedComplexSum lhs;
        for (std::size_t k = 0; k < n_masks; ++k)
          if ((k & fm) == 0) lhs.add(bucket[k]);
        LemmaErrorRow row;
        row.a = static_cast<i64>(f);
        row.modulus = m;
        row.character = ci;
        const auto value = lhs.value();
        row.lhs = value.real();
        const double tau = static_cast<double>(divisor_count(f));
        if (weighted) {
          row.normalized = std::abs(value) / (tau * shape_m * lx);
        } else {
          // c(chi, f) from c(chi, 1) by exchanging the factors at p | f
          std::complex<double> cf = c1;
          for (const auto& pp : factorize(f).prime_powers) {
            const auto cp = chi(static_cast<i64>(pp.p));
            const double p = static_cast<double>(pp.p);
            cf *= (1.0 - cp / p) / (1.0 + cp / (p * (p - 1.0)));
          }
          const auto main = L * cf;
          row.main_term = main.real();
          row.normalized = std::abs(value - main) / (tau * shape_m * lx / xd);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace titchlab
