#include "titchlab/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "titchlab/arith_core.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/parallel.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kInverseChunk = 1 << 16;

u64 abs_u64(i64 a) { return a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a); }

std::vector<u64> units_mod(u64 c) {
  std::vector<char> bad(c, 0);
  for (const auto& pp : factorize(c).prime_powers)
    for (u64 k = 0; k < c; k += pp.p) bad[k] = 1;
  std::vector<u64> units;
  if (c == 1) return {0};
  for (u64 x = 1; x < c; ++x)
    if (!bad[x]) units.push_back(x);
  return units;
}

void check_imaginary(double im, u64 c) {
  const double tol = 1e-9 * std::max(1.0, static_cast<double>(c) / 1e6);
  if (std::fabs(im) > tol)
    throw std::logic_error("kloosterman: imaginary part " + std::to_string(im) + " at c = " +
                           std::to_string(c));
}

// Direct sum without a cosine table; for prime powers above the table limit.
double kloosterman_untabled(u64 mr, u64 nr, u64 c) {
  CompensatedSum re, im;
  std::vector<u64> chunk;
  chunk.reserve(kInverseChunk);
  auto flush = [&] {
    const auto inv = batch_inverse(chunk, c);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const u64 k = (mul_mod(mr, chunk[i], c) + mul_mod(nr, inv[i], c)) % c;
      const double angle = kTwoPi * (static_cast<double>(k) / static_cast<double>(c));
      re += std::cos(angle);
      im += std::sin(angle);
    }
    chunk.clear();
  };
  const auto primes = factorize(c).prime_powers;
  for (u64 x = 1; x < c; ++x) {
    bool unit = true;
    for (const auto& pp : primes) unit = unit && (x % pp.p != 0);
    if (!unit) continue;
    chunk.push_back(x);
    if (chunk.size() == kInverseChunk) flush();
  }
  if (!chunk.empty()) flush();
  check_imaginary(im.value(), c);
  return re.value();
}

u64 gcd3(u64 a, u64 b, u64 c) { return std::gcd(std::gcd(a, b), c); }

// abar for the triple sum: inverse when (a, c) = 1, zero when c is prime
u64 triple_abar(i64 a, u64 c) {
  const u64 ar = reduce_mod(a, c);
  if (const auto inv = inverse_mod(ar, c)) return *inv;
  if (is_prime_u64(c)) return 0;
  throw DomainError("char_triple_sum: abar undefined for (a, c) > 1 with composite c");
}

void check_triple_modulus(u64 c) {
  if (c == 0) throw DomainError("char_triple_sum: c must be >= 1");
  if (c > kTripleSumMaxModulus)
    throw DomainError("char_triple_sum: c exceeds " + std::to_string(kTripleSumMaxModulus));
}

// Inverse table mod c, with c marking non-units.
std::vector<u64> inverse_table(u64 c) {
  std::vector<u64> inv(c, c);
  for (u64 x = 0; x < c; ++x)
    if (const auto i = inverse_mod(x, c)) inv[x] = *i;
  if (c == 1) inv[0] = 0;
  return inv;
}

}  // namespace

KloostermanModulus::KloostermanModulus(u64 c) : c_(c) {
  if (c == 0) throw DomainError("kloosterman: c must be >= 1");
  if (c > kKloostermanDirectMax) throw CapacityError("KloostermanModulus: c above table limit");
  units_ = units_mod(c);
  inverses_ = c == 1 ? std::vector<u64>{0} : batch_inverse(units_, c);
  cos_.resize(c);
  sin_.resize(c);
  for (u64 k = 0; k < c; ++k) {
    const double angle = kTwoPi * (static_cast<double>(k) / static_cast<double>(c));
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

double KloostermanModulus::operator()(i64 m, i64 n) const {
  const u64 mr = reduce_mod(m, c_);
  const u64 nr = reduce_mod(n, c_);
  CompensatedSum re, im;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const u64 k = (mr * units_[i] + nr * inverses_[i]) % c_;
    re += cos_[k];
    im += sin_[k];
  }
  check_imaginary(im.value(), c_);
  return re.value();
}

double kloosterman_direct(i64 m, i64 n, u64 c) {
  if (c == 0) throw DomainError("kloosterman: c must be >= 1");
  if (c > kKloostermanMax) throw CapacityError("kloosterman: c exceeds 10^9");
  if (c <= kKloostermanDirectMax) return KloostermanModulus(c)(m, n);
  return kloosterman_untabled(reduce_mod(m, c), reduce_mod(n, c), c);
}

double kloosterman_multiplicative(i64 m, i64 n, u64 c) {
  if (c == 0) throw DomainError("kloosterman: c must be >= 1");
  if (c > kKloostermanMax) throw CapacityError("kloosterman: c exceeds 10^9");
  const auto f = factorize(c);
  if (f.prime_powers.size() <= 1) return kloosterman_direct(m, n, c);
  double product = 1.0;
  for (const auto& pp : f.prime_powers) {
    u64 q = 1;
    for (int i = 0; i < pp.e; ++i) q *= pp.p;
    const u64 rest = c / q;
    const u64 rbar = *inverse_mod(rest % q, q);
    const u64 twist = mul_mod(rbar, rbar, q);
    const u64 mq = mul_mod(reduce_mod(m, q), twist, q);
    product *= kloosterman_direct(static_cast<i64>(mq), static_cast<i64>(reduce_mod(n, q)), q);
  }
  return product;
}

double kloosterman(i64 m, i64 n, u64 c) {
  if (c <= kKloostermanDirectMax) return kloosterman_direct(m, n, c);
  return kloosterman_multiplicative(m, n, c);
}

WeilCheck weil_check(i64 m, i64 n, u64 c) {
  const double s = kloosterman(m, n, c);
  const double g = static_cast<double>(gcd3(abs_u64(m), abs_u64(n), c));
  const double bound = static_cast<double>(divisor_count(c)) * std::sqrt(g) *
                       std::sqrt(static_cast<double>(c));
  const double ratio = std::fabs(s) / bound;
  return {ratio <= 1.0 + 1e-9, ratio};
}

WeilSweep weil_sweep(u64 c_max, u64 pairs_per_c, u64 seed, unsigned threads) {
  if (c_max > kKloostermanDirectMax) throw CapacityError("weil_sweep: c_max above table limit");
  std::vector<WeilSweep> per_c(c_max + 1);
  parallel_for_blocks(c_max, threads, [&](std::size_t b) {
    const u64 c = b + 1;
    std::mt19937_64 rng(seed ^ (c * 0x9E3779B97F4A7C15ULL));
    std::uniform_int_distribution<i64> dist(-1'000'000, 1'000'000);
    const KloostermanModulus km(c);
    const double tau = static_cast<double>(divisor_count(c));
    auto& out = per_c[c];
    for (u64 i = 0; i < pairs_per_c; ++i) {
      const i64 m = dist(rng);
      const i64 n = dist(rng);
      const double g = static_cast<double>(gcd3(abs_u64(m), abs_u64(n), c));
      const double ratio = std::fabs(km(m, n)) / (tau * std::sqrt(g * static_cast<double>(c)));
      ++out.checked;
      if (!(ratio <= 1.0 + 1e-9)) ++out.violations;
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  });
  WeilSweep total;
  for (const auto& s : per_c) {
    total.checked += s.checked;
    total.violations += s.violations;
    total.max_ratio = std::max(total.max_ratio, s.max_ratio);
  }
  return total;
}

i64 ramanujan_sum(u64 q, i64 n) {
  if (q == 0) throw DomainError("ramanujan_sum: q must be >= 1");
  const u64 g = n == 0 ? q : std::gcd(q, abs_u64(n));
  const u64 k = q / g;
  const auto fk = factorize(k);
  const int mu = moebius(fk);
  if (mu == 0) return 0;
  return mu * static_cast<i64>(euler_phi(q) / euler_phi(fk));
}

i64 ramanujan_sum_direct(u64 q, i64 n) {
  if (q == 0) throw DomainError("ramanujan_sum: q must be >= 1");
  const u64 nr = reduce_mod(n, q);
  CompensatedSum s;
  for (u64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const u64 k = mul_mod(a, nr, q);
    s += std::cos(kTwoPi * (static_cast<double>(k) / static_cast<double>(q)));
  }
  return std::llround(s.value());
}

std::complex<double> char_triple_sum(i64 alpha, i64 beta, i64 h, i64 r, i64 a, u64 c) {
  check_triple_modulus(c);
  const u64 abar = triple_abar(a, c);
  const auto inv = inverse_table(c);
  const u64 al = reduce_mod(alpha, c), be = reduce_mod(beta, c), hr = reduce_mod(h, c);
  const u64 rr = reduce_mod(r, c), ar = reduce_mod(a, c);

  std::vector<std::complex<double>> e(c);
  for (u64 k = 0; k < c; ++k)
    e[k] = std::polar(1.0, kTwoPi * (static_cast<double>(k) / static_cast<double>(c)));

  CompensatedComplexSum total;
  for (u64 z = 0; z < c; ++z) {
    const u64 w = (z + hr) % c;
    if (inv[z] == c || inv[w] == c) continue;
    for (u64 x = 0; x < c; ++x) {
      if (inv[x] == c) continue;
      // a xbar - r x + alpha x zbar
      const u64 px = (ar * inv[x] + (c - rr) * x + al * x % c * inv[z]) % c;
      for (u64 y = 0; y < c; ++y) {
        if (inv[y] == c) continue;
        // -abar y + r y - beta y conj(z + h)
        const u64 py = ((c - abar) * y + rr * y + (c - be) * y % c * inv[w]) % c;
        total += e[(px + py) % c];
      }
    }
  }
  return total.value();
}

double char_triple_sum_factored(i64 alpha, i64 beta, i64 h, i64 r, i64 a, u64 c) {
  check_triple_modulus(c);
  const u64 abar = triple_abar(a, c);
  const auto inv = inverse_table(c);
  const u64 al = reduce_mod(alpha, c), be = reduce_mod(beta, c), hr = reduce_mod(h, c);
  const u64 rr = reduce_mod(r, c);
  const KloostermanModulus km(c);

  CompensatedSum total;
  for (u64 z = 0; z < c; ++z) {
    const u64 w = (z + hr) % c;
    if (inv[z] == c || inv[w] == c) continue;
    const u64 mx = (al * inv[z] + c - rr) % c;
    const i64 ny = static_cast<i64>((rr + 2 * c - abar - be * inv[w] % c) % c);
    const i64 rs = ramanujan_sum(c, ny);
    if (rs == 0) continue;
    total += km(static_cast<i64>(mx), a) * static_cast<double>(rs);
  }
  return total.value();
}

double char_triple_bound(i64 alpha, i64 beta, i64 h, i64 a, u64 c, double eps) {
  if (c == 0) throw DomainError("char_triple_bound: c must be >= 1");
  const auto [c1, c2] = squarefree_powerfull_split(c);
  const u64 ar = reduce_mod(alpha, c1), br = reduce_mod(beta, c1), hr = reduce_mod(h, c1);
  const u64 g = std::gcd(gcd3(reduce_mod(alpha - beta, c1), mul_mod(ar, hr, c1), mul_mod(br, hr, c1)), c1);
  const double c2d = static_cast<double>(c2);
  const double ac = static_cast<double>(std::gcd(reduce_mod(a, c), c));
  return std::sqrt(static_cast<double>(g)) * c2d * c2d * std::pow(static_cast<double>(c1), 1.5 + eps) * ac;
}

TripleSumSweep char_triple_sweep_exhaustive(u64 c_max, double eps, unsigned threads) {
  if (c_max == 0 || c_max > kTripleSumMaxModulus)
    throw DomainError("char_triple_sweep_exhaustive: c_max out of range");

  struct PerC {
    double max_ratio = 0.0;
    u64 cases = 0;
    std::array<i64, 6> argmax{};
  };
  std::vector<PerC> per_c(c_max + 1);

  // largest moduli first so the slow blocks start early
  parallel_for_blocks(c_max, threads, [&](std::size_t b) {
    const u64 c = c_max - b;
    const auto inv = inverse_table(c);
    const auto units = units_mod(c);
    const std::size_t nu = units.size();

    // K[ai][k] = S(k - c, a; c) for k in [0, 2c)
    std::vector<std::vector<double>> K(nu, std::vector<double>(2 * c));
    const KloostermanModulus km(c);
    for (std::size_t ai = 0; ai < nu; ++ai)
      for (u64 k = 0; k < c; ++k)
        K[ai][k] = K[ai][k + c] = km(static_cast<i64>(k), static_cast<i64>(units[ai]));
    // R[k] = c_c(k) for k in [0, 3c)
    std::vector<double> R(3 * c);
    for (u64 k = 0; k < c; ++k)
      R[k] = R[k + c] = R[k + 2 * c] = static_cast<double>(ramanujan_sum(c, static_cast<i64>(k)));

    std::vector<char> seen(c * c * c, 0);
    std::vector<u64> az, bw;
    auto& out = per_c[c];
    for (u64 al = 0; al < c; ++al)
      for (u64 be = 0; be < c; ++be)
        for (u64 hh = 0; hh < c; ++hh) {
          const u64 code = (al * c + be) * c + hh;
          if (seen[code]) continue;
          u64 orbit = 0;
          for (const u64 u : units) {
            const u64 t = ((al * u % c) * c + be * u % c) * c + hh * u % c;
            if (!seen[t]) {
              seen[t] = 1;
              ++orbit;
            }
          }
          az.clear();
          bw.clear();
          for (u64 z = 0; z < c; ++z) {
            const u64 w = (z + hh) % c;
            if (inv[z] == c || inv[w] == c) continue;
            az.push_back(al * inv[z] % c);
            bw.push_back(be * inv[w] % c);
          }
          const double bound = char_triple_bound(static_cast<i64>(al), static_cast<i64>(be),
                                                 static_cast<i64>(hh), 1, c, eps);
          for (u64 r = 0; r < c; ++r)
            for (std::size_t ai = 0; ai < nu; ++ai) {
              const double* Ka = K[ai].data() + c - r;
              const double* Rr = R.data() + (r + 2 * c - inv[units[ai]]);
              double s = 0.0;
              for (std::size_t i = 0; i < az.size(); ++i) s += Ka[az[i]] * Rr[-static_cast<i64>(bw[i])];
              const double ratio = std::fabs(s) / bound;
              if (ratio > out.max_ratio) {
                out.max_ratio = ratio;
                out.argmax = {static_cast<i64>(al), static_cast<i64>(be), static_cast<i64>(hh),
                              static_cast<i64>(r),  static_cast<i64>(units[ai]), static_cast<i64>(c)};
              }
            }
          out.cases += orbit * c * nu;
        }
  });

  TripleSumSweep total;
  total.max_ratio_by_c.assign(c_max + 1, 0.0);
  for (u64 c = 1; c <= c_max; ++c) {
    total.max_ratio_by_c[c] = per_c[c].max_ratio;
    total.cases += per_c[c].cases;
    if (per_c[c].max_ratio > total.max_ratio) {
      total.max_ratio = per_c[c].max_ratio;
      total.argmax = per_c[c].argmax;
    }
  }
  return total;
}

TripleSumSweep char_triple_sweep_random(u64 n_cases, u64 c_max, u64 seed, double eps) {
  if (c_max == 0 || c_max > kTripleSumMaxModulus)
    throw DomainError("char_triple_sweep_random: c_max out of range");
  std::mt19937_64 rng(seed);
  TripleSumSweep out;
  for (u64 i = 0; i < n_cases; ++i) {
    const u64 c = std::uniform_int_distribution<u64>(1, c_max)(rng);
    std::uniform_int_distribution<i64> res(0, static_cast<i64>(c) - 1);
    const i64 al = res(rng), be = res(rng), hh = res(rng), r = res(rng);
    i64 a = res(rng);
    while (std::gcd(static_cast<u64>(a), c) != 1) a = res(rng);
    const double s = char_triple_sum_factored(al, be, hh, r, a, c);
    const double ratio = std::fabs(s) / char_triple_bound(al, be, hh, a, c, eps);
    ++out.cases;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = {al, be, hh, r, a, static_cast<i64>(c)};
    }
  }
  return out;
}

double DeltaKernel::w(double t) const {
  if (!(t > Q && t < 2.0 * Q)) return 0.0;
  const double u = (2.0 * t - 3.0 * Q) / Q;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d) / norm;
}

u64 DeltaKernel::r_max(u64 c) const {
  return static_cast<u64>(std::ceil(2.0 * Q / static_cast<double>(c)));
}

DeltaKernel make_delta_kernel(double T) {
  if (!(T >= 1.0)) throw DomainError("make_delta_kernel: T must be >= 1");
  DeltaKernel k;
  k.T = T;
  k.Q = std::sqrt(T);
  k.norm = 1.0;
  k.c_max = static_cast<u64>(std::floor(2.0 * k.Q));
  CompensatedSum s;
  for (u64 q = 1; q <= k.c_max + 1; ++q) s += k.w(static_cast<double>(q));
  if (!(s.value() > 0.0)) throw DomainError("make_delta_kernel: no integer inside (Q, 2Q)");
  k.norm = s.value();
  return k;
}

double delta_kernel_value(const DeltaKernel& kernel, u64 c, double u) {
  if (c == 0) throw DomainError("delta_kernel_value: c must be >= 1");
  const double au = std::fabs(u);
  const double cd = static_cast<double>(c);
  const u64 r_hi = std::max(kernel.r_max(c), static_cast<u64>(au / (kernel.Q * cd)) + 1);
  CompensatedSum s;
  for (u64 r = 1; r <= r_hi; ++r) {
    const double rd = static_cast<double>(r);
    const double v = kernel.w(cd * rd) - kernel.w(au / (cd * rd));
    if (v != 0.0) s += v / rd;
  }
  return s.value();
}

double delta_symbol_eval(const DeltaKernel& kernel, i64 n) {
  if (std::fabs(static_cast<double>(n)) > kernel.T)
    throw DomainError("delta_symbol_eval: requires |n| <= T");
  CompensatedSum s;
  for (u64 c = 1; c <= kernel.c_max; ++c) {
    const i64 rs = ramanujan_sum(c, n);
    if (rs == 0) continue;
    s += static_cast<double>(rs) / static_cast<double>(c) *
         delta_kernel_value(kernel, c, static_cast<double>(n));
  }
  return s.value();
}

DeltaBoundsReport delta_kernel_bounds_check(const DeltaKernel& kernel) {
  constexpr int kTPoints = 24;
  constexpr int kUPoints = 40;
  DeltaBoundsReport rep;
  rep.T = kernel.T;
  const double sqrtT = std::sqrt(kernel.T);

  std::vector<u64> ts;
  const double t_top = 4.0 * kernel.Q + 2.0;
  for (int i = 0; i < kTPoints; ++i) {
    const u64 t = static_cast<u64>(std::llround(std::pow(t_top, static_cast<double>(i) / (kTPoints - 1))));
    if (ts.empty() || ts.back() != t) ts.push_back(std::max<u64>(t, 1));
  }
  std::vector<double> us;
  for (int i = 0; i < kUPoints; ++i)
    us.push_back(std::pow(kernel.T, static_cast<double>(i) / (kUPoints - 1)));

  double max_gap = 0.0;
  for (const u64 t : ts) {
    const bool outside = static_cast<double>(t) > 2.0 * kernel.Q;
    for (const double u : us) {
      auto D = [&](double x) { return delta_kernel_value(kernel, t, x); };
      const double d0 = D(u);
      if (outside) {
        if (d0 != 0.0) rep.zero_outside_support = false;
        continue;
      }
      const double h = 1e-3 * u;
      const double d1 = (D(u + h) - D(u - h)) / (2.0 * h);
      const double d1_half = (D(u + h / 2) - D(u - h / 2)) / h;
      const double d2 = (D(u + h) - 2.0 * d0 + D(u - h)) / (h * h);
      rep.max_scaled[0] = std::max(rep.max_scaled[0], std::fabs(d0) * sqrtT);
      rep.max_scaled[1] = std::max(rep.max_scaled[1], std::fabs(d1) * sqrtT * u);
      rep.max_scaled[2] = std::max(rep.max_scaled[2], std::fabs(d2) * sqrtT * u * u);
      max_gap = std::max(max_gap, std::fabs(d1 - d1_half) * sqrtT * u);
    }
  }
  rep.fd_consistency = rep.max_scaled[1] > 0.0 ? max_gap / rep.max_scaled[1] : 0.0;
  return rep;
}

DeltaGrowthReport delta_kernel_growth_check(const std::vector<double>& Ts) {
  DeltaGrowthReport rep;
  for (const double T : Ts) rep.per_T.push_back(delta_kernel_bounds_check(make_delta_kernel(T)));
  for (std::size_t k = 1; k < rep.per_T.size(); ++k)
    for (int j = 0; j < 3; ++j)
      if (rep.per_T[k].max_scaled[j] > 1.5 * rep.per_T[k - 1].max_scaled[j]) rep.grows[j] = true;
  rep.flagged = rep.grows[0] || rep.grows[1] || rep.grows[2];
  return rep;
}

}  // namespace titchlab
