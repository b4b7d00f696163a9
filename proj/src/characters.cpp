#include "titchlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "titchlab/arith_core.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/summation.hpp"

namespace titchlab {

namespace {

u64 primitive_root_mod_p(u64 p, const FactorizationView& pm1) {
  if (p == 2) return 1;
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& pp : pm1.prime_powers)
      if (pow_mod(g, (p - 1) / pp.p, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

u64 crt_lift(u64 residue, u64 pe, u64 q) {
  // n == residue mod pe, n == 1 mod q / pe
  const u64 rest = q / pe;
  if (rest == 1) return residue % q;
  const u64 inv = *inverse_mod(rest % pe, pe);
  // n = 1 + rest * t with 1 + rest * t == residue mod pe
  const u64 t = mul_mod((residue + pe - 1) % pe, inv, pe);
  return (1 + static_cast<u128>(rest) * t) % q;
}

std::complex<double> exact_root(u64 k, u64 L) {
  k %= L;
  if ((4 * static_cast<u128>(k)) % L == 0) {
    switch (static_cast<int>(4 * static_cast<u128>(k) / L)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L);
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

std::shared_ptr<const DirichletGroup> DirichletGroup::create(u64 q) {
  if (q == 0) throw DomainError("DirichletGroup: modulus must be >= 1");
  if (q > kMaxCharacterModulus)
    throw CapacityError("DirichletGroup: modulus " + std::to_string(q) + " exceeds 10^6");

  static std::mutex mu;
  static std::map<u64, std::shared_ptr<const DirichletGroup>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(q); it != cache.end()) return it->second;
  }

  auto g = std::make_shared<DirichletGroup>();
  g->q_ = q;
  const auto fq = factorize(q);
  g->phi_ = euler_phi(fq);
  for (const auto& [p, e] : fq.prime_powers) {
    g->primes_.push_back(p);
    u64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // (Z/2)^x is trivial
      // n == (-1)^a 5^b mod 2^e
      const u64 order_b = e >= 3 ? (pe >> 2) : 1;
      Factor fa{2, pe, 2, crt_lift(pe - 1, pe, q), std::vector<std::int32_t>(pe, -1)};
      Factor fb{2, pe, order_b, crt_lift(5 % pe, pe, q), std::vector<std::int32_t>(pe, -1)};
      u64 x = 1;
      for (u64 b = 0; b < order_b; ++b) {
        fa.dlog[x] = 0;
        fb.dlog[x] = static_cast<std::int32_t>(b);
        fa.dlog[pe - x] = 1;
        fb.dlog[pe - x] = static_cast<std::int32_t>(b);
        x = x * 5 % pe;
      }
      g->factors_.push_back(std::move(fa));
      if (order_b > 1) g->factors_.push_back(std::move(fb));
    } else {
      u64 root = primitive_root_mod_p(p, factorize(p - 1));
      if (e >= 2 && pow_mod(root, p - 1, p * p) == 1) root += p;
      const u64 order = pe / p * (p - 1);
      Factor f{p, pe, order, crt_lift(root % pe, pe, q), std::vector<std::int32_t>(pe, -1)};
      u64 x = 1;
      for (u64 k = 0; k < order; ++k) {
        f.dlog[x] = static_cast<std::int32_t>(k);
        x = mul_mod(x, root, pe);
      }
      g->factors_.push_back(std::move(f));
    }
  }
  g->exponent_ = 1;
  for (const auto& f : g->factors_) g->exponent_ = std::lcm(g->exponent_, f.order);
  g->roots_.resize(g->exponent_);
  for (u64 k = 0; k < g->exponent_; ++k) g->roots_[k] = exact_root(k, g->exponent_);

  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(q, std::move(g));
  return it->second;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const DirichletGroup> group,
                                       std::vector<u64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  const auto& fs = group_->factors();
  if (exponents_.size() != fs.size())
    throw DomainError("DirichletCharacter: exponent count does not match group");
  for (std::size_t i = 0; i < fs.size(); ++i) exponents_[i] %= fs[i].order;

  // conductor from the order of each local component
  conductor_ = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    const u64 local_order = f.order / std::gcd(exponents_[i], f.order);
    if (f.prime != 2) {
      if (local_order == 1) continue;
      u64 c = f.prime;
      for (u64 o = local_order; o % f.prime == 0; o /= f.prime) c *= f.prime;
      conductor_ *= c;
    }
  }
  // power of 2: factors generated by -1 (order 2) and 5 (order 2^{e-2})
  u64 two_part = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    if (f.prime != 2 || exponents_[i] == 0) continue;
    const u64 local_order = f.order / std::gcd(exponents_[i], f.order);
    const bool is_minus_one = f.generator % f.prime_power == f.prime_power - 1;
    if (is_minus_one)
      two_part = std::max<u64>(two_part, 4);
    else
      two_part = std::max<u64>(two_part, 4 * local_order);
  }
  conductor_ *= two_part;

  parity_ = modulus() <= 2 ? 1 : ((*this)(static_cast<i64>(modulus()) - 1).real() > 0 ? 1 : -1);
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](u64 j) { return j == 0; });
}

u64 DirichletCharacter::order() const {
  u64 o = 1;
  const auto& fs = group_->factors();
  for (std::size_t i = 0; i < fs.size(); ++i)
    o = std::lcm(o, fs[i].order / std::gcd(exponents_[i], fs[i].order));
  return o;
}

std::optional<u64> DirichletCharacter::value_index(i64 n) const {
  const u64 q = modulus();
  const u64 r = reduce_mod(n, q);
  for (const u64 p : group_->primes())
    if (r % p == 0) return std::nullopt;
  const u64 L = group_->exponent();
  u64 k = 0;
  const auto& fs = group_->factors();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    const auto d = static_cast<u64>(f.dlog[r % f.prime_power]);
    k = (k + static_cast<u64>(static_cast<u128>(exponents_[i]) * d % f.order) * (L / f.order)) % L;
  }
  return k;
}

std::complex<double> DirichletCharacter::operator()(i64 n) const {
  const auto k = value_index(n);
  return k ? group_->root(*k) : std::complex<double>{0.0, 0.0};
}

std::vector<std::complex<double>> DirichletCharacter::values() const {
  std::vector<std::complex<double>> v(modulus());
  for (u64 n = 0; n < modulus(); ++n) v[n] = (*this)(static_cast<i64>(n));
  return v;
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<u64> e(exponents_.size());
  const auto& fs = group_->factors();
  for (std::size_t i = 0; i < fs.size(); ++i) e[i] = (fs[i].order - exponents_[i]) % fs[i].order;
  return DirichletCharacter(group_, std::move(e));
}

DirichletCharacter DirichletCharacter::primitive_core() const {
  if (is_primitive()) return *this;
  const u64 q = modulus();
  const u64 c = conductor_;
  return character_from_angles(c, [&](u64 g) {
    // move the generator into a class coprime to q without changing it mod c
    u64 n = g;
    while (std::gcd(n, q) != 1) n += c;
    return std::pair<u64, u64>{*value_index(static_cast<i64>(n)), denominator()};
  });
}

std::vector<DirichletCharacter> enumerate_characters(u64 q) {
  auto group = DirichletGroup::create(q);
  std::vector<DirichletCharacter> out;
  out.reserve(group->order());
  const auto& fs = group->factors();
  std::vector<u64> e(fs.size(), 0);
  for (;;) {
    out.emplace_back(group, e);
    std::size_t i = 0;
    while (i < e.size()) {
      if (++e[i] < fs[i].order) break;
      e[i] = 0;
      ++i;
    }
    if (i == e.size()) break;
  }
  return out;
}

DirichletCharacter principal_character(u64 q) {
  auto group = DirichletGroup::create(q);
  return DirichletCharacter(group, std::vector<u64>(group->factors().size(), 0));
}

DirichletCharacter chi_minus4() {
  auto group = DirichletGroup::create(4);
  return DirichletCharacter(group, {1});
}

DirichletCharacter character_product(const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
  const u64 q = std::lcm(chi1.modulus(), chi2.modulus());
  const u64 den = std::lcm(chi1.denominator(), chi2.denominator());
  return character_from_angles(q, [&](u64 g) {
    const u64 k1 = *chi1.value_index(static_cast<i64>(g)) * (den / chi1.denominator());
    const u64 k2 = *chi2.value_index(static_cast<i64>(g)) * (den / chi2.denominator());
    return std::pair<u64, u64>{(k1 + k2) % den, den};
  });
}

u64 conductor_by_induction(const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  for (const u64 d : divisors(factorize(q))) {
    bool induced = true;
    for (u64 n = 1; n <= q && induced; n += d)
      if (std::gcd(n, q) == 1 && *chi.value_index(static_cast<i64>(n)) != 0) induced = false;
    if (induced) return d;
  }
  return q;
}

double max_partial_sum(const DirichletCharacter& chi) {
  std::complex<double> s = 0.0;
  double best = 0.0;
  for (u64 n = 1; n <= chi.modulus(); ++n) {
    s += chi(static_cast<i64>(n));
    best = std::max(best, std::abs(s));
  }
  return best;
}

LValue l_one(const DirichletCharacter& chi, double target_abs_err) {
  if (chi.is_principal()) throw DomainError("l_one: principal character (pole at s = 1)");
  if (!(target_abs_err > 0.0)) throw DomainError("l_one: target_abs_err must be positive");

  const auto core = chi.primitive_core();
  const u64 c = core.modulus();
  const auto table = core.values();

  // Euler factors at p | q, p not dividing c
  std::complex<double> euler = 1.0;
  double euler_scale = 1.0;
  for (const u64 p : chi.group().primes()) {
    if (c % p == 0) continue;
    euler *= 1.0 - table[p % c] / static_cast<double>(p);
    euler_scale *= 1.0 + 1.0 / static_cast<double>(p);
  }
  const double target = target_abs_err / (2.0 * euler_scale);

  // S(n) partial sums over one period, its mean m, and T = running sum of S - m
  std::vector<std::complex<double>> S(c + 1, 0.0);
  for (u64 n = 1; n <= c; ++n) S[n] = S[n - 1] + table[n % c];
  std::complex<double> mean = 0.0;
  for (u64 n = 1; n <= c; ++n) mean += S[n];
  mean /= static_cast<double>(c);
  double b2 = 0.0;
  std::complex<double> T = 0.0;
  for (u64 n = 1; n <= c; ++n) {
    T += S[n] - mean;
    b2 = std::max(b2, std::abs(T));
  }
  b2 += 1e-12 * static_cast<double>(c);  // float slack in the period scan

  // sum_{n>N} chi(n)/n = mean/(N+1) + R,  |R| <= b2 / ((N+1)(N+2)),  N = K c
  const double n_needed = std::sqrt(b2 / target);
  const u64 K = std::max<u64>(1, static_cast<u64>(std::ceil(n_needed / static_cast<double>(c))));
  const u64 N = K * c;

  CompensatedComplexSum sum;
  for (u64 n = 1; n <= N; ++n) sum += table[n % c] / static_cast<double>(n);
  const double Nd = static_cast<double>(N);
  std::complex<double> value = sum.value() + mean / (Nd + 1.0);

  const double eps = std::numeric_limits<double>::epsilon();
  const double rounding = 4.0 * eps * (2.0 + std::log(Nd)) * (1.0 + std::abs(value));
  double tail = b2 / ((Nd + 1.0) * (Nd + 2.0)) + rounding;

  value *= euler;
  tail = tail * euler_scale + 4.0 * eps * std::abs(value);
  return {value, tail};
}

std::complex<double> char_convolution(const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2, u64 n) {
  if (n == 0) throw DomainError("char_convolution: n must be >= 1");
  std::complex<double> s = 0.0;
  for (const u64 d : divisors(factorize(n)))
    s += chi1(static_cast<i64>(d)) * chi2(static_cast<i64>(n / d));
  return s;
}

std::complex<double> u_R(i64 n, u64 q, double R) {
  if (q == 0) throw DomainError("u_R: q must be >= 1");
  if (std::gcd(reduce_mod(n, q), q) != 1 || static_cast<double>(q) <= R) return 0.0;
  CompensatedComplexSum s;
  for (const auto& chi : enumerate_characters(q))
    if (static_cast<double>(chi.conductor()) > R) s += chi(n);
  return s.value() / static_cast<double>(euler_phi(q));
}

}  // namespace titchlab
