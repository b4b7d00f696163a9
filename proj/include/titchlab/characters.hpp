#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "titchlab/modular.hpp"

namespace titchlab {

/// (Z/qZ)^x split into cyclic factors, one per odd prime power and one or
/// two for the power of 2 (generated by -1 and 5 when 8 | q).
class DirichletGroup {
 public:
  struct Factor {
    u64 prime = 0;
    u64 prime_power = 0;  // the p^e this factor lives on
    u64 order = 0;
    u64 generator = 0;    // lifted mod q: == g mod p^e, == 1 mod the rest
    std::vector<std::int32_t> dlog;  // residue mod p^e -> exponent, -1 if p | residue
  };

  static std::shared_ptr<const DirichletGroup> create(u64 q);

  u64 modulus() const { return q_; }
  u64 order() const { return phi_; }
  // lcm of the factor orders; every character value is an exponent()-th root of unity
  u64 exponent() const { return exponent_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<u64>& primes() const { return primes_; }

  std::complex<double> root(u64 k) const { return roots_[k % exponent_]; }

 private:
  u64 q_ = 1;
  u64 phi_ = 1;
  u64 exponent_ = 1;
  std::vector<Factor> factors_;
  std::vector<u64> primes_;
  std::vector<std::complex<double>> roots_;
};

/// A Dirichlet character, stored exactly: exponent j_f per cyclic factor, so
/// chi(g_f) = e(j_f / order_f). Values are roots of unity indexed mod
/// group().exponent().
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const DirichletGroup> group, std::vector<u64> exponents);

  const DirichletGroup& group() const { return *group_; }
  std::shared_ptr<const DirichletGroup> group_ptr() const { return group_; }
  const std::vector<u64>& exponents() const { return exponents_; }

  u64 modulus() const { return group_->modulus(); }
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_principal() const;
  int parity() const { return parity_; }
  // multiplicative order of chi in the dual group
  u64 order() const;

  u64 denominator() const { return group_->exponent(); }
  // k with chi(n) = e(k / denominator()), or nullopt when gcd(n, q) > 1
  std::optional<u64> value_index(i64 n) const;
  std::complex<double> operator()(i64 n) const;
  // chi(n) for n = 0 .. q-1
  std::vector<std::complex<double>> values() const;

  DirichletCharacter conj() const;
  // the primitive character mod conductor() inducing this one
  DirichletCharacter primitive_core() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const DirichletGroup> group_;
  std::vector<u64> exponents_;
  u64 conductor_ = 1;
  int parity_ = 1;
};

struct LValue {
  std::complex<double> value;
  double tail_bound = 0.0;  // certified |true - value|
};

inline constexpr double kDefaultLTarget = 1e-10;
inline constexpr u64 kMaxCharacterModulus = 1'000'000;

std::vector<DirichletCharacter> enumerate_characters(u64 q);
DirichletCharacter principal_character(u64 q);
// the non-principal character mod 4
DirichletCharacter chi_minus4();

/// Builds the character mod `q` whose value at each unit n is given by
/// `angle(n)` = k / den (as a pair k, den). The callback must describe a
/// character; only the factor generators are queried.
template <class AngleFn>
DirichletCharacter character_from_angles(u64 q, AngleFn angle);

// chi1 * chi2 as a character mod lcm(q1, q2)
DirichletCharacter character_product(const DirichletCharacter& chi1, const DirichletCharacter& chi2);

// smallest d | q from which chi is induced, by checking chi(n) = 1 on n == 1 mod d
u64 conductor_by_induction(const DirichletCharacter& chi);

// Largest |sum_{n<=N} chi(n)| over all N (one period suffices).
double max_partial_sum(const DirichletCharacter& chi);

/// L(1, chi) for non-principal chi with certified error <= target_abs_err.
/// Uses the primitive core, Abel summation with an exact periodic tail
/// correction, then the Euler factors at primes dividing q but not c(chi).
LValue l_one(const DirichletCharacter& chi, double target_abs_err = kDefaultLTarget);

// sum_{d | n} chi1(d) chi2(n / d)
std::complex<double> char_convolution(const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2, u64 n);

// (1/phi(q)) * sum over chi mod q with cond(chi) > R of chi(n)
std::complex<double> u_R(i64 n, u64 q, double R);

// ---------------------------------------------------------------------------

template <class AngleFn>
DirichletCharacter character_from_angles(u64 q, AngleFn angle) {
  auto group = DirichletGroup::create(q);
  std::vector<u64> exps;
  exps.reserve(group->factors().size());
  for (const auto& f : group->factors()) {
    const auto [k, den] = angle(f.generator);
    // chi(g)^order = 1, so k * order / den is an integer
    const u128 scaled = static_cast<u128>(k % den) * f.order;
    exps.push_back(static_cast<u64>((scaled / den) % f.order));
  }
  return DirichletCharacter(std::move(group), std::move(exps));
}

}  // namespace titchlab
