#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace titchlab {

/// Neumaier's variant of Kahan summation. Partial sums merge with `add`,
/// so a fixed merge order gives bit-identical totals regardless of how the
/// partials were scheduled.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }

  CompensatedSum& add(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<double> z) {
    re_ += z.real();
    im_ += z.imag();
    return *this;
  }
  CompensatedComplexSum& add(const CompensatedComplexSum& other) {
    re_.add(other.re_);
    im_.add(other.im_);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

}  // namespace titchlab
