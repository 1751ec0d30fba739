#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace lclt {

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  CompensatedSum& operator+=(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  ComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  ComplexSum& operator+=(const ComplexSum& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Standard normal density.
inline double gaussian_density(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b] (recursive bisection until the
/// Kronrod/Gauss discrepancy is below rel_tol times the L1 norm).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, unsigned max_depth = 20);

/// Same rule refined until the error estimate is below abs_tol (or the
/// depth limit is hit; the estimate is returned either way).
QuadratureResult integrate_absolute(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    unsigned max_depth = 12);

}  // namespace lclt
