#pragma once

#include <cmath>
#include <complex>

namespace gl3 {

// Neumaier compensated accumulator for real parts and imaginary parts.
class CompensatedSum {
 public:
  void add(std::complex<double> x) {
    add_one(re_, re_c_, x.real());
    add_one(im_, im_c_, x.imag());
  }
  std::complex<double> value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_one(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

}  // namespace gl3
