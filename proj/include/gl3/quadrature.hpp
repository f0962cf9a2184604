#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace gl3 {

using cplx = std::complex<double>;

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;  // convergence also accepted below this difference
  std::size_t max_panels = std::size_t{1} << 14;
  std::size_t min_panels = 1;
  bool keep_samples = false;
};

struct QuadratureResult {
  cplx value;
  double level_difference = 0.0;  // |I_k - I_{k-1}| at the accepted level
  std::size_t panels = 0;
  std::size_t evaluations = 0;
  std::vector<std::pair<double, cplx>> samples;  // nodes of the accepted level
};

// Composite 33-point Gauss-Legendre over [a, b] with the panel count doubled
// until two successive levels agree. Nodes of a level are evaluated in
// parallel and summed in a fixed order, so the result does not depend on the
// worker count. Throws accuracy_error when max_panels is reached.
QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace gl3
