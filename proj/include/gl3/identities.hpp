#pragma once

#include <array>
#include <string>
#include <vector>

#include "gl3/arith.hpp"

namespace gl3 {

// [lo, hi] encloses the quantity; value is the midpoint and error_radius is
// large enough that value +- error_radius also encloses it.
struct BoundedValue {
  double value = 0.0;
  double error_radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string method;
  double lower() const { return lo; }
  double upper() const { return hi; }
};

// Riemann zeta at real s > 1 by Euler-Maclaurin summation.
double zeta_real(double s);

struct MainConstant {
  BoundedValue constant;   // prod_{p <= limit} (...) - 1, with tail radius
  double truncated = 0.0;  // prod_{p <= limit} (...) - 1
  double tail_log_bound = 0.0;
  std::size_t prime_count = 0;
};

// prod_p (1 + 2(p^{2s}+1)/(p^{4s}(p^{2s}-1))) - 1 for s = sigma0 >= 1/2.
MainConstant main_constant(double sigma0, u64 prime_limit);

struct ChainStep {
  std::string step;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double truncation_residual = 0.0;
};

// The seven rewriting steps of the diagonal Euler product: each lhs is a
// brute-force nested sum over squarefree X-smooth variables (values up to
// support_bound), each rhs the next expression with its remaining sums
// factored into an Euler product. Throws accuracy_error when the omitted
// support could move a sum by more than tolerance.
std::vector<ChainStep> euler_chain_verify(double sigma0, double X, u64 support_bound,
                                          double tolerance = 1e-8);

struct IStarMainTerm {
  double restricted = 0.0;
  double unrestricted = 0.0;
  double gap = 0.0;
  double envelope = 0.0;        // e^{-cap}-weighted Euler product bounding the gap
  double literal_envelope = 0.0;  // zeta(2s) e^{-cap} prod_{p <= X} (1 + 4e/p)
};

IStarMainTerm i_star_main_term(double sigma0, double X, double omega_cap, u64 support_bound,
                               OmegaMode mode = OmegaMode::with_multiplicity);

struct DeltaSolution {
  u64 n1, n2, n3, m1, m2, m3, d0, d1, d2, e0, e1, e2, N;
  bool operator==(const DeltaSolution&) const = default;
  auto operator<=>(const DeltaSolution&) const = default;
};

struct DeltaReport {
  u64 bound = 0;
  double X = 0.0;
  std::size_t solutions = 0;
  std::size_t structured = 0;
  std::size_t forward_violations = 0;  // solutions lacking the structure
  std::size_t reverse_violations = 0;  // structured tuples that are not solutions
  std::size_t control_solutions = 0;   // solutions with m3 != n3
  std::vector<DeltaSolution> violation_examples;
};

// Exhaustive search over tuples with every entry <= bound, n and m triples
// squarefree, pairwise coprime and X-smooth, and the divisor constraints
// d1 | n1, d2 | n2, e1 | m1, e2 | m2, d0 d1 d2 = N M / g, e0 e1 e2 = N Nn / g
// where Nn = n1 n2^2 n3^3, M = m1 m2^2 m3^3, g = gcd(Nn, M).
// Solutions satisfy n1 d0 / d1 = m1 e0 / e1 and n2 d1 / d2 = m2 e1 / e2.
std::vector<DeltaSolution> delta_solutions(u64 bound, double X);
DeltaReport delta_enumerate(u64 bound, double X);

struct ZetaPartial {
  double partial = 0.0;
  double zeta = 0.0;
  double residual = 0.0;
};

ZetaPartial zeta_partial(double sigma0, u64 x);

}  // namespace gl3
