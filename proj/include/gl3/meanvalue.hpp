#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gl3/afe.hpp"
#include "gl3/dirichlet.hpp"
#include "gl3/mollifier.hpp"
#include "gl3/quadrature.hpp"

namespace gl3 {

// Integral of (n/m)^{it} over [T, 2T], closed form.
cplx oscillatory_integral(u64 n, u64 m, double T);

// Integral over [T, 2T] of A(t) conj(B(t)) with A(t) = sum a_n n^{-it}:
// sum_{n,m} a_n conj(b_m) oscillatory_integral(m, n, T), diagonal first.
cplx polynomial_meanvalue(const DirichletPolynomial& a, const DirichletPolynomial& b, double T,
                          std::size_t pair_budget = 400'000'000);

struct OffDiagonal {
  u64 n = 0, m = 0;  // L-index and mollifier index
  double magnitude = 0.0;
};

struct ExperimentReport {
  MollifierParams params;
  double sigma = 0.0;
  cplx integral;
  std::optional<double> oracle_value;
  double prediction = 0.0;  // asymptotic main term; desk scale is not expected to match
  std::size_t node_count = 0;
  std::size_t panels = 0;
  double max_residual = 0.0;
  u64 truncation = 0;
  std::size_t mollifier_terms = 0;
  std::optional<OffDiagonal> largest_off_diagonal;
  std::string wall_notes;
  std::vector<std::pair<double, double>> trace;  // (t, integrand) on the accepted level
};

struct MomentOptions {
  QuadratureOptions quad;
  // Replaces the AFE by this polynomial when set (coefficients of n^{-s}).
  std::optional<DirichletPolynomial> l_polynomial;
  bool l_is_one = false;
  u64 term_budget = 5'000'000;
};

// Quadrature of |1 - L(s) M(s)|^2 over t in [T, 2T], s = sigma0 + it. The
// AFE sums stop at the truncation length of sigma0 + 2iT for every node.
ExperimentReport mollified_second_moment(const SatakeSource& src, const ArchimedeanData& arch,
                                         const MollifierParams& params, const AfeConfig& cfg,
                                         const MomentOptions& opts = {});

// Quadrature of L(s) M(s) over the same range.
ExperimentReport mollified_first_moment(const SatakeSource& src, const ArchimedeanData& arch,
                                        const MollifierParams& params, const AfeConfig& cfg,
                                        const MomentOptions& opts = {});

struct ZeroCountResult {
  double sigma = 0.0;
  double T1 = 0.0, T2 = 0.0;
  long count = 0;
  double winding_residual = 0.0;
  std::size_t evaluations = 0;
  int perturbations = 0;
};

// Winding number of truncated_l around [sigma, 1.5] x [T1, T2].
ZeroCountResult zero_count(const SatakeSource& src, const ArchimedeanData& arch, double sigma, double T1,
                           double T2, const AfeConfig& cfg);

struct LittlewoodReport {
  double sigma = 0.0;
  double T = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double C = 1.0;
  double slack = 0.0;  // C log T
  bool satisfied = false;
  double moment = 0.0;
  std::vector<std::pair<double, long>> counts;  // sampled (sigma', N(sigma',2T) - N(sigma',T))
};

LittlewoodReport littlewood_check(const SatakeSource& src, const ArchimedeanData& arch,
                                  const MollifierParams& params, double sigma, const AfeConfig& cfg,
                                  const MomentOptions& opts = {});

// Exponents of the zero-density statement, evaluated as formulas.
double density_exponent_r(double T, double sigma, double alpha);
double density_exponent_s(double T, double sigma, double alpha, double k);

}  // namespace gl3
