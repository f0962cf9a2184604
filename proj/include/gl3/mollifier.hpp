#pragma once

#include <optional>
#include <string>

#include "gl3/arith.hpp"
#include "gl3/coeffs.hpp"
#include "gl3/dirichlet.hpp"

namespace gl3 {

struct MollifierParams {
  double T = 0.0;
  double k = 1.0;
  double alpha = 0.5;
  double sigma0 = 0.0;
  double X = 0.0;
  double omega_cap = 0.0;  // 200 k log log T unless overridden
  OmegaMode mode = OmegaMode::with_multiplicity;
  bool sigma0_overridden = false;
  bool X_overridden = false;
  bool cap_overridden = false;
};

// Formula values; requires T >= 1619 so that sigma0 < 1 and X > 1.
MollifierParams make_params(double T, double k, double alpha);

struct ParamOverrides {
  std::optional<double> sigma0;
  std::optional<double> X;
  std::optional<double> omega_cap;
  OmegaMode mode = OmegaMode::with_multiplicity;
};

// Desk-scale parameters: overrides replace the formula values. Below
// T = 1619 both sigma0 and X must be overridden.
MollifierParams desk_params(double T, double k, double alpha, const ParamOverrides& overrides);

// Sum over squarefree, pairwise coprime, X-smooth n1, n2, n3 of
// mu(n1) |mu(n2)| mu(n3) A(1,n1) A(n2,1) I*(N) N^{-s}, N = n1 n2^2 n3^3.
DirichletPolynomial build_mollifier(const SatakeSource& src, const MollifierParams& params,
                                    u64 term_budget = 5'000'000);

struct MollifierCensus {
  std::size_t count = 0;
  u64 max_index = 0;
  double l1 = 0.0;
  double l2 = 0.0;
};

MollifierCensus mollifier_census(const DirichletPolynomial& poly);

// Text format: '#' header lines, then "N<TAB>re<TAB>im" ascending in N.
void export_polynomial(const DirichletPolynomial& poly, const std::string& path,
                       const std::string& header = {});
DirichletPolynomial import_polynomial(const std::string& path);

}  // namespace gl3
