#pragma once

#include <array>
#include <complex>

namespace gl3 {

using cplx = std::complex<double>;

struct ArchimedeanData {
  cplx v1, v2;
  std::array<cplx, 3> beta{};       // (1-2v1-v2, v1-v2, -1+v1+2v2)
  std::array<cplx, 3> beta_dual{};  // same with v1 and v2 exchanged
  double lambda = 0.0;              // Laplacian eigenvalue (real part)
};

ArchimedeanData make_archimedean(cplx v1, cplx v2);

// Type (1/3, 1/3): all Langlands parameters vanish and L = zeta^3.
inline ArchimedeanData eisenstein_type() { return make_archimedean(1.0 / 3.0, 1.0 / 3.0); }

// log Gamma continued analytically from the positive real axis into the plane
// cut along the negative reals; the imaginary part is not reduced mod 2 pi.
cplx log_gamma(cplx z);

// log G(s) = -(3s/2) log pi + sum_l log Gamma((s + beta_l)/2); the dual
// factor uses beta_dual.
cplx log_gamma_factor(const ArchimedeanData& arch, cplx s, bool dual = false);

struct ConductorValue {
  cplx s;
  double q_inf = 0.0;
  double q = 0.0;
};

ConductorValue conductor(const ArchimedeanData& arch, cplx s, bool dual = false);

// log of prod_l (1 + |Im(s + beta_l)|)^{(Re s - 1)/2}. This carries only the
// polynomial part of |G(s)|; the factor exp(-pi |Im|/4) per Gamma is left out.
double log_gamma_polynomial_envelope(const ArchimedeanData& arch, cplx s);

// log(W(z)/W(0)) where W is the six-factor product over the bases
// (z+s+beta_l)/2 and (z+conj(s)+beta_dual_l)/2, each raised to base - 1/2.
cplx log_w_ratio(const ArchimedeanData& arch, cplx s, cplx z);
cplx w_ratio(const ArchimedeanData& arch, cplx s, cplx z);

struct StirlingCheck {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
};

// lhs = G(z+s) G~(z+conj s) / (G(s) G~(conj s)); rhs = (pi e)^{-3z} W(z)/W(0).
StirlingCheck stirling_gamma_ratio_check(const ArchimedeanData& arch, cplx s, cplx z);

}  // namespace gl3
