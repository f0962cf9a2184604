#include "gl3/archimedean.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gl3/errors.hpp"

namespace gl3 {

ArchimedeanData make_archimedean(cplx v1, cplx v2) {
  ArchimedeanData a;
  a.v1 = v1;
  a.v2 = v2;
  a.beta = {1.0 - 2.0 * v1 - v2, v1 - v2, -1.0 + v1 + 2.0 * v2};
  a.beta_dual = {1.0 - 2.0 * v2 - v1, v2 - v1, -1.0 + v2 + 2.0 * v1};
  a.lambda = (-3.0 * (v1 * v1 + v1 * v2 + v2 * v2 - v1 - v2)).real();
  return a;
}

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..8.
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

cplx stirling_series(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx sum = 0.0;
  for (int k = 7; k >= 0; --k) sum = sum * inv2 + kStirling[k];
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (z - 0.5) * std::log(z) - z + half_log_2pi + sum * inv;
}

bool on_cut(cplx w) { return w.imag() == 0.0 && w.real() <= 0.0; }

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw domain_error("log_gamma: pole at " + std::to_string(z.real()));
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw domain_error("log_gamma: non-finite argument");

  int shift = z.real() < 0.0 ? static_cast<int>(std::ceil(-z.real())) : 0;
  while (std::abs(z + static_cast<double>(shift)) < 10.0) ++shift;
  cplx correction = 0.0;
  for (int k = 0; k < shift; ++k) correction += std::log(z + static_cast<double>(k));
  return stirling_series(z + static_cast<double>(shift)) - correction;
}

cplx log_gamma_factor(const ArchimedeanData& arch, cplx s, bool dual) {
  const auto& beta = dual ? arch.beta_dual : arch.beta;
  cplx total = -1.5 * s * std::log(std::numbers::pi);
  for (int l = 0; l < 3; ++l) {
    try {
      total += log_gamma((s + beta[l]) / 2.0);
    } catch (const domain_error&) {
      throw domain_error("gamma factor: pole in Gamma factor " + std::to_string(l + 1));
    }
  }
  return total;
}

ConductorValue conductor(const ArchimedeanData& arch, cplx s, bool dual) {
  const auto& beta = dual ? arch.beta_dual : arch.beta;
  ConductorValue c;
  c.s = s;
  c.q_inf = 1.0;
  for (const auto& b : beta) c.q_inf *= 3.0 + std::abs(s + b);
  c.q = std::sqrt(c.q_inf);
  return c;
}

double log_gamma_polynomial_envelope(const ArchimedeanData& arch, cplx s) {
  double total = 0.0;
  for (const auto& b : arch.beta)
    total += 0.5 * (s.real() - 1.0) * std::log1p(std::abs((s + b).imag()));
  return total;
}

cplx log_w_ratio(const ArchimedeanData& arch, cplx s, cplx z) {
  auto log_w = [&](cplx zz) {
    cplx total = 0.0;
    for (int l = 0; l < 3; ++l) {
      for (const cplx base : {(zz + s + arch.beta[l]) / 2.0,
                              (zz + std::conj(s) + arch.beta_dual[l]) / 2.0}) {
        if (on_cut(base)) throw domain_error("w_ratio: base on the branch cut");
        total += (base - 0.5) * std::log(base);
      }
    }
    return total;
  };
  return log_w(z) - log_w(0.0);
}

cplx w_ratio(const ArchimedeanData& arch, cplx s, cplx z) { return std::exp(log_w_ratio(arch, s, z)); }

StirlingCheck stirling_gamma_ratio_check(const ArchimedeanData& arch, cplx s, cplx z) {
  const cplx sb = std::conj(s);
  const cplx log_lhs = log_gamma_factor(arch, z + s) + log_gamma_factor(arch, z + sb, true) -
                       log_gamma_factor(arch, s) - log_gamma_factor(arch, sb, true);
  const cplx log_rhs = -3.0 * z * std::log(std::numbers::pi * std::numbers::e) + log_w_ratio(arch, s, z);
  StirlingCheck out;
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.residual = std::abs(1.0 - std::exp(log_rhs - log_lhs));
  return out;
}

}  // namespace gl3
