#pragma once
// Reference implementations used only by the tests. Each one is written
// independently of the library code it checks: plain trial division, brute
// enumeration, long double Euler-Maclaurin, Simpson's rule.

#include <cmath>
#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> primes_upto(u64 limit) {
  std::vector<u64> out;
  for (u64 n = 2; n <= limit; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

inline std::vector<std::pair<u64, int>> factor(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

// Number of ordered triples (a, b, c) with abc = n.
inline u64 d3_triples(u64 n) {
  u64 count = 0;
  for (u64 a = 1; a <= n; ++a) {
    if (n % a) continue;
    const u64 r = n / a;
    for (u64 b = 1; b <= r; ++b)
      if (r % b == 0) ++count;
  }
  return count;
}

inline u64 divisor_count(u64 n) {
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

// Complete homogeneous symmetric polynomial h_k(x1, x2, x3) by summing monomials.
inline cplx h_brute(const std::array<cplx, 3>& x, int k) {
  cplx total = 0.0;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; i + j <= k; ++j) total += std::pow(x[0], i) * std::pow(x[1], j) * std::pow(x[2], k - i - j);
  return total;
}

// Power-series coefficients of prod_i (1 - alpha_i y)^{-1} up to y^order, by
// multiplying three geometric series.
inline std::vector<cplx> local_factor_series(const std::array<cplx, 3>& alpha, int order) {
  std::vector<cplx> acc(order + 1, 0.0);
  acc[0] = 1.0;
  for (const cplx& a : alpha) {
    std::vector<cplx> geo(order + 1);
    for (int k = 0; k <= order; ++k) geo[k] = std::pow(a, k);
    std::vector<cplx> next(order + 1, 0.0);
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j) next[i + j] += acc[i] * geo[j];
    acc = next;
  }
  return acc;
}

// Bernoulli numbers B_2, B_4, ..., B_24.
inline const std::vector<long double>& bernoulli_even() {
  static const std::vector<long double> b = {
      1.0L / 6,         -1.0L / 30,         1.0L / 42,          -1.0L / 30,
      5.0L / 66,        -691.0L / 2730,     7.0L / 6,           -3617.0L / 510,
      43867.0L / 798,   -174611.0L / 330,   854513.0L / 138,    -236364091.0L / 2730};
  return b;
}

// zeta(s) by Euler-Maclaurin with N = 60 explicit terms and 12 correction
// terms, in long double. Accurate to ~1e-15 relative for |Im s| <= 100.
inline cplx zeta(cplx s_in) {
  const lcplx s(s_in.real(), s_in.imag());
  constexpr int N = 60;
  lcplx sum = 0.0L;
  for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<long double>(n)));
  const long double Nl = N;
  const lcplx Ns = std::exp(-s * std::log(Nl));
  sum += Ns * Nl / (s - 1.0L) + 0.5L * Ns;
  // T_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) N^{-s-2k+1}
  lcplx rising = s;  // s (s+1) ... (s + 2k - 2)
  long double fact = 2.0L;
  long double npow = Nl;
  for (std::size_t k = 1; k <= bernoulli_even().size(); ++k) {
    sum += bernoulli_even()[k - 1] / fact * rising * Ns / npow;
    rising *= (s + static_cast<long double>(2 * k - 1)) * (s + static_cast<long double>(2 * k));
    fact *= static_cast<long double>((2 * k + 1) * (2 * k + 2));
    npow *= Nl * Nl;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

inline double zeta_real(double s) { return zeta(cplx(s, 0.0)).real(); }

// Composite Simpson rule with n (even) subintervals.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx total = f(a) + f(b);
  for (int i = 1; i < n; ++i) total += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return total * (h / 3.0);
}

// Values of log Gamma (analytic continuation from the positive axis, as in
// mpmath.loggamma) at 30 digits, rounded to double.
struct FrozenLogGamma {
  cplx z, value;
};
inline const std::vector<FrozenLogGamma>& frozen_log_gamma() {
  static const std::vector<FrozenLogGamma> v = {
      {{10.0, 10.0}, {8.2361317504487178437, 23.94870341378203736}},
      {{0.3, 7.0}, {-10.465674446702918896, 6.3103096470407681554}},
      {{2.5, -40.0}, {-54.534374880387967529, -110.64783073708783131}},
      {{0.1, 0.2}, {1.4196225566088014808, -1.1894584561916535074}},
      {{-3.5, 1.0}, {-3.6361894286817081636, -11.167420981242607772}},
      {{25.0, 0.5}, {54.779628419012540327, 1.599405945415323437}},
  };
  return v;
}

}  // namespace oracle
