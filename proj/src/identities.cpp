#include "gl3/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <mpfr.h>

#include "gl3/errors.hpp"
#include "gl3/parallel.hpp"
#include "gl3/summation.hpp"

namespace gl3 {

double zeta_real(double s) {
  if (!(s > 1.0)) throw domain_error("zeta_real: requires s > 1");
  // B_{2k} / (2k)! for k = 1..10
  static constexpr double kB[] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
      43867.0 / 5109094217170944000.0,
      -174611.0 / 802857662698291200000.0,
  };
  constexpr int N = 40;
  long double sum = 0.0L;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -static_cast<long double>(s));
  const long double Nl = N;
  const long double Ns = std::pow(Nl, -static_cast<long double>(s));
  sum += Nl * Ns / (s - 1.0) + 0.5L * Ns;
  // Derivative factor s (s+1) ... (s+2k-2) N^{-s-2k+1}
  long double rising = s;
  long double power = Ns / Nl;
  for (int k = 0; k < 10; ++k) {
    sum += kB[k] * rising * power;
    rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
    power /= Nl * Nl;
  }
  return static_cast<double>(sum);
}

namespace {

// RAII wrapper for a fixed-precision MPFR number.
class Big {
 public:
  static constexpr mpfr_prec_t kPrec = 128;
  Big() { mpfr_init2(v_, kPrec); }
  explicit Big(double x) : Big() { mpfr_set_d(v_, x, MPFR_RNDN); }
  Big(const Big& o) : Big() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big& operator=(const Big& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Big() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace

MainConstant main_constant(double sigma0, u64 prime_limit) {
  if (!(sigma0 >= 0.5)) throw domain_error("main_constant: requires sigma0 >= 1/2");
  if (prime_limit < 2) throw domain_error("main_constant: prime_limit must be at least 2");
  const auto primes = sieve_primes(prime_limit);
  const Big two_s(2.0 * sigma0);  // exact

  // Every factor costs 7 correctly rounded operations, so the block product
  // carries a relative error below 8 n 2^-128.
  constexpr std::size_t kBlock = 1 << 15;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::vector<Big> partial(blocks, Big(1.0));
  parallel_for(blocks, [&](std::size_t b) {
    Big x, num, den, y;
    mpfr_ptr prod = partial[b].get();
    const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      mpfr_set_ui(x.get(), static_cast<unsigned long>(primes[i]), MPFR_RNDN);
      mpfr_pow(x.get(), x.get(), two_s.get(), MPFR_RNDN);
      mpfr_add_ui(num.get(), x.get(), 1, MPFR_RNDN);
      mpfr_mul_2ui(num.get(), num.get(), 1, MPFR_RNDN);
      mpfr_sub_ui(den.get(), x.get(), 1, MPFR_RNDN);
      mpfr_mul(den.get(), den.get(), x.get(), MPFR_RNDN);
      mpfr_mul(den.get(), den.get(), x.get(), MPFR_RNDN);
      mpfr_div(y.get(), num.get(), den.get(), MPFR_RNDN);
      mpfr_add_ui(y.get(), y.get(), 1, MPFR_RNDN);
      mpfr_mul(prod, prod, y.get(), MPFR_RNDN);
    }
  });
  Big P(1.0);
  for (const Big& v : partial) mpfr_mul(P.get(), P.get(), v.get(), MPFR_RNDN);

  // Relative rounding allowance, doubled for safety: 2 * 8 (n + blocks + 1) 2^-128.
  const double ops = 16.0 * static_cast<double>(primes.size() + blocks + 1);
  Big slack(ops);
  mpfr_mul_2si(slack.get(), slack.get(), -128, MPFR_RNDU);

  // Tail: log(1+y) <= y <= 2 r_L p^{-4s} with r_L = (L^{2s}+1)/(L^{2s}-1) and
  // sum_{n>L} n^{-4s} <= L^{1-4s}/(4s-1). Evaluated with upward rounding.
  const double L = static_cast<double>(prime_limit);
  Big Lx, r, tau, t;
  mpfr_set_d(Lx.get(), L, MPFR_RNDN);
  mpfr_pow(Lx.get(), Lx.get(), two_s.get(), MPFR_RNDD);
  mpfr_add_ui(r.get(), Lx.get(), 1, MPFR_RNDU);
  mpfr_sub_ui(t.get(), Lx.get(), 1, MPFR_RNDD);
  mpfr_div(r.get(), r.get(), t.get(), MPFR_RNDU);
  mpfr_mul_2ui(t.get(), two_s.get(), 1, MPFR_RNDN);
  mpfr_ui_sub(t.get(), 1, t.get(), MPFR_RNDN);  // 1 - 4s, exact at 128 bits
  mpfr_set_d(tau.get(), L, MPFR_RNDN);
  mpfr_pow(tau.get(), tau.get(), t.get(), MPFR_RNDU);
  mpfr_mul(tau.get(), tau.get(), r.get(), MPFR_RNDU);
  mpfr_mul_2ui(tau.get(), tau.get(), 1, MPFR_RNDU);
  mpfr_neg(t.get(), t.get(), MPFR_RNDN);
  mpfr_div(tau.get(), tau.get(), t.get(), MPFR_RNDU);

  Big lo, hi;
  mpfr_ui_sub(t.get(), 1, slack.get(), MPFR_RNDD);
  mpfr_mul(lo.get(), P.get(), t.get(), MPFR_RNDD);
  mpfr_sub_ui(lo.get(), lo.get(), 1, MPFR_RNDD);
  mpfr_exp(hi.get(), tau.get(), MPFR_RNDU);
  mpfr_add_ui(t.get(), slack.get(), 1, MPFR_RNDU);
  mpfr_mul(hi.get(), hi.get(), t.get(), MPFR_RNDU);
  mpfr_mul(hi.get(), hi.get(), P.get(), MPFR_RNDU);
  mpfr_sub_ui(hi.get(), hi.get(), 1, MPFR_RNDU);

  MainConstant out;
  Big trunc;
  mpfr_sub_ui(trunc.get(), P.get(), 1, MPFR_RNDN);
  out.truncated = mpfr_get_d(trunc.get(), MPFR_RNDN);
  out.tail_log_bound = mpfr_get_d(tau.get(), MPFR_RNDU);
  out.prime_count = primes.size();
  auto& c = out.constant;
  c.lo = mpfr_get_d(lo.get(), MPFR_RNDD);
  c.hi = mpfr_get_d(hi.get(), MPFR_RNDU);
  c.value = c.lo + 0.5 * (c.hi - c.lo);
  const double inf = std::numeric_limits<double>::infinity();
  c.error_radius = std::nextafter(std::max(c.value - c.lo, c.hi - c.value), inf);
  while (c.value - c.error_radius > c.lo || c.value + c.error_radius < c.hi)
    c.error_radius = std::nextafter(c.error_radius, inf);
  c.method =
      "128-bit product over p <= limit with outward rounding; tail log(1+y) <= y <= 2 r_L p^{-4s} with "
      "r_L = (L^{2s}+1)/(L^{2s}-1), sum_{n>L} n^{-4s} <= L^{1-4s}/(4s-1)";
  return out;
}

namespace {

// One variable of the diagonal multi-sum: its value contributes
// p^{-2 sigma * exponent} per prime, times -1 per prime when signed.
struct ChainVariable {
  const char* name;
  int exponent;
  bool signed_;
};

constexpr ChainVariable kChainVars[] = {
    {"k1", 2, false}, {"k2", 3, false}, {"c33", 3, false}, {"s2", 2, false},
    {"s1", 1, false}, {"m1'", 1, true}, {"n1'", 1, true},
};
constexpr int kChainCount = 7;

// Common per-prime factor attached to every remaining variable of expression i.
double chain_factor(int i, double x) {
  double f = 1.0;
  if (i >= 1) f = x / (x - 1.0);
  if (i >= 2) f = x / (x - 2.0);
  if (i >= 3) f = x / (x - 1.0);
  if (i >= 4) f = x * x / (x * x - x + 1.0);
  if (i >= 5) f /= 1.0 + 1.0 / (x * x * (x - 1.0) + x);
  if (i >= 6) f /= 1.0 + 1.0 / (x * x * (x - 1.0) + x + 1.0);
  return f;
}

// Per-prime prefactor of expression i (the zeta(2 sigma) factor is separate).
double chain_prefactor(int i, double x) {
  double P = 1.0;
  if (i >= 1) P *= 1.0 - 1.0 / x;
  if (i >= 2) P *= 1.0 - 1.0 / (x - 1.0);
  if (i >= 3) P *= (x - 1.0) / (x - 2.0);
  if (i >= 4) P *= 1.0 + 1.0 / (x * (x - 1.0));
  if (i >= 5) P *= 1.0 + 1.0 / (x * x * (x - 1.0) + x);
  if (i >= 6) P *= 1.0 + 1.0 / (x * x * (x - 1.0) + x + 1.0);
  return P;
}

struct SupportElement {
  u64 value;
  std::vector<u64> primes;
};

std::vector<SupportElement> support(double X, u64 bound) {
  std::vector<SupportElement> out;
  for (u64 v : squarefree_smooth(X, bound)) {
    SupportElement e{v, {}};
    if (v > 1)
      for (const auto& [p, k] : factorize(v).factors) e.primes.push_back(p);
    out.push_back(std::move(e));
  }
  return out;
}

// Sum over pairwise coprime tuples (one support element per variable) of the
// product of per-variable weights; also returns the sum of absolute values.
std::pair<double, double> nested_sum(const std::vector<SupportElement>& sup,
                                     const std::vector<std::vector<double>>& weight) {
  const std::size_t vars = weight.size();
  CompensatedSum total;
  double abs_total = 0.0;
  std::function<void(std::size_t, u64, double)> rec = [&](std::size_t v, u64 used, double w) {
    if (v == vars) {
      total.add(w);
      abs_total += std::abs(w);
      return;
    }
    for (std::size_t j = 0; j < sup.size(); ++j) {
      if (gcd(sup[j].value, used) != 1) continue;
      if (weight[v][j] == 0.0) continue;
      rec(v + 1, used * sup[j].value, w * weight[v][j]);
    }
  };
  rec(0, 1, 1.0);
  return {total.value().real(), abs_total};
}

}  // namespace

std::vector<ChainStep> euler_chain_verify(double sigma0, double X, u64 support_bound, double tolerance) {
  if (!(sigma0 > 0.5)) throw domain_error("euler_chain_verify: requires sigma0 > 1/2");
  const auto primes = primes_below(X);
  const double two_s = 2.0 * sigma0;
  for (u64 p : primes)
    if (std::pow(static_cast<double>(p), two_s) <= 2.0)
      throw domain_error("euler_chain_verify: p^{2 sigma0} <= 2 makes the chain singular");
  const auto sup = support(X, support_bound);
  const double zeta = zeta_real(two_s);

  auto xval = [&](u64 p) { return std::pow(static_cast<double>(p), two_s); };

  // Brute-force value of expression i and the omitted absolute mass.
  auto brute = [&](int i) {
    const int vars = kChainCount - i;
    std::vector<std::vector<double>> weight(vars, std::vector<double>(sup.size()));
    for (int v = 0; v < vars; ++v) {
      for (std::size_t j = 0; j < sup.size(); ++j) {
        double w = 1.0;
        for (u64 p : sup[j].primes) {
          const double x = xval(p);
          w *= std::pow(x, -kChainVars[v].exponent) * chain_factor(i, x) * (kChainVars[v].signed_ ? -1.0 : 1.0);
        }
        weight[v][j] = w;
      }
    }
    const auto [sum, abs_sum] = nested_sum(sup, weight);
    double pre = zeta, abs_full = 1.0;
    for (u64 p : primes) {
      const double x = xval(p);
      pre *= chain_prefactor(i, x);
      double local = 1.0;
      for (int v = 0; v < vars; ++v) local += std::pow(x, -kChainVars[v].exponent) * std::abs(chain_factor(i, x));
      abs_full *= local;
    }
    return std::make_pair(pre * sum, std::abs(pre) * std::max(0.0, abs_full - abs_sum));
  };

  // Expression i with every remaining sum written as an Euler product.
  auto factored = [&](int i) {
    double value = zeta;
    for (u64 p : primes) {
      const double x = xval(p);
      double local = 1.0;
      for (int v = 0; v < kChainCount - i; ++v)
        local += std::pow(x, -kChainVars[v].exponent) * chain_factor(i, x) * (kChainVars[v].signed_ ? -1.0 : 1.0);
      value *= chain_prefactor(i, x) * local;
    }
    return value;
  };

  auto final_form = [&] {
    double value = zeta;
    for (u64 p : primes) {
      const double x = xval(p);
      value *= (1.0 - 1.0 / x) * (1.0 + 2.0 * (x + 1.0) / (x * x * (x - 1.0)));
    }
    return value;
  };

  static const char* kNames[] = {"a1->a2", "a2->a3", "a3->a4", "a4->a5", "a5->a6", "a6->a7", "a7->final"};
  std::vector<ChainStep> steps;
  for (int i = 0; i < kChainCount; ++i) {
    const auto [lhs, residual] = brute(i);
    const double rhs = i + 1 < kChainCount ? factored(i + 1) : final_form();
    if (residual > tolerance)
      throw accuracy_error("euler_chain_verify: support bound " + std::to_string(support_bound) +
                               " omits mass " + std::to_string(residual) + " at step " + kNames[i],
                           residual);
    steps.push_back({kNames[i], lhs, rhs, std::abs(lhs - rhs), residual});
  }
  return steps;
}

IStarMainTerm i_star_main_term(double sigma0, double X, double omega_cap, u64 support_bound, OmegaMode mode) {
  if (!(sigma0 > 0.5)) throw domain_error("i_star_main_term: requires sigma0 > 1/2");
  const auto primes = primes_below(X);
  const auto sup = support(X, support_bound);
  const double two_s = 2.0 * sigma0;
  const double zeta = zeta_real(two_s);
  const bool mult = mode == OmegaMode::with_multiplicity;

  // Omega contributions per prime of each variable to the two I* arguments
  //   a = s1 k1 n1' (s2 k2)^2 c33^3,   b = s1 k1 m1' (s2 k2)^2 c33^3.
  //                         k1 k2 c33 s2 s1 m1' n1'
  const int in_a[kChainCount] = {1, 2, 3, 2, 1, 0, 1};
  const int in_b[kChainCount] = {1, 2, 3, 2, 1, 1, 0};
  auto contribution = [&](int c) { return c == 0 ? 0 : (mult ? c : 1); };

  std::vector<double> weight(sup.size());
  std::vector<int> omega(sup.size());
  for (std::size_t j = 0; j < sup.size(); ++j) omega[j] = static_cast<int>(sup[j].primes.size());

  CompensatedSum restricted, unrestricted;
  int var_index[kChainCount] = {};
  std::function<void(int, u64, double)> rec = [&](int v, u64 used, double w) {
    if (v == kChainCount) {
      int oa = 0, ob = 0;
      for (int i = 0; i < kChainCount; ++i) {
        oa += contribution(in_a[i]) * omega[var_index[i]];
        ob += contribution(in_b[i]) * omega[var_index[i]];
      }
      unrestricted.add(w);
      if (oa < omega_cap && ob < omega_cap) restricted.add(w);
      return;
    }
    for (std::size_t j = 0; j < sup.size(); ++j) {
      if (gcd(sup[j].value, used) != 1) continue;
      double wj = 1.0;
      for (u64 p : sup[j].primes)
        wj *= std::pow(static_cast<double>(p), -two_s * kChainVars[v].exponent) * (kChainVars[v].signed_ ? -1.0 : 1.0);
      var_index[v] = static_cast<int>(j);
      rec(v + 1, used * sup[j].value, w * wj);
    }
  };
  rec(0, 1, 1.0);

  IStarMainTerm out;
  out.restricted = zeta * restricted.value().real();
  out.unrestricted = zeta * unrestricted.value().real();
  out.gap = std::abs(out.unrestricted - out.restricted);

  double env_a = 1.0, env_b = 1.0;
  for (u64 p : primes) {
    const double x = std::pow(static_cast<double>(p), two_s);
    double la = 1.0, lb = 1.0;
    for (int v = 0; v < kChainCount; ++v) {
      const double w = std::pow(x, -kChainVars[v].exponent);
      la += w * std::exp(contribution(in_a[v]));
      lb += w * std::exp(contribution(in_b[v]));
    }
    env_a *= la;
    env_b *= lb;
  }
  out.envelope = zeta * std::exp(-omega_cap) * (env_a + env_b);

  double literal = zeta * std::exp(-omega_cap);
  for (u64 p : sieve_primes(static_cast<u64>(std::floor(X)))) literal *= 1.0 + 4.0 * std::numbers::e / static_cast<double>(p);
  out.literal_envelope = literal;
  return out;
}

namespace {

struct Triple {
  u64 a, b, c;
  u64 product;  // a b^2 c^3
};

std::vector<Triple> mollifier_triples(u64 bound, double X) {
  std::vector<u64> sf;
  for (u64 v : squarefree_smooth(X, bound)) sf.push_back(v);
  std::vector<Triple> out;
  for (u64 a : sf)
    for (u64 b : sf) {
      if (gcd(a, b) != 1) continue;
      for (u64 c : sf) {
        if (gcd(a * b, c) != 1) continue;
        out.push_back({a, b, c, a * b * b * c * c * c});
      }
    }
  return out;
}

std::vector<u64> divisors_upto(u64 n, u64 bound) {
  std::vector<u64> out;
  for (u64 d = 1; d <= std::min(n, bound); ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

bool is_solution(const DeltaSolution& s) {
  return s.n1 * s.d0 * s.e1 == s.m1 * s.e0 * s.d1 && s.n2 * s.d1 * s.e2 == s.m2 * s.e1 * s.d2;
}

bool is_structured(const DeltaSolution& s) {
  return s.d1 == s.e1 && s.d2 == s.e2 && s.m2 == s.n2 && s.m3 == s.n3 && gcd(s.m1, s.n2) == 1 &&
         gcd(s.m1, s.n3) == 1 && gcd(s.n1, s.m2) == 1 && gcd(s.n1, s.m3) == 1 && s.N % (s.d1 * s.d2) == 0;
}

// Every tuple in range meeting the divisor constraints, in lexicographic order.
template <class Visit>
void for_each_candidate(u64 bound, double X, Visit&& visit) {
  const auto triples = mollifier_triples(bound, X);
  for (const auto& nt : triples) {
    for (const auto& mt : triples) {
      const u64 g = gcd(nt.product, mt.product);
      const u64 mr = mt.product / g;
      const u64 nr = nt.product / g;
      for (u64 N = 1; N <= bound; ++N) {
        const u64 D = N * mr;
        const u64 E = N * nr;
        for (u64 d1 : divisors_upto(nt.a, bound))
          for (u64 d2 : divisors_upto(nt.b, bound)) {
            if (D % (d1 * d2) != 0) continue;
            const u64 d0 = D / (d1 * d2);
            if (d0 > bound) continue;
            for (u64 e1 : divisors_upto(mt.a, bound))
              for (u64 e2 : divisors_upto(mt.b, bound)) {
                if (E % (e1 * e2) != 0) continue;
                const u64 e0 = E / (e1 * e2);
                if (e0 > bound) continue;
                visit(DeltaSolution{nt.a, nt.b, nt.c, mt.a, mt.b, mt.c, d0, d1, d2, e0, e1, e2, N});
              }
          }
      }
    }
  }
}

}  // namespace

std::vector<DeltaSolution> delta_solutions(u64 bound, double X) {
  if (bound == 0 || bound > 200) throw domain_error("delta_enumerate: bound must lie in [1, 200]");
  std::vector<DeltaSolution> out;
  for_each_candidate(bound, X, [&](const DeltaSolution& s) {
    if (is_solution(s)) out.push_back(s);
  });
  return out;
}

DeltaReport delta_enumerate(u64 bound, double X) {
  if (bound == 0 || bound > 200) throw domain_error("delta_enumerate: bound must lie in [1, 200]");
  DeltaReport r;
  r.bound = bound;
  r.X = X;
  for_each_candidate(bound, X, [&](const DeltaSolution& s) {
    const bool sol = is_solution(s);
    const bool str = is_structured(s);
    r.solutions += sol;
    r.structured += str;
    if (sol && !str) {
      ++r.forward_violations;
      if (r.violation_examples.size() < 5) r.violation_examples.push_back(s);
    }
    if (str && !sol) {
      ++r.reverse_violations;
      if (r.violation_examples.size() < 5) r.violation_examples.push_back(s);
    }
    if (sol && s.m3 != s.n3) ++r.control_solutions;
  });
  return r;
}

ZetaPartial zeta_partial(double sigma0, u64 x) {
  if (!(sigma0 > 0.5)) throw domain_error("zeta_partial: requires sigma0 > 1/2");
  if (x == 0) throw domain_error("zeta_partial: x must be positive");
  const double two_s = 2.0 * sigma0;
  // Smallest terms first.
  long double partial = 0.0L;
  for (u64 n = x; n >= 1; --n) partial += std::pow(static_cast<long double>(n), -static_cast<long double>(two_s));
  ZetaPartial z;
  z.partial = static_cast<double>(partial);
  z.zeta = zeta_real(two_s);
  z.residual = std::abs(z.zeta - z.partial);
  return z;
}

}  // namespace gl3
