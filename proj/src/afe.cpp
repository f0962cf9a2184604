#include "gl3/afe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gl3/errors.hpp"
#include "gl3/summation.hpp"

namespace gl3 {

namespace {

constexpr double kTableStep = 1.0 / 64.0;  // x-grid spacing for WeightTable
constexpr double kDropoff = 40.0;          // integrand range kept: peak - 40 in log
constexpr std::size_t kMaxNodes = 400'000;

// Trapezoid nodes of the V integrand on Re u = c, weights included.
struct LineKernel {
  double c = 0.0;
  double h = 0.0;
  bool residue = false;  // line left of u = 0
  double log_peak = -std::numeric_limits<double>::infinity();
  std::vector<double> y;
  std::vector<cplx> g;
  std::vector<char> even;
};

double min_real_shift(const ArchimedeanData& arch, cplx s, bool dual) {
  const auto& beta = dual ? arch.beta_dual : arch.beta;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : beta) m = std::min(m, (s + b).real());
  return m;
}

// Left line halfway between u = 0 and the first Gamma pole, if that gap is
// wide enough for a trapezoid step of reasonable size.
double left_abscissa(const ArchimedeanData& arch, cplx s, bool dual) {
  constexpr double kMinGap = 0.25;
  const double m = min_real_shift(arch, s, dual);
  return m >= kMinGap ? -0.5 * m : std::numeric_limits<double>::quiet_NaN();
}

// Aliasing error of a step-h rule at frequency x behaves like
// exp(-(2 pi/h - x) d), with d the distance from the line to the nearest
// singularity. The Gamma ratio adds an oscillation of its own, and
// measurements show it is covered by log q. The step keeps the step-2h rule
// well inside the 1e-6 acceptance check.
LineKernel make_kernel(const ArchimedeanData& arch, cplx s, const AfeConfig& cfg, bool dual, double c,
                       double x_max) {
  const double pole_edge = -min_real_shift(arch, s, dual);
  if (!(c > pole_edge) || !(c < 2.0 * cfg.A) || c == 0.0)
    throw domain_error("v_weight: abscissa " + std::to_string(c) + " crosses a singularity");

  LineKernel k;
  k.c = c;
  k.residue = c < 0.0;
  const double dist = std::min({std::abs(c), 2.0 * cfg.A - c, c - pole_edge});
  const double freq = std::max(x_max, 0.0) + std::log(conductor(arch, s).q);
  k.h = std::min(cfg.quad_step, std::numbers::pi * dist / (28.0 + freq * dist));

  const double A = cfg.A;
  const cplx log_g_s = log_gamma_factor(arch, s, dual);
  auto log_integrand = [&](double y) {
    const cplx u(c, y);
    return -12.0 * A * std::log(std::cos(std::numbers::pi * u / (4.0 * A))) +
           log_gamma_factor(arch, s + u, dual) - log_g_s - std::log(u);
  };

  std::vector<std::pair<long, cplx>> nodes;
  auto scan = [&](long start, long dir) {
    const long min_steps = static_cast<long>(std::ceil(2.0 / k.h));
    for (long j = start;; j += dir) {
      const double y = static_cast<double>(j) * k.h;
      const cplx lg = log_integrand(y);
      k.log_peak = std::max(k.log_peak, lg.real());
      nodes.emplace_back(j, lg);
      if (std::labs(j) >= min_steps && lg.real() < k.log_peak - kDropoff) break;
      if (nodes.size() > kMaxNodes)
        throw accuracy_error("v_weight: integrand does not decay on the line", 1.0);
    }
  };
  scan(0, 1);
  scan(-1, -1);
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const double w = k.h / (2.0 * std::numbers::pi);
  for (const auto& [j, lg] : nodes) {
    k.y.push_back(static_cast<double>(j) * k.h);
    k.g.push_back(w * std::exp(lg));
    k.even.push_back(j % 2 == 0);
  }
  return k;
}

struct LineValue {
  cplx value;
  cplx coarse;  // step 2h
  double mass = 0.0;
};

void check_accuracy(const LineValue& v) {
  const double diff = std::abs(v.value - v.coarse);
  if (diff > 1e-6 * v.mass) {
    throw accuracy_error("v_weight: trapezoid rule not converged on the line", diff * diff / v.mass);
  }
}

LineValue evaluate_line(const LineKernel& k, double x) {
  CompensatedSum fine, coarse;
  double mass = 0.0;
  for (std::size_t j = 0; j < k.y.size(); ++j) {
    const cplx term = k.g[j] * std::exp(-x * cplx(k.c, k.y[j]));
    fine.add(term);
    if (k.even[j]) coarse.add(2.0 * term);
    mass += std::sqrt(std::norm(term));
  }
  LineValue v{fine.value(), coarse.value(), mass};
  if (k.residue) {
    v.value += 1.0;
    v.coarse += 1.0;
  }
  return v;
}

// Score used to choose a line: log of the largest integrand modulus at x.
double line_score(const LineKernel& k, double x) { return k.log_peak - k.c * x; }

// Values on x0 + i*step for i = 0..count-1 by phase recurrence.
std::vector<cplx> tabulate(const LineKernel& k, double x0, std::size_t count, double step) {
  const std::size_t m = k.y.size();
  std::vector<cplx> phase(m), ratio(m);
  for (std::size_t j = 0; j < m; ++j) {
    const cplx u(k.c, k.y[j]);
    phase[j] = k.g[j] * std::exp(-x0 * u);
    ratio[j] = std::exp(-step * u);
  }
  std::vector<cplx> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    CompensatedSum fine, coarse;
    double mass = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      fine.add(phase[j]);
      if (k.even[j]) coarse.add(2.0 * phase[j]);
      mass += std::sqrt(std::norm(phase[j]));
      phase[j] *= ratio[j];
    }
    LineValue v{fine.value(), coarse.value(), mass};
    check_accuracy(v);
    out[i] = v.value + (k.residue ? 1.0 : 0.0);
  }
  return out;
}

// n^{-s} for n <= n_max into a reused buffer. Complete multiplicativity
// reduces every composite entry below the factor-table limit to one product.
void inverse_powers(cplx s, u64 n_max, std::vector<cplx>& out) {
  out.resize(n_max + 1);
  if (n_max >= 1) out[1] = 1.0;
  for (u64 n = 2; n <= n_max; ++n) {
    const u64 p = n < kSpfLimit ? smallest_prime_factor(n) : n;
    out[n] = p == n ? std::exp(-s * std::log(static_cast<double>(n))) : out[p] * out[n / p];
  }
}

}  // namespace

void validate(const AfeConfig& cfg) {
  if (cfg.A < 2) throw usage_error("afe: A must be at least 2");
  if (!(cfg.eps > 0.0 && cfg.eps <= 2.0)) throw usage_error("afe: eps must lie in (0, 2]");
  if (!(cfg.contour_abscissa > 0.0 && cfg.contour_abscissa < 2.0 * cfg.A))
    throw usage_error("afe: contour_abscissa must lie in (0, 2A)");
  if (!(cfg.quad_step > 0.0)) throw usage_error("afe: quad_step must be positive");
  if (cfg.term_budget == 0) throw usage_error("afe: term_budget must be positive");
}

u64 truncation_length(const ArchimedeanData& arch, cplx s, const AfeConfig& cfg, bool dual) {
  const double q = conductor(arch, s, dual).q;
  const double len = std::ceil(std::pow(q, 1.0 + cfg.eps) - 1e-9);
  if (!(len <= static_cast<double>(cfg.term_budget)))
    throw resource_error("truncation length " + std::to_string(len) + " exceeds term budget " +
                         std::to_string(cfg.term_budget));
  return static_cast<u64>(len);
}

cplx v_weight_on_line(const ArchimedeanData& arch, cplx s, u64 n, const AfeConfig& cfg, bool dual,
                      double abscissa) {
  if (n == 0) throw domain_error("v_weight: n must be positive");
  const double x = std::log(static_cast<double>(n));
  const LineKernel k = make_kernel(arch, s, cfg, dual, abscissa, x);
  const LineValue v = evaluate_line(k, x);
  check_accuracy(v);
  return v.value;
}

cplx v_weight(const ArchimedeanData& arch, cplx s, u64 n, const AfeConfig& cfg, bool dual) {
  validate(cfg);
  if (!(s.real() > 0.0)) throw domain_error("v_weight: requires Re s > 0");
  if (n == 0) throw domain_error("v_weight: n must be positive");
  const double x = std::log(static_cast<double>(n));

  std::vector<double> candidates;
  const double cl = left_abscissa(arch, s, dual);
  if (!std::isnan(cl)) candidates.push_back(cl);
  for (int c = 1; c < 2 * cfg.A; ++c) candidates.push_back(c);

  LineKernel best;
  bool have = false;
  for (double c : candidates) {
    LineKernel k = make_kernel(arch, s, cfg, dual, c, x);
    if (!have || line_score(k, x) < line_score(best, x)) {
      best = std::move(k);
      have = true;
    }
  }
  const LineValue v = evaluate_line(best, x);
  check_accuracy(v);
  return v.value;
}

WeightTable::WeightTable(const ArchimedeanData& arch, cplx s, const AfeConfig& cfg, bool dual, u64 n_max)
    : n_max_(std::max<u64>(n_max, 1)) {
  validate(cfg);
  const double x_max = std::log(static_cast<double>(n_max_));
  const LineKernel right = make_kernel(arch, s, cfg, dual, cfg.contour_abscissa, x_max);
  const double cl = left_abscissa(arch, s, dual);
  has_left_ = false;
  pivot_ = -1.0;
  if (!std::isnan(cl)) {
    const LineKernel left = make_kernel(arch, s, cfg, dual, cl, x_max);
    pivot_ = (right.log_peak - left.log_peak) / (right.c - left.c);
    if (pivot_ > 0.0) {
      has_left_ = true;
      const double hi = std::min(pivot_, x_max);
      left_.first = -3;
      const double x0 = static_cast<double>(left_.first) * kTableStep;
      const auto count = static_cast<std::size_t>(std::ceil((hi - x0) / kTableStep)) + 4;
      left_.values = tabulate(left, x0, count, kTableStep);
    }
  }
  if (pivot_ <= x_max) {
    right_.first = static_cast<long>(std::floor(std::max(pivot_, 0.0) / kTableStep)) - 3;
    const double x0 = static_cast<double>(right_.first) * kTableStep;
    const auto count = static_cast<std::size_t>(std::ceil((x_max - x0) / kTableStep)) + 4;
    right_.values = tabulate(right, x0, count, kTableStep);
  }
}

namespace {

// Weights of the six-point Lagrange rule on nodes 0..5 at position u.
void lagrange6(double u, double* w) {
  // Denominators prod_{m != i} (i - m) of the six basis polynomials.
  static constexpr double kDenom[6] = {-120.0, 24.0, -12.0, 12.0, -24.0, 120.0};
  double prefix[7], suffix[7];
  prefix[0] = suffix[6] = 1.0;
  for (int m = 0; m < 6; ++m) prefix[m + 1] = prefix[m] * (u - m);
  for (int m = 5; m >= 0; --m) suffix[m] = suffix[m + 1] * (u - m);
  for (int i = 0; i < 6; ++i) w[i] = prefix[i] * suffix[i + 1] / kDenom[i];
}

}  // namespace

WeightTable::Basis WeightTable::basis(double log_n) {
  const double pos = log_n / kTableStep;
  Basis b;
  b.cell = static_cast<long>(std::floor(pos));
  lagrange6(pos - static_cast<double>(b.cell - 2), b.w);
  return b;
}

cplx WeightTable::interpolate(const Segment& seg, double x, const Basis& b) {
  const long last = static_cast<long>(seg.values.size()) - 6;
  long k0 = b.cell - 2 - seg.first;
  const double* w = b.w;
  double clamped[6];
  if (k0 < 0 || k0 > last) {
    k0 = std::clamp(k0, 0L, std::max(last, 0L));
    lagrange6(x / kTableStep - static_cast<double>(seg.first + k0), clamped);
    w = clamped;
  }
  const cplx* v = seg.values.data() + k0;
  return w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3] + w[4] * v[4] + w[5] * v[5];
}

cplx WeightTable::operator()(u64 n) const {
  if (n == 0 || n > n_max_) throw domain_error("WeightTable: n outside the tabulated range");
  return at_log(std::log(static_cast<double>(n)));
}

cplx WeightTable::at_log(double x) const { return at_log(x, basis(x)); }

cplx WeightTable::at_log(double x, const Basis& b) const {
  return has_left_ && x < pivot_ ? interpolate(left_, x, b) : interpolate(right_, x, b);
}

cplx truncated_l(const SatakeSource& src, const ArchimedeanData& arch, cplx s, const AfeConfig& cfg,
                 bool dual, u64 truncation) {
  validate(cfg);
  if (!(s.real() > -1.0 && s.real() < 2.0)) throw domain_error("truncated_l: requires -1 < Re s < 2");
  const cplx r = 1.0 - s;
  const u64 n1 = truncation > 0 ? truncation : truncation_length(arch, s, cfg, dual);
  const u64 n2 = truncation > 0 ? truncation : truncation_length(arch, r, cfg, !dual);

  const auto tab = src.table(std::max(n1, n2));
  const auto& c1 = dual ? tab->an1 : tab->a1n;
  const auto& c2 = dual ? tab->a1n : tab->an1;
  const WeightTable w1(arch, s, cfg, dual, n1);
  const WeightTable w2(arch, r, cfg, !dual, n2);

  const u64 n_max = std::max(n1, n2);
  // n^{-(1-s)} = conj(n^{-s}) / (n |n^{-s}|^2), so one table serves both sums.
  thread_local std::vector<cplx> pw;
  inverse_powers(s, n_max, pw);
  CompensatedSum first, second;
  for (u64 n = 1; n <= n_max; ++n) {
    const double x = std::log(static_cast<double>(n));
    const auto b = WeightTable::basis(x);
    const cplx z = pw[n];
    if (n <= n1 && c1[n] != 0.0) first.add(c1[n] * z * w1.at_log(x, b));
    if (n <= n2 && c2[n] != 0.0)
      second.add(c2[n] * (std::conj(z) / (static_cast<double>(n) * std::norm(z))) * w2.at_log(x, b));
  }
  const cplx root_number = std::exp(log_gamma_factor(arch, r, !dual) - log_gamma_factor(arch, s, dual));
  return first.value() + root_number * second.value();
}

}  // namespace gl3
