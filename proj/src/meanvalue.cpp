#include "gl3/meanvalue.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gl3/errors.hpp"
#include "gl3/identities.hpp"
#include "gl3/parallel.hpp"
#include "gl3/summation.hpp"

namespace gl3 {

cplx oscillatory_integral(u64 n, u64 m, double T) {
  if (n == 0 || m == 0) throw domain_error("oscillatory_integral: indices must be positive");
  if (!(T > 0.0)) throw domain_error("oscillatory_integral: T must be positive");
  if (n == m) return T;
  const double r = std::log(static_cast<double>(n)) - std::log(static_cast<double>(m));
  // (e^{2irT} - e^{irT}) / (ir) = e^{3irT/2} * 2 sin(rT/2) / r
  return std::polar(2.0 * std::sin(0.5 * r * T) / r, 1.5 * r * T);
}

cplx polynomial_meanvalue(const DirichletPolynomial& a, const DirichletPolynomial& b, double T,
                          std::size_t pair_budget) {
  if (a.size() != 0 && b.size() > pair_budget / a.size())
    throw resource_error("polynomial_meanvalue: " + std::to_string(a.size()) + " x " + std::to_string(b.size()) +
                         " pairs exceed the budget");
  CompensatedSum diagonal;
  for (const auto& [n, an] : a.terms()) {
    const cplx bn = b.coefficient(n);
    if (bn != 0.0) diagonal.add(an * std::conj(bn) * T);
  }

  std::vector<std::pair<u64, cplx>> rows(a.terms().begin(), a.terms().end());
  std::vector<std::pair<u64, cplx>> cols(b.terms().begin(), b.terms().end());
  std::vector<double> log_cols(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) log_cols[j] = std::log(static_cast<double>(cols[j].first));

  constexpr std::size_t kRowBlock = 64;
  const std::size_t blocks = (rows.size() + kRowBlock - 1) / kRowBlock;
  std::vector<cplx> partial(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    CompensatedSum acc;
    const std::size_t end = std::min(rows.size(), (blk + 1) * kRowBlock);
    for (std::size_t i = blk * kRowBlock; i < end; ++i) {
      const auto& [n, an] = rows[i];
      const double log_n = std::log(static_cast<double>(n));
      CompensatedSum row;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].first == n) continue;
        const double r = log_cols[j] - log_n;
        row.add(std::conj(cols[j].second) * std::polar(2.0 * std::sin(0.5 * r * T) / r, 1.5 * r * T));
      }
      acc.add(an * row.value());
    }
    partial[blk] = acc.value();
  });
  CompensatedSum total = diagonal;
  for (const cplx& v : partial) total.add(v);
  return total.value();
}

namespace {

struct MomentSetup {
  DirichletPolynomial mollifier;
  std::function<cplx(double)> l_value;
  std::optional<DirichletPolynomial> l_poly;  // set when L is a finite polynomial
  u64 truncation = 0;
};

MomentSetup setup(const SatakeSource& src, const ArchimedeanData& arch, const MollifierParams& params,
                  const AfeConfig& cfg, const MomentOptions& opts) {
  if (!(params.T > 0.0)) throw domain_error("moment: T must be positive");
  MomentSetup m;
  m.mollifier = build_mollifier(src, params, opts.term_budget);
  const double sigma = params.sigma0;
  if (opts.l_is_one) {
    m.l_poly = DirichletPolynomial({{1, cplx(1.0)}});
  } else if (opts.l_polynomial) {
    m.l_poly = *opts.l_polynomial;
  }
  if (m.l_poly) {
    const DirichletPolynomial p = *m.l_poly;
    m.l_value = [p, sigma](double t) { return p.evaluate(cplx(sigma, t)); };
  } else {
    validate(cfg);
    m.truncation = truncation_length(arch, cplx(sigma, 2.0 * params.T), cfg);
    src.table(m.truncation);
    const u64 n = m.truncation;
    m.l_value = [&src, &arch, cfg, sigma, n](double t) {
      return truncated_l(src, arch, cplx(sigma, t), cfg, false, n);
    };
  }
  return m;
}

std::string describe(const MollifierParams& p) {
  std::ostringstream os;
  os << "T=" << p.T << " sigma0=" << p.sigma0 << " X=" << p.X << " cap=" << p.omega_cap;
  return os.str();
}

}  // namespace

ExperimentReport mollified_second_moment(const SatakeSource& src, const ArchimedeanData& arch,
                                         const MollifierParams& params, const AfeConfig& cfg,
                                         const MomentOptions& opts) {
  MomentSetup m = setup(src, arch, params, cfg, opts);
  const double sigma = params.sigma0;
  const DirichletPolynomial& M = m.mollifier;
  auto integrand = [&](double t) {
    const cplx s(sigma, t);
    return cplx(std::norm(1.0 - m.l_value(t) * M.evaluate(s)), 0.0);
  };
  QuadratureOptions q = opts.quad;
  q.keep_samples = true;
  const auto quad = integrate(integrand, params.T, 2.0 * params.T, q);

  ExperimentReport r;
  r.params = params;
  r.sigma = sigma;
  r.integral = quad.value;
  r.node_count = quad.evaluations;
  r.panels = quad.panels;
  r.max_residual = quad.level_difference;
  r.truncation = m.truncation;
  r.mollifier_terms = M.size();
  for (const auto& [t, v] : quad.samples) r.trace.emplace_back(t, v.real());
  if (m.l_poly) {
    DirichletPolynomial q1({{1, cplx(1.0)}});
    DirichletPolynomial prod = m.l_poly->times(M);
    for (const auto& [n, c] : prod.terms()) q1.add(n, -c);
    const DirichletPolynomial qs = q1.shifted(sigma);
    r.oracle_value = polynomial_meanvalue(qs, qs, params.T).real();
  }
  if (sigma >= 0.5) r.prediction = main_constant(sigma, 100000).constant.value * params.T;
  r.wall_notes = describe(params) +
                 "; prediction is the asymptotic diagonal main term, not expected to match at desk scale";
  return r;
}

ExperimentReport mollified_first_moment(const SatakeSource& src, const ArchimedeanData& arch,
                                        const MollifierParams& params, const AfeConfig& cfg,
                                        const MomentOptions& opts) {
  MomentSetup m = setup(src, arch, params, cfg, opts);
  const double sigma = params.sigma0;
  const DirichletPolynomial& M = m.mollifier;
  auto integrand = [&](double t) { return m.l_value(t) * M.evaluate(cplx(sigma, t)); };
  const auto quad = integrate(integrand, params.T, 2.0 * params.T, opts.quad);

  ExperimentReport r;
  r.params = params;
  r.sigma = sigma;
  r.integral = quad.value;
  r.node_count = quad.evaluations;
  r.panels = quad.panels;
  r.max_residual = quad.level_difference;
  r.truncation = m.truncation;
  r.mollifier_terms = M.size();
  r.prediction = params.T;

  // Bilinear terms a_n c_m osc(1, nm): the polynomial itself when L is one,
  // otherwise the leading AFE sum with unit weights.
  DirichletPolynomial lead;
  if (m.l_poly) {
    lead = *m.l_poly;
  } else {
    const auto tab = src.table(m.truncation);
    for (u64 n = 1; n <= m.truncation; ++n)
      if (tab->a1n[n] != 0.0) lead.add(n, tab->a1n[n]);
  }
  const DirichletPolynomial ls = lead.shifted(sigma);
  const DirichletPolynomial ms = M.shifted(sigma);
  OffDiagonal best;
  for (const auto& [n, a] : ls.terms())
    for (const auto& [k, c] : ms.terms()) {
      if (n * k == 1) continue;
      const double mag = std::abs(a * c * oscillatory_integral(1, n * k, params.T));
      if (mag > best.magnitude) best = {n, k, mag};
    }
  if (best.n != 0) r.largest_off_diagonal = best;
  if (m.l_poly) {
    const DirichletPolynomial prod = m.l_poly->times(M).shifted(sigma);
    r.oracle_value = polynomial_meanvalue(prod, DirichletPolynomial({{1, cplx(1.0)}}), params.T).real();
  }
  r.wall_notes = describe(params) + "; prediction is T (the n = m = 1 diagonal)";
  return r;
}

namespace {

struct BoundaryZero {};

// Total change of arg f along the rectangle boundary, counterclockwise.
double boundary_phase(const std::function<cplx(cplx)>& f, double sigma, double T1, double T2,
                      std::size_t& evaluations) {
  constexpr double kRight = 1.5;
  constexpr double kMaxStep = 0.25;
  constexpr double kFirstStep = 0.02;
  constexpr double kTargetChange = 0.6;
  constexpr double kRejectPhase = 0.5 * std::numbers::pi;
  constexpr double kRejectLog = 1.0;
  const cplx corners[5] = {{sigma, T1}, {kRight, T1}, {kRight, T2}, {sigma, T2}, {sigma, T1}};
  double scale = 0.0;
  cplx corner_values[4];
  for (int i = 0; i < 4; ++i) {
    corner_values[i] = f(corners[i]);
    ++evaluations;
    scale = std::max(scale, std::abs(corner_values[i]));
  }
  const double threshold = 1e-10 * scale;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corners[e], z1 = corners[e + 1];
    const double len = std::abs(z1 - z0);
    const double h_max = std::min(kMaxStep, len) / len;
    const double h_min = 1e-9 / len;
    double u = 0.0, du = std::min(h_max, kFirstStep / len);
    cplx w = corner_values[e];
    if (std::abs(w) <= threshold) throw BoundaryZero{};
    while (u < 1.0) {
      const double step = std::min(du, 1.0 - u);
      const double u_next = step == 1.0 - u ? 1.0 : u + step;
      const cplx w_next = u_next == 1.0 ? corner_values[(e + 1) % 4] : f(z0 + (z1 - z0) * u_next);
      if (u_next != 1.0) ++evaluations;
      if (std::abs(w_next) <= threshold) throw BoundaryZero{};
      const double dphi = std::arg(w_next / w);
      const double dmod = std::abs(std::log(std::abs(w_next) / std::abs(w)));
      if ((std::abs(dphi) >= kRejectPhase || dmod > kRejectLog) && step > h_min) {
        du = 0.5 * step;
        continue;
      }
      if (std::abs(dphi) >= kRejectPhase) throw BoundaryZero{};
      total += dphi;
      u = u_next;
      w = w_next;
      // Aim the next step at a phase or log-modulus change of kTargetChange.
      const double rate = std::max(std::abs(dphi), dmod) / step;
      du = std::min({h_max, 2.0 * step, rate > 0.0 ? kTargetChange / rate : h_max});
    }
  }
  return total;
}

}  // namespace

ZeroCountResult zero_count(const SatakeSource& src, const ArchimedeanData& arch, double sigma, double T1, double T2,
                           const AfeConfig& cfg) {
  if (!(sigma < 1.5)) throw domain_error("zero_count: sigma must be below 1.5");
  if (!(sigma > -1.0)) throw domain_error("zero_count: sigma must exceed -1");
  if (T2 < T1) throw domain_error("zero_count: requires T1 <= T2");
  ZeroCountResult r;
  r.sigma = sigma;
  r.T1 = T1;
  r.T2 = T2;
  if (T1 == T2) return r;
  if (!(T1 > 0.0)) throw domain_error("zero_count: requires T1 > 0");

  auto f = [&](cplx z) { return truncated_l(src, arch, z, cfg); };
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double shift = 1e-3 * attempt;
    try {
      const double total = boundary_phase(f, sigma, T1 + shift, T2 + shift, r.evaluations);
      const double turns = total / (2.0 * std::numbers::pi);
      r.count = std::lround(turns);
      r.winding_residual = std::abs(turns - static_cast<double>(r.count));
      r.T1 = T1 + shift;
      r.T2 = T2 + shift;
      r.perturbations = attempt;
      return r;
    } catch (const BoundaryZero&) {
    }
  }
  throw geometry_error("zero_count: zero on the contour persists after 3 perturbations");
}

LittlewoodReport littlewood_check(const SatakeSource& src, const ArchimedeanData& arch,
                                  const MollifierParams& params, double sigma, const AfeConfig& cfg,
                                  const MomentOptions& opts) {
  if (!(sigma > 0.5)) throw domain_error("littlewood_check: requires sigma > 1/2");
  const double T = params.T;
  LittlewoodReport r;
  r.sigma = sigma;
  r.T = T;
  r.slack = r.C * std::log(T);
  const double top = 1.0 + 1.0 / std::log(T);

  auto band = [&](double s) { return zero_count(src, arch, s, T, 2.0 * T, cfg).count; };
  if (sigma < top) {
    const long base = band(sigma);
    r.counts.emplace_back(sigma, base);
    if (base != 0) {
      // Counts are nonincreasing in sigma'; integrate the step function by
      // locating each drop to within 1e-3.
      double lhs = 0.0, left = sigma;
      long current = base;
      while (current > 0 && left < top) {
        double lo = left, hi = top;
        if (band(hi - 1e-9) == current) {
          lhs += current * (top - left);
          break;
        }
        while (hi - lo > 1e-3) {
          const double mid = 0.5 * (lo + hi);
          (band(mid) == current ? lo : hi) = mid;
        }
        lhs += current * (hi - left);
        left = hi;
        current = band(left);
        r.counts.emplace_back(left, current);
      }
      r.lhs = lhs;
    }
  }

  MollifierParams line = params;
  line.sigma0 = sigma;
  const ExperimentReport moment = mollified_second_moment(src, arch, line, cfg, opts);
  r.moment = moment.integral.real();
  r.rhs = r.moment / (2.0 * std::numbers::pi);
  r.satisfied = r.lhs <= r.rhs + r.slack;
  return r;
}

double density_exponent_r(double T, double sigma, double alpha) {
  const double lt = std::log(T);
  const double shift = std::pow(std::log(lt), -(1.0 - alpha));
  return (1.0 + 1.0 / lt - sigma) / (0.5 + 1.0 / lt - shift);
}

double density_exponent_s(double T, double sigma, double alpha, double k) {
  const double lt = std::log(T);
  const double shift = std::pow(std::log(lt), -(1.0 - alpha));
  return -(100.0 * k / 3.0 - 1.0) * (sigma - 0.5 - shift) / (0.5 + 1.0 / lt - shift);
}

}  // namespace gl3
