#include "gl3/mollifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gl3/errors.hpp"

namespace gl3 {

namespace {

constexpr double kMinT = 1619.0;

void check_basic(double T, double k, double alpha) {
  if (!(T > std::exp(1.0))) throw domain_error("mollifier params: T must exceed e");
  if (!(k > 0.0)) throw domain_error("mollifier params: k must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("mollifier params: alpha must lie in (0,1)");
}

double formula_sigma0(double T, double alpha) {
  return 0.5 + std::pow(std::log(std::log(T)), -(1.0 - alpha));
}

double formula_X(double T, double alpha) {
  return std::exp(std::log(T) / std::pow(std::log(std::log(T)), 2.0 - alpha / 2.0));
}

}  // namespace

MollifierParams make_params(double T, double k, double alpha) {
  if (!(T >= kMinT)) throw domain_error("make_params: T must be at least 1619");
  check_basic(T, k, alpha);
  MollifierParams p;
  p.T = T;
  p.k = k;
  p.alpha = alpha;
  p.sigma0 = formula_sigma0(T, alpha);
  p.X = formula_X(T, alpha);
  p.omega_cap = 200.0 * k * std::log(std::log(T));
  return p;
}

MollifierParams desk_params(double T, double k, double alpha, const ParamOverrides& o) {
  check_basic(T, k, alpha);
  if (T < kMinT && (!o.sigma0 || !o.X))
    throw domain_error("desk_params: below T = 1619 both sigma0 and X must be given");
  MollifierParams p;
  p.T = T;
  p.k = k;
  p.alpha = alpha;
  p.sigma0 = o.sigma0 ? *o.sigma0 : formula_sigma0(T, alpha);
  p.X = o.X ? *o.X : formula_X(T, alpha);
  p.omega_cap = o.omega_cap ? *o.omega_cap : 200.0 * k * std::log(std::log(T));
  p.mode = o.mode;
  p.sigma0_overridden = o.sigma0.has_value();
  p.X_overridden = o.X.has_value();
  p.cap_overridden = o.omega_cap.has_value();
  if (!(p.omega_cap > 0.0)) throw domain_error("desk_params: omega_cap must be positive");
  return p;
}

DirichletPolynomial build_mollifier(const SatakeSource& src, const MollifierParams& params, u64 term_budget) {
  const auto primes = primes_below(params.X);
  const SmoothnessParams sp{params.X, params.omega_cap, params.mode};
  DirichletPolynomial out;

  // Each prime below X goes to n1, n2, n3 or none; the three products are
  // then squarefree and pairwise coprime by construction.
  std::map<u64, cplx> terms;
  u64 n[3] = {1, 1, 1};
  u64 N = 1;
  int omega = 0;  // Omega(N) over primes < X, matching the I* count
  int sign = 1;
  std::size_t visited = 0;

  auto emit = [&]() {
    if (i_star(N, sp) == 0) return;
    const cplx c = static_cast<double>(sign) * coefficient(src, 1, n[0]) * coefficient(src, n[1], 1);
    if (!terms.emplace(N, c).second)
      throw error("build_mollifier: index collision at N = " + std::to_string(N));
    if (terms.size() > term_budget)
      throw resource_error("build_mollifier: term budget " + std::to_string(term_budget) + " exceeded",
                           terms.size());
  };

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    ++visited;
    if (i == primes.size()) {
      emit();
      return;
    }
    const u64 p = primes[i];
    self(self, i + 1);
    for (int slot = 0; slot < 3; ++slot) {
      const int power = slot + 1;
      const int add = params.mode == OmegaMode::with_multiplicity ? power : 1;
      if (static_cast<double>(omega + add) >= params.omega_cap) continue;  // I* already fails
      u64 pk = 1;
      bool overflow = false;
      for (int e = 0; e < power; ++e) overflow |= __builtin_mul_overflow(pk, p, &pk);
      u64 next;
      overflow |= __builtin_mul_overflow(N, pk, &next);
      if (overflow) throw resource_error("build_mollifier: index overflows 64 bits", terms.size());
      const u64 saved_N = N;
      const int saved_sign = sign;
      n[slot] *= p;
      N = next;
      omega += add;
      if (slot != 1) sign = -sign;
      self(self, i + 1);
      n[slot] /= p;
      N = saved_N;
      omega -= add;
      sign = saved_sign;
    }
  };
  dfs(dfs, 0);

  std::ostringstream desc;
  desc << "mollifier src=" << src.label() << " X=" << params.X << " cap=" << params.omega_cap;
  return DirichletPolynomial(std::move(terms), desc.str());
}

MollifierCensus mollifier_census(const DirichletPolynomial& poly) {
  MollifierCensus c;
  for (const auto& [n, v] : poly.terms()) {
    ++c.count;
    c.max_index = n;
    c.l1 += std::abs(v);
    c.l2 += std::norm(v);
  }
  c.l2 = std::sqrt(c.l2);
  return c;
}

void export_polynomial(const DirichletPolynomial& poly, const std::string& path, const std::string& header) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw domain_error("cannot write " + tmp);
    std::istringstream hs(header);
    for (std::string line; std::getline(hs, line);) out << "# " << line << '\n';
    if (!poly.description().empty()) out << "# " << poly.description() << '\n';
    char buf[96];
    for (const auto& [n, v] : poly.terms()) {
      std::snprintf(buf, sizeof buf, "%llu\t%.17g\t%.17g\n", static_cast<unsigned long long>(n), v.real(),
                    v.imag());
      out << buf;
    }
    if (!out) throw domain_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw domain_error("cannot rename onto " + path);
}

DirichletPolynomial import_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open " + path);
  std::map<u64, cplx> terms;
  std::string line, description;
  u64 prev = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# mollifier", 0) == 0) description = line.substr(2);
      continue;
    }
    std::istringstream ss(line);
    u64 n;
    double re, im;
    if (!(ss >> n >> re >> im) || n == 0 || n <= prev)
      throw domain_error(path + ":" + std::to_string(lineno) + ": malformed or out-of-order term");
    terms.emplace(n, cplx(re, im));
    prev = n;
  }
  return DirichletPolynomial(std::move(terms), description);
}

}  // namespace gl3
