#include "gl3/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "gl3/errors.hpp"

namespace gl3 {

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::eisenstein: return "eisenstein";
    case SourceKind::sym2_lift: return "sym2_lift";
    case SourceKind::file: return "file";
    case SourceKind::random_unitary: return "random_unitary";
  }
  return "unknown";
}

struct SatakeSource::State {
  SourceKind kind = SourceKind::eisenstein;
  std::string label;
  bool unitary = true;
  std::uint64_t seed = 0;
  std::map<u64, double> ap;   // sym2_lift input
  std::map<u64, cplx> a1p;    // file input
  u64 last_listed_prime = 0;  // largest prime present in the input file

  std::mutex mutex;
  std::unordered_map<u64, SatakeTriple> cache;
  std::shared_ptr<const CoefficientTable> table;
  bool warned_missing = false;
};

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

SatakeTriple from_roots(const std::array<cplx, 3>& a) {
  SatakeTriple t;
  t.alpha = a;
  t.e1 = a[0] + a[1] + a[2];
  t.e2 = a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
  t.e3 = a[0] * a[1] * a[2];
  return t;
}

// Roots of x^3 - e1 x^2 + e2 x - e3 by Durand-Kerner iteration.
std::array<cplx, 3> cubic_roots(cplx e1, cplx e2, cplx e3) {
  auto poly = [&](cplx x) { return ((x - e1) * x + e2) * x - e3; };
  std::array<cplx, 3> z{cplx(0.4, 0.9), cplx(0.4, 0.9) * cplx(0.4, 0.9),
                        cplx(0.4, 0.9) * cplx(0.4, 0.9) * cplx(0.4, 0.9)};
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (int i = 0; i < 3; ++i) {
      cplx denom = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) denom *= z[i] - z[j];
      if (std::abs(denom) == 0.0) denom = 1e-300;
      const cplx step = poly(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-16) break;
  }
  return z;
}

SatakeTriple unitary_from_a1p(cplx c) {
  SatakeTriple t;
  t.e1 = c;
  t.e2 = std::conj(c);
  t.e3 = 1.0;
  t.alpha = cubic_roots(t.e1, t.e2, t.e3);
  return t;
}

bool roots_unitary(const SatakeTriple& t) {
  for (const auto& a : t.alpha)
    if (std::abs(std::abs(a) - 1.0) > 1e-9) return false;
  return true;
}

SatakeTriple compute_triple(SatakeSource::State& st, u64 p) {
  switch (st.kind) {
    case SourceKind::eisenstein:
      return from_roots({cplx(1.0), cplx(1.0), cplx(1.0)});
    case SourceKind::random_unitary: {
      const std::uint64_t h = splitmix64(st.seed ^ splitmix64(p));
      const double th1 = 2.0 * std::numbers::pi * unit_interval(h);
      const double th2 = 2.0 * std::numbers::pi * unit_interval(splitmix64(h));
      SatakeTriple t = from_roots({std::polar(1.0, th1), std::polar(1.0, th2),
                                   std::polar(1.0, -(th1 + th2))});
      t.e3 = 1.0;
      return t;
    }
    case SourceKind::sym2_lift: {
      double a = 0.0;
      if (auto it = st.ap.find(p); it != st.ap.end()) {
        a = it->second;
      } else if (!st.warned_missing) {
        st.warned_missing = true;
        std::cerr << "warning: source '" << st.label << "' has no a(p) for p = " << p
                  << "; using a(p) = 0 for this and any other absent prime\n";
      }
      const double theta = std::acos(std::clamp(a / 2.0, -1.0, 1.0));
      const cplx beta = std::polar(1.0, theta);
      SatakeTriple t = from_roots({beta * beta, cplx(1.0), 1.0 / (beta * beta)});
      t.e3 = 1.0;
      return t;
    }
    case SourceKind::file: {
      cplx c = 0.0;
      if (auto it = st.a1p.find(p); it != st.a1p.end()) {
        c = it->second;
      } else if (!st.warned_missing) {
        st.warned_missing = true;
        std::cerr << "warning: source '" << st.label << "' has no A(1,p) for p = " << p
                  << "; using A(1,p) = 0 for this and any other absent prime\n";
      }
      return unitary_from_a1p(c);
    }
  }
  throw domain_error("unknown source kind");
}

// Complete homogeneous symmetric polynomials h_0..h_kmax from e1, e2, e3.
std::vector<cplx> complete_homogeneous(cplx e1, cplx e2, cplx e3, int kmax) {
  std::vector<cplx> h(static_cast<std::size_t>(std::max(kmax, 0)) + 1);
  h[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    cplx v = e1 * h[k - 1];
    if (k >= 2) v -= e2 * h[k - 2];
    if (k >= 3) v += e3 * h[k - 3];
    h[k] = v;
  }
  return h;
}

struct DataLine {
  u64 p;
  std::vector<double> values;
};

std::vector<DataLine> read_prime_file(const std::string& path, std::size_t min_cols,
                                      std::size_t max_cols) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open coefficient file: " + path);
  std::vector<DataLine> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    DataLine row{};
    if (!(ss >> row.p)) continue;
    double v;
    while (ss >> v) row.values.push_back(v);
    if (row.values.size() < min_cols || row.values.size() > max_cols)
      throw domain_error(path + ":" + std::to_string(lineno) + ": wrong number of columns");
    if (row.p < 2 || (row.p < kSpfLimit && smallest_prime_factor(row.p) != row.p))
      throw domain_error(path + ":" + std::to_string(lineno) + ": " + std::to_string(row.p) +
                         " is not a prime");
    if (!rows.empty() && row.p <= rows.back().p)
      throw domain_error(path + ":" + std::to_string(lineno) + ": primes must be ascending");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SatakeSource::SatakeSource(std::shared_ptr<State> state) : state_(std::move(state)) {}

SatakeSource SatakeSource::eisenstein() {
  auto st = std::make_shared<State>();
  st->kind = SourceKind::eisenstein;
  st->label = "eisenstein";
  return SatakeSource(st);
}

SatakeSource SatakeSource::random_unitary(std::uint64_t seed) {
  auto st = std::make_shared<State>();
  st->kind = SourceKind::random_unitary;
  st->seed = seed;
  st->label = "random_unitary(seed=" + std::to_string(seed) + ")";
  return SatakeSource(st);
}

SatakeSource SatakeSource::sym2_lift(std::map<u64, double> ap, std::string label) {
  for (const auto& [p, a] : ap)
    if (!(std::abs(a) <= 2.0))
      throw domain_error("sym2_lift: |a(" + std::to_string(p) + ")| > 2");
  auto st = std::make_shared<State>();
  st->kind = SourceKind::sym2_lift;
  st->label = std::move(label);
  st->last_listed_prime = ap.empty() ? 0 : ap.rbegin()->first;
  st->ap = std::move(ap);
  return SatakeSource(st);
}

SatakeSource SatakeSource::sym2_lift_file(const std::string& path) {
  std::map<u64, double> ap;
  for (const auto& row : read_prime_file(path, 1, 1)) ap[row.p] = row.values[0];
  return sym2_lift(std::move(ap), "sym2_lift(" + path + ")");
}

SatakeSource SatakeSource::from_values(std::map<u64, cplx> a1p, std::string label) {
  auto st = std::make_shared<State>();
  st->kind = SourceKind::file;
  st->label = std::move(label);
  for (const auto& [p, c] : a1p)
    if (!roots_unitary(unitary_from_a1p(c))) st->unitary = false;
  st->last_listed_prime = a1p.empty() ? 0 : a1p.rbegin()->first;
  st->a1p = std::move(a1p);
  return SatakeSource(st);
}

SatakeSource SatakeSource::from_file(const std::string& path) {
  std::map<u64, cplx> a1p;
  for (const auto& row : read_prime_file(path, 1, 2))
    a1p[row.p] = cplx(row.values[0], row.values.size() > 1 ? row.values[1] : 0.0);
  return from_values(std::move(a1p), "file(" + path + ")");
}

SourceKind SatakeSource::kind() const { return state_->kind; }
const std::string& SatakeSource::label() const { return state_->label; }
bool SatakeSource::unitary() const { return state_->unitary; }

SatakeTriple SatakeSource::satake(u64 p) const {
  std::lock_guard lock(state_->mutex);
  if (auto it = state_->cache.find(p); it != state_->cache.end()) return it->second;
  SatakeTriple t = compute_triple(*state_, p);
  state_->cache.emplace(p, t);
  return t;
}

std::shared_ptr<const CoefficientTable> SatakeSource::table(u64 limit) const {
  {
    std::lock_guard lock(state_->mutex);
    if (state_->table && state_->table->limit() >= limit) return state_->table;
  }
  u64 target = limit;
  {
    std::lock_guard lock(state_->mutex);
    if (state_->table) target = std::max(limit, 2 * state_->table->limit());
  }
  if (target >= kSpfLimit) {
    target = std::max(limit, kSpfLimit - 1);
    if (limit >= kSpfLimit)
      throw resource_error("coefficient table limit " + std::to_string(limit) +
                           " exceeds the factor-table range");
  }

  auto tab = std::make_shared<CoefficientTable>();
  tab->a1n.assign(target + 1, cplx(0.0));
  tab->an1.assign(target + 1, cplx(0.0));
  tab->a1n[1] = tab->an1[1] = 1.0;

  // Local values A(1,p^a) = h_a and A(p^a,1) = s_{(a,a,0)} per prime.
  std::unordered_map<u64, std::pair<std::vector<cplx>, std::vector<cplx>>> local;
  for (u64 p : sieve_primes(target)) {
    const SatakeTriple t = satake(p);
    int amax = 0;
    for (u64 q = p; q <= target / p; q *= p) ++amax;
    ++amax;
    std::vector<cplx> up(amax + 1), down(amax + 1);
    for (int a = 0; a <= amax; ++a) {
      up[a] = schur_from_elementary(t.e1, t.e2, t.e3, 0, a);
      down[a] = schur_from_elementary(t.e1, t.e2, t.e3, a, 0);
    }
    local.emplace(p, std::make_pair(std::move(up), std::move(down)));
  }
  for (u64 n = 2; n <= target; ++n) {
    const u64 p = smallest_prime_factor(n);
    u64 m = n;
    int a = 0;
    while (m % p == 0) {
      m /= p;
      ++a;
    }
    const auto& loc = local.at(p);
    tab->a1n[n] = tab->a1n[m] * loc.first[a];
    tab->an1[n] = tab->an1[m] * loc.second[a];
  }

  std::lock_guard lock(state_->mutex);
  if (!state_->table || state_->table->limit() < tab->limit()) state_->table = tab;
  return state_->table;
}

cplx schur_from_elementary(cplx e1, cplx e2, cplx e3, int a, int b) {
  if (a < 0 || b < 0) throw domain_error("schur_coefficient: negative exponent");
  if (a == 0 && b == 0) return 1.0;
  const double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3), 1.0});
  if (static_cast<double>(a + b + 1) * std::log(3.0 * scale) > 680.0)
    throw domain_error("schur_coefficient: Satake parameters too large (overflow guard)");
  const int l1 = a + b;
  const int l2 = a;
  const auto h = complete_homogeneous(e1, e2, e3, l1 + 1);
  // Jacobi-Trudi for a partition with at most two nonzero parts.
  cplx value = h[l1] * h[l2];
  if (l2 >= 1) value -= h[l1 + 1] * h[l2 - 1];
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw domain_error("schur_coefficient: non-finite value (overflow guard)");
  return value;
}

cplx schur_coefficient(const SatakeSource& src, u64 p, int a, int b) {
  if (a == 0 && b == 0) return 1.0;
  const SatakeTriple t = src.satake(p);
  return schur_from_elementary(t.e1, t.e2, t.e3, a, b);
}

cplx coefficient(const SatakeSource& src, u64 m, u64 n) {
  if (m == 0 || n == 0) throw domain_error("coefficient: indices must be positive");
  const auto fm = factorize(m).factors;
  const auto fn = factorize(n).factors;
  cplx value = 1.0;
  std::size_t i = 0, j = 0;
  while (i < fm.size() || j < fn.size()) {
    u64 p;
    int a = 0, b = 0;
    if (j >= fn.size() || (i < fm.size() && fm[i].first < fn[j].first)) {
      p = fm[i].first;
      a = fm[i++].second;
    } else if (i >= fm.size() || fn[j].first < fm[i].first) {
      p = fn[j].first;
      b = fn[j++].second;
    } else {
      p = fm[i].first;
      a = fm[i++].second;
      b = fn[j++].second;
    }
    value *= schur_coefficient(src, p, a, b);
  }
  return value;
}

namespace {

std::vector<u64> divisors(u64 n) {
  std::vector<u64> divs{1};
  for (const auto& [p, e] : factorize(n).factors) {
    const std::size_t existing = divs.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < existing; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<HeckeTerm> hecke_pairs(u64 m1, u64 m2, u64 n) {
  if (m1 == 0 || m2 == 0 || n == 0) throw domain_error("hecke expansion: arguments must be positive");
  std::map<std::pair<u64, u64>, int> acc;
  for (u64 d1 : divisors(m1)) {
    if (n % d1 != 0) continue;
    for (u64 d2 : divisors(m2)) {
      if ((n / d1) % d2 != 0) continue;
      const u64 d0 = n / d1 / d2;
      ++acc[{(m1 / d1) * d0, (m2 / d2) * d1}];
    }
  }
  std::vector<HeckeTerm> out;
  out.reserve(acc.size());
  for (const auto& [pair, mult] : acc) out.push_back({pair.first, pair.second, mult});
  return out;
}

}  // namespace

std::vector<HeckeTerm> hecke_expand_left(u64 m1, u64 m2, u64 n) { return hecke_pairs(m1, m2, n); }
std::vector<HeckeTerm> hecke_expand_right(u64 m1, u64 m2, u64 n) { return hecke_pairs(m1, m2, n); }

}  // namespace gl3
