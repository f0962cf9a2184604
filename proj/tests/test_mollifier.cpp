#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "gl3/arith.hpp"
#include "gl3/errors.hpp"
#include "gl3/mollifier.hpp"
#include "oracles.hpp"

using namespace gl3;

namespace {

constexpr double kNoCap = 1e9;

MollifierParams small_params(double X, double cap = kNoCap) {
  ParamOverrides o;
  o.sigma0 = 0.75;
  o.X = X;
  o.omega_cap = cap;
  return desk_params(100.0, 1.0, 0.5, o);
}

// prod over p < X of prod_i (1 - alpha_i p^{-s}), expanded into a map N -> c.
std::map<u64, cplx> inverse_euler_product(const SatakeSource& src, double X) {
  std::map<u64, cplx> acc{{1, 1.0}};
  for (u64 p : oracle::primes_upto(static_cast<u64>(std::ceil(X)) - 1)) {
    if (static_cast<double>(p) >= X) continue;
    const auto a = src.satake(p).alpha;
    std::array<cplx, 4> local{1.0, 0.0, 0.0, 0.0};
    for (const cplx& ai : a) {
      for (int k = 3; k >= 1; --k) local[k] -= ai * local[k - 1];
    }
    std::map<u64, cplx> next;
    for (const auto& [n, c] : acc) {
      u64 pk = 1;
      for (int k = 0; k <= 3; ++k, pk *= p) next[n * pk] += c * local[k];
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

TEST_CASE("make_params formulas") {
  const auto p = make_params(1e6, 1.0, 0.1);
  const double ll = std::log(std::log(1e6));
  CHECK(p.sigma0 == doctest::Approx(0.5 + std::pow(ll, -0.9)).epsilon(1e-14));
  CHECK(p.X == doctest::Approx(std::pow(1e6, 1.0 / std::pow(ll, 1.95))).epsilon(1e-12));
  CHECK(p.omega_cap == doctest::Approx(200.0 * ll).epsilon(1e-14));
  CHECK(p.sigma0 > 0.5);
  CHECK(p.sigma0 < 1.0);
  CHECK(p.X > 1.0);
  // sigma0 < 1 needs (log log T)^{1 - alpha} > 2, far beyond T = 1619 for
  // alpha = 1/2; only monotonicity holds from the threshold on.
  CHECK(make_params(1619.0, 1.0, 0.5).sigma0 > 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double T = 1619.0; T < 1e30; T *= 7.0) {
    const double s = make_params(T, 1.0, 0.5).sigma0;
    CHECK(s < prev);
    prev = s;
  }
  CHECK_THROWS_AS(make_params(1600.0, 1.0, 0.5), domain_error);
  CHECK_THROWS_AS(make_params(1e6, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(make_params(1e6, 0.0, 0.5), domain_error);
}

TEST_CASE("desk_params overrides") {
  ParamOverrides o;
  CHECK_THROWS_AS(desk_params(100.0, 1.0, 0.5, o), domain_error);
  o.sigma0 = 0.7;
  CHECK_THROWS_AS(desk_params(100.0, 1.0, 0.5, o), domain_error);
  o.X = 6.0;
  const auto p = desk_params(100.0, 1.0, 0.5, o);
  CHECK(p.sigma0 == 0.7);
  CHECK(p.X == 6.0);
  CHECK(p.sigma0_overridden);
  CHECK_FALSE(p.cap_overridden);
  const auto q = desk_params(1e6, 1.0, 0.1, {});
  const auto r = make_params(1e6, 1.0, 0.1);
  CHECK(q.sigma0 == r.sigma0);
  CHECK(q.X == r.X);
}

TEST_CASE("mollifier with no primes below X") {
  const auto m = build_mollifier(SatakeSource::random_unitary(3), small_params(1.9));
  REQUIRE(m.size() == 1);
  CHECK(m.coefficient(1) == cplx(1.0));
  const auto c = mollifier_census(m);
  CHECK(c.count == 1);
  CHECK(c.max_index == 1);
  CHECK(c.l1 == 1.0);
  CHECK(c.l2 == 1.0);
}

TEST_CASE("mollifier at X = 3") {
  const auto m = build_mollifier(SatakeSource::eisenstein(), small_params(3.0));
  REQUIRE(m.size() == 4);
  CHECK(m.coefficient(1) == cplx(1.0));
  CHECK(m.coefficient(2) == cplx(-3.0));
  CHECK(m.coefficient(4) == cplx(3.0));
  CHECK(m.coefficient(8) == cplx(-1.0));
  CHECK(std::abs(evaluate(m, 0.0)) == 0.0);
  const auto c = mollifier_census(m);
  CHECK(c.count == 4);
  CHECK(c.max_index == 8);
  CHECK(c.l1 == 8.0);
  CHECK(c.l2 == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("uncapped mollifier equals the inverse Euler product") {
  for (const auto& src : {SatakeSource::eisenstein(), SatakeSource::random_unitary(11),
                          SatakeSource::sym2_lift_file(std::string(GL3_DATA_DIR) + "/ramanujan_delta_ap.tsv")}) {
    for (double X : {5.0, 8.0, 14.0}) {
      const auto m = build_mollifier(src, small_params(X));
      const auto ref = inverse_euler_product(src, X);
      std::size_t nonzero = 0;
      for (const auto& [n, c] : ref) {
        if (std::abs(c) < 1e-12) continue;
        ++nonzero;
        INFO(src.label() << " X = " << X << " N = " << n);
        CHECK(std::abs(m.coefficient(n) - c) < 1e-12);
      }
      CHECK(m.size() == nonzero);
    }
  }
}

TEST_CASE("mollifier inverts zeta^3 as a formal series") {
  const auto m = build_mollifier(SatakeSource::eisenstein(), small_params(12.0));
  for (u64 N = 1; N <= 100; ++N) {
    if (oracle::factor(N).empty() ? false : oracle::factor(N).back().first >= 12) continue;
    cplx acc = 0.0;
    for (u64 d = 1; d <= N; ++d)
      if (N % d == 0) acc += m.coefficient(d) * static_cast<double>(oracle::d3_triples(N / d));
    INFO("N = " << N);
    CHECK(std::abs(acc - (N == 1 ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("support, truncation and coefficient size") {
  const auto src = SatakeSource::random_unitary(5);
  for (double cap : {2.0, 3.5, 5.0}) {
    const double X = 14.0;
    const auto m = build_mollifier(src, small_params(X, cap));
    for (const auto& [N, c] : m.terms()) {
      int omega = 0;
      for (const auto& [p, e] : oracle::factor(N)) {
        CHECK(static_cast<double>(p) < X);
        omega += e;
      }
      INFO("cap = " << cap << " N = " << N);
      CHECK(omega < cap);
      CHECK(i_star(N, {X, cap, OmegaMode::with_multiplicity}) == 1);
      const double d = static_cast<double>(oracle::d3_triples(N));
      CHECK(std::abs(c) <= d * d + 1e-12);
    }
    CHECK(static_cast<double>(m.size()) <= std::pow(X, cap));
  }
}

TEST_CASE("capped terms are the uncapped terms with few prime factors") {
  const auto src = SatakeSource::random_unitary(9);
  const auto full = build_mollifier(src, small_params(12.0));
  const auto capped = build_mollifier(src, small_params(12.0, 4.0));
  std::size_t kept = 0;
  for (const auto& [N, c] : full.terms()) {
    int omega = 0;
    for (const auto& [p, e] : oracle::factor(N)) omega += e;
    if (omega < 4) {
      ++kept;
      CHECK(capped.coefficient(N) == c);
    }
  }
  CHECK(capped.size() == kept);
}

TEST_CASE("distinct prime counting keeps more terms") {
  const auto src = SatakeSource::eisenstein();
  auto p = small_params(12.0, 3.0);
  const auto mult = build_mollifier(src, p);
  p.mode = OmegaMode::distinct;
  const auto dist = build_mollifier(src, p);
  CHECK(dist.size() > mult.size());
  for (const auto& [N, c] : dist.terms()) CHECK(oracle::factor(N).size() < 3);
}

TEST_CASE("build is deterministic") {
  const auto p = small_params(20.0, 6.0);
  const auto a = build_mollifier(SatakeSource::random_unitary(2), p);
  const auto b = build_mollifier(SatakeSource::random_unitary(2), p);
  CHECK(a.terms() == b.terms());
}

TEST_CASE("term budget") {
  CHECK_THROWS_AS(build_mollifier(SatakeSource::eisenstein(), small_params(3.0), 3), resource_error);
  CHECK_NOTHROW(build_mollifier(SatakeSource::eisenstein(), small_params(3.0), 4));
}

TEST_CASE("export and import round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "gl3_mollifier_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "m.tsv").string();
  const auto m = build_mollifier(SatakeSource::random_unitary(4), small_params(10.0, 5.0));
  export_polynomial(m, path, "T=100\nX=10");
  const auto back = import_polynomial(path);
  CHECK(back.terms() == m.terms());
  CHECK(back.description() == m.description());

  const auto bad = (dir / "bad.tsv").string();
  {
    std::ofstream out(bad);
    out << "# header\n4\t1\t0\n2\t1\t0\n";
  }
  CHECK_THROWS_AS(import_polynomial(bad), domain_error);
  CHECK_THROWS_AS(import_polynomial((dir / "missing.tsv").string()), domain_error);
  std::filesystem::remove_all(dir);
}
