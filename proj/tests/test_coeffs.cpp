#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gl3/arith.hpp"
#include "gl3/coeffs.hpp"
#include "gl3/errors.hpp"
#include "oracles.hpp"

using namespace gl3;

namespace {

std::string delta_fixture() { return std::string(GL3_DATA_DIR) + "/ramanujan_delta_ap.tsv"; }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

// Schur polynomial s_lambda(x1,x2,x3) by the bialternant formula.
cplx schur_bialternant(const std::array<cplx, 3>& x, int l1, int l2, int l3) {
  auto det3 = [](const std::array<std::array<cplx, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const int ex[3] = {l1 + 2, l2 + 1, l3};
  std::array<std::array<cplx, 3>, 3> num{}, den{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      num[i][j] = std::pow(x[i], ex[j]);
      den[i][j] = std::pow(x[i], 2 - j);
    }
  return det3(num) / det3(den);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<SatakeSource> unitary_sources() {
  std::vector<SatakeSource> v{SatakeSource::eisenstein(), SatakeSource::sym2_lift_file(delta_fixture())};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) v.push_back(SatakeSource::random_unitary(seed));
  return v;
}

}  // namespace

TEST_CASE("schur_coefficient eisenstein values") {
  const auto src = SatakeSource::eisenstein();
  CHECK(schur_coefficient(src, 2, 0, 0) == cplx(1.0));
  CHECK(std::abs(schur_coefficient(src, 5, 1, 0) - 3.0) < 1e-12);
  CHECK(std::abs(schur_coefficient(src, 5, 1, 1) - 8.0) < 1e-12);
  for (int a = 0; a <= 7; ++a)
    for (int b = 0; b <= 7; ++b) {
      const double weyl = (a + 1) * (b + 1) * (a + b + 2) / 2.0;
      REQUIRE(std::abs(schur_coefficient(src, 3, a, b) - weyl) < 1e-9 * weyl);
    }
  CHECK_THROWS_AS(schur_coefficient(src, 3, -1, 0), domain_error);
}

TEST_CASE("schur_coefficient matches the bialternant formula for distinct parameters") {
  const auto src = SatakeSource::random_unitary(11);
  for (u64 p : {2, 3, 7, 101}) {
    const auto alpha = src.satake(p).alpha;
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; b <= 5; ++b)
        REQUIRE(rel(schur_coefficient(src, p, a, b), schur_bialternant(alpha, a + b, a, 0)) < 1e-9);
  }
}

TEST_CASE("Satake triples have unit product and unit modulus for unitary kinds") {
  for (const auto& src : unitary_sources()) {
    CHECK(src.unitary());
    for (u64 p : sieve_primes(2000)) {
      const auto t = src.satake(p);
      REQUIRE(std::abs(t.alpha[0] * t.alpha[1] * t.alpha[2] - 1.0) < 1e-12);
      for (const auto& a : t.alpha) REQUIRE(std::abs(std::abs(a) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("coefficient examples") {
  const auto eis = SatakeSource::eisenstein();
  CHECK(coefficient(eis, 1, 1) == cplx(1.0));
  CHECK(coefficient(SatakeSource::random_unitary(5), 1, 1) == cplx(1.0));
  CHECK(std::abs(coefficient(eis, 2, 3) - 9.0) < 1e-12);
  for (u64 n = 1; n <= 10000; ++n) REQUIRE(std::abs(coefficient(eis, 1, n) - double(d3(n))) < 1e-9);
  CHECK_THROWS_AS(coefficient(eis, 0, 1), domain_error);
}

TEST_CASE("index convention: A(1,p) = e1 and A(p,1) = e2") {
  const auto src = SatakeSource::random_unitary(3);
  for (u64 p : {2, 3, 5, 7, 11}) {
    const auto t = src.satake(p);
    const auto& a = t.alpha;
    CHECK(rel(coefficient(src, 1, p), a[0] + a[1] + a[2]) < 1e-12);
    CHECK(rel(coefficient(src, p, 1), a[0] * a[1] + a[0] * a[2] + a[1] * a[2]) < 1e-12);
  }
}

TEST_CASE("local factor series reproduces A(1, p^a) for a <= 8") {
  for (const auto& src : unitary_sources())
    for (u64 p : {2, 3, 13}) {
      const auto series = oracle::local_factor_series(src.satake(p).alpha, 8);
      u64 pa = 1;
      for (int a = 0; a <= 8; ++a, pa *= p) {
        REQUIRE(rel(coefficient(src, 1, pa), series[a]) < 1e-10);
        REQUIRE(rel(coefficient(src, 1, pa), oracle::h_brute(src.satake(p).alpha, a)) < 1e-10);
      }
    }
}

TEST_CASE("dual symmetry A(m,n) = conj A(n,m) for unitary sources, m,n <= 500") {
  for (const auto& src : {SatakeSource::random_unitary(7), SatakeSource::sym2_lift_file(delta_fixture())}) {
    double worst = 0.0;
    for (u64 m = 1; m <= 500; ++m)
      for (u64 n = 1; n <= 500; ++n)
        worst = std::max(worst, std::abs(coefficient(src, m, n) - std::conj(coefficient(src, n, m))));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Ramanujan bound |A(1,n)| <= d3(n) for unitary sources") {
  for (const auto& src : unitary_sources()) {
    const auto tab = src.table(10000);
    for (u64 n = 1; n <= 10000; ++n) REQUIRE(std::abs(tab->a1n[n]) <= double(d3(n)) + 1e-9);
  }
}

TEST_CASE("coefficient table agrees with coefficient()") {
  const auto src = SatakeSource::random_unitary(9);
  const auto tab = src.table(3000);
  CHECK(tab->limit() >= 3000);
  for (u64 n = 1; n <= 3000; ++n) {
    REQUIRE(rel(tab->a1n[n], coefficient(src, 1, n)) < 1e-12);
    REQUIRE(rel(tab->an1[n], coefficient(src, n, 1)) < 1e-12);
  }
  CHECK_THROWS_AS(src.table(kSpfLimit), resource_error);
}

TEST_CASE("hecke expansions: small examples") {
  CHECK(hecke_expand_right(1, 1, 1) == std::vector<HeckeTerm>{{1, 1, 1}});
  CHECK(hecke_expand_left(1, 1, 7) == std::vector<HeckeTerm>{{7, 1, 1}});
  CHECK(hecke_expand_left(5, 1, 5) == std::vector<HeckeTerm>{{1, 5, 1}, {25, 1, 1}});
  CHECK(hecke_expand_right(5, 1, 5).size() == 2);
  // Eisenstein: A(p,1) A(1,p) = 9 = A(p,p) + A(1,1).
  const auto eis = SatakeSource::eisenstein();
  CHECK(std::abs(coefficient(eis, 5, 1) * coefficient(eis, 1, 5) - 9.0) < 1e-12);
  CHECK(std::abs(coefficient(eis, 5, 5) + coefficient(eis, 1, 1) - 9.0) < 1e-12);
  CHECK_THROWS_AS(hecke_expand_left(0, 1, 1), domain_error);
}

TEST_CASE("hecke identities hold numerically") {
  const auto src = SatakeSource::random_unitary(21);
  auto check = [&](u64 m1, u64 m2, u64 n) {
    cplx right = 0.0, left = 0.0;
    for (const auto& t : hecke_expand_right(m1, m2, n)) right += double(t.multiplicity) * coefficient(src, t.r1, t.r2);
    for (const auto& t : hecke_expand_left(m1, m2, n)) left += double(t.multiplicity) * coefficient(src, t.r2, t.r1);
    CHECK(rel(coefficient(src, m1, m2) * coefficient(src, n, 1), right) < 1e-10);
    CHECK(rel(coefficient(src, m2, m1) * coefficient(src, 1, n), left) < 1e-10);
  };
  check(4, 2, 8);    // (p^2, p, p^3)
  check(9, 3, 27);
  check(12, 10, 30);
  check(1, 1, 36);
}

TEST_CASE("sym2 fixture and missing primes") {
  const auto src = SatakeSource::sym2_lift_file(delta_fixture());
  // tau(2) = -24: a(2) = -24 / 2^{11/2}; A(1,2) = a(2)^2 - 1.
  const double a2 = -24.0 / std::pow(2.0, 5.5);
  CHECK(std::abs(coefficient(src, 1, 2) - (a2 * a2 - 1.0)) < 1e-12);
  // p = 1009 is absent from the file: a(p) = 0, Satake triple (-1, 1, -1).
  CHECK(std::abs(coefficient(src, 1, 1009) - (-1.0)) < 1e-12);
  CHECK_THROWS_AS(SatakeSource::sym2_lift({{2, 2.5}}, "bad"), domain_error);
}

TEST_CASE("coefficient file parsing") {
  const auto good = temp_file("gl3_coeff_good.tsv", "# comment\n2\t0.5\t0.25\n3\t-1\n");
  const auto src = SatakeSource::from_file(good.string());
  CHECK(src.kind() == SourceKind::file);
  CHECK(std::abs(coefficient(src, 1, 2) - cplx(0.5, 0.25)) < 1e-12);
  CHECK(std::abs(coefficient(src, 1, 3) - cplx(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(coefficient(src, 2, 1) - cplx(0.5, -0.25)) < 1e-12);
  CHECK_THROWS_AS(SatakeSource::from_file(temp_file("gl3_coeff_order.tsv", "3\t1\n2\t1\n").string()), domain_error);
  CHECK_THROWS_AS(SatakeSource::from_file(temp_file("gl3_coeff_comp.tsv", "4\t1\n").string()), domain_error);
  CHECK_THROWS_AS(SatakeSource::from_file("/nonexistent/coefficients.tsv"), domain_error);
}

TEST_CASE("overflow guard on huge Satake parameters") {
  CHECK_THROWS_AS(schur_from_elementary(cplx(1e200), cplx(1e200), cplx(1.0), 40, 40), domain_error);
  CHECK(std::abs(schur_from_elementary(3.0, 3.0, 1.0, 2, 1) - 3.0 * 2.0 * 5.0 / 2.0) < 1e-12);
}
