#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gl3/arith.hpp"

namespace gl3 {

using cplx = std::complex<double>;

enum class SourceKind { eisenstein, sym2_lift, file, random_unitary };

const char* to_string(SourceKind kind);

// Satake data at one prime. The elementary symmetric functions are the
// primary representation; the roots are kept for reporting and for the
// local-factor checks.
struct SatakeTriple {
  std::array<cplx, 3> alpha{};
  cplx e1, e2, e3;
};

// A(1,n) and A(n,1) for 1 <= n <= size-1 (index 0 unused).
struct CoefficientTable {
  std::vector<cplx> a1n;
  std::vector<cplx> an1;
  u64 limit() const { return a1n.empty() ? 0 : a1n.size() - 1; }
};

// Per-prime Satake parameters defining a degree-3 coefficient family.
// Cheap to copy: copies share one memoizing, internally synchronized state.
class SatakeSource {
 public:
  static SatakeSource eisenstein();
  static SatakeSource random_unitary(std::uint64_t seed);
  // GL(2) eigenvalues a(p) with |a(p)| <= 2; absent primes default to 0.
  static SatakeSource sym2_lift(std::map<u64, double> ap, std::string label);
  static SatakeSource sym2_lift_file(const std::string& path);
  // Per-prime A(1,p); the triple is the unitary one with e1 = A(1,p),
  // e2 = conj(A(1,p)), e3 = 1. Absent primes default to A(1,p) = 0.
  static SatakeSource from_values(std::map<u64, cplx> a1p, std::string label);
  static SatakeSource from_file(const std::string& path);

  SourceKind kind() const;
  const std::string& label() const;
  bool unitary() const;

  SatakeTriple satake(u64 p) const;
  std::shared_ptr<const CoefficientTable> table(u64 limit) const;

  struct State;

 private:
  explicit SatakeSource(std::shared_ptr<State> state);
  std::shared_ptr<State> state_;
};

// Local coefficient A(p^a, p^b): the Schur polynomial s_{(a+b, a, 0)}
// evaluated at the Satake triple of p, so that A(1,p) = e1 and A(p,1) = e2.
cplx schur_coefficient(const SatakeSource& src, u64 p, int a, int b);

// Same quantity from explicit elementary symmetric functions.
cplx schur_from_elementary(cplx e1, cplx e2, cplx e3, int a, int b);

cplx coefficient(const SatakeSource& src, u64 m, u64 n);

struct HeckeTerm {
  u64 r1 = 1;
  u64 r2 = 1;
  int multiplicity = 1;
  bool operator==(const HeckeTerm&) const = default;
};

// Pairs (m1*d0/d1, m2*d1/d2) over d0*d1*d2 = n with d1 | m1, d2 | m2,
// aggregated by pair and sorted. Both expansions share this index set:
//   right:  A(m1,m2) * A(n,1) = sum mult * A(r1, r2)
//   left:   A(m2,m1) * A(1,n) = sum mult * A(r2, r1)
// For unitary sources A(r2,r1) = conj A(r1,r2).
std::vector<HeckeTerm> hecke_expand_left(u64 m1, u64 m2, u64 n);
std::vector<HeckeTerm> hecke_expand_right(u64 m1, u64 m2, u64 n);

}  // namespace gl3
