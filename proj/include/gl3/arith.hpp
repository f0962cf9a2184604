#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gl3 {

using u64 = std::uint64_t;

struct Factorization {
  u64 n = 1;
  std::vector<std::pair<u64, int>> factors;  // strictly increasing primes
};

// How omega_below counts repeated prime factors.
enum class OmegaMode { with_multiplicity, distinct };

struct SmoothnessParams {
  double X = 2.0;
  double omega_cap = 1.0;
  OmegaMode mode = OmegaMode::with_multiplicity;
};

// Upper bound accepted by sieve_primes before a resource_error is raised.
u64 sieve_limit_budget();
void set_sieve_limit_budget(u64 limit);

// Factorizations below this bound use the smallest-prime-factor table.
constexpr u64 kSpfLimit = 10'000'000;

std::vector<u64> sieve_primes(u64 limit);
Factorization factorize(u64 n);
int mobius(u64 n);
u64 d3(u64 n);
u64 largest_prime_factor(u64 n);
int omega_below(u64 n, double X, OmegaMode mode = OmegaMode::with_multiplicity);
int i_star(u64 n, const SmoothnessParams& sp);

// True iff every prime factor of n is < X. n = 1 is smooth for every X.
bool is_smooth(u64 n, double X);
bool is_squarefree(u64 n);
u64 gcd(u64 a, u64 b);

// Smallest prime factor of n for 2 <= n < kSpfLimit (table lookup).
u64 smallest_prime_factor(u64 n);

// Primes p < X, ascending.
std::vector<u64> primes_below(double X);

// Squarefree integers <= bound whose prime factors are all < X, ascending.
std::vector<u64> squarefree_smooth(double X, u64 bound);

}  // namespace gl3
