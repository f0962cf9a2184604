#include "gl3/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "gl3/errors.hpp"

namespace gl3 {

namespace {

std::atomic<u64> g_sieve_budget{u64{1} << 32};

u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Smallest-prime-factor table on [0, kSpfLimit), built on first use.
class SpfTable {
 public:
  SpfTable() : spf_(kSpfLimit, 0) {
    for (u64 i = 2; i < kSpfLimit; ++i) {
      if (spf_[i] != 0) continue;
      spf_[i] = static_cast<std::uint32_t>(i);
      if (i * i >= kSpfLimit) continue;
      for (u64 j = i * i; j < kSpfLimit; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
  u64 operator[](u64 n) const { return spf_[n]; }

 private:
  std::vector<std::uint32_t> spf_;
};

const SpfTable& spf_table() {
  static const SpfTable table;
  return table;
}

}  // namespace

u64 sieve_limit_budget() { return g_sieve_budget.load(); }
void set_sieve_limit_budget(u64 limit) { g_sieve_budget.store(limit); }

std::vector<u64> sieve_primes(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  if (limit > sieve_limit_budget())
    throw resource_error("sieve limit " + std::to_string(limit) +
                         " exceeds budget " + std::to_string(sieve_limit_budget()));
  primes.push_back(2);
  if (limit < 3) return primes;

  // Base primes up to sqrt(limit), odd only.
  const u64 root = isqrt(limit);
  std::vector<char> small(root + 1, 1);
  std::vector<u64> base;
  for (u64 i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += 2 * i) small[j] = 0;
  }

  // Segments over odd numbers; bit k of a segment stands for lo + 2k.
  constexpr u64 kSegmentBits = u64{1} << 18;
  std::vector<std::uint64_t> bits(kSegmentBits / 64);
  std::vector<u64> next(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) next[i] = base[i] * base[i];

  for (u64 lo = 3; lo <= limit; lo += 2 * kSegmentBits) {
    const u64 hi = std::min(limit, lo + 2 * kSegmentBits - 1);
    const u64 count = (hi - lo) / 2 + 1;
    std::fill(bits.begin(), bits.end(), ~std::uint64_t{0});
    for (std::size_t i = 0; i < base.size(); ++i) {
      const u64 p = base[i];
      u64 j = next[i];
      if (j > hi) continue;
      for (; j <= hi; j += 2 * p) {
        const u64 k = (j - lo) / 2;
        bits[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
      }
      next[i] = j;
    }
    for (u64 k = 0; k < count; ++k)
      if (bits[k >> 6] >> (k & 63) & 1) primes.push_back(lo + 2 * k);
  }
  return primes;
}

u64 smallest_prime_factor(u64 n) {
  if (n < 2 || n >= kSpfLimit) throw domain_error("smallest_prime_factor: n out of table range");
  return spf_table()[n];
}

Factorization factorize(u64 n) {
  if (n == 0) throw domain_error("factorize: n = 0");
  Factorization f;
  f.n = n;
  auto push = [&](u64 p) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(p, 1);
  };
  u64 m = n;
  if (m >= kSpfLimit) {
    for (u64 p : {u64{2}, u64{3}}) {
      while (m % p == 0) {
        push(p);
        m /= p;
      }
    }
    for (u64 p = 5; p * p <= m && m >= kSpfLimit; p += 6) {
      for (u64 q : {p, p + 2}) {
        while (m % q == 0) {
          push(q);
          m /= q;
        }
      }
    }
    if (m >= kSpfLimit) {
      push(m);
      return f;
    }
  }
  const auto& spf = spf_table();
  while (m > 1) {
    const u64 p = spf[m];
    push(p);
    m /= p;
  }
  return f;
}

int mobius(u64 n) {
  const auto f = factorize(n);
  for (const auto& [p, e] : f.factors)
    if (e > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

u64 d3(u64 n) {
  u64 r = 1;
  for (const auto& [p, e] : factorize(n).factors) r *= static_cast<u64>((e + 1) * (e + 2) / 2);
  return r;
}

u64 largest_prime_factor(u64 n) {
  if (n < 2) throw domain_error("largest_prime_factor: n < 2 (use is_smooth for n = 1)");
  return factorize(n).factors.back().first;
}

int omega_below(u64 n, double X, OmegaMode mode) {
  int count = 0;
  for (const auto& [p, e] : factorize(n).factors) {
    if (static_cast<double>(p) >= X) continue;
    count += mode == OmegaMode::with_multiplicity ? e : 1;
  }
  return count;
}

int i_star(u64 n, const SmoothnessParams& sp) {
  return static_cast<double>(omega_below(n, sp.X, sp.mode)) < sp.omega_cap ? 1 : 0;
}

bool is_smooth(u64 n, double X) {
  if (n == 1) return true;
  return static_cast<double>(largest_prime_factor(n)) < X;
}

bool is_squarefree(u64 n) { return mobius(n) != 0; }

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<u64> primes_below(double X) {
  if (X <= 2.0) return {};
  const auto limit = static_cast<u64>(std::ceil(X)) - 1;
  auto primes = sieve_primes(limit);
  while (!primes.empty() && static_cast<double>(primes.back()) >= X) primes.pop_back();
  return primes;
}

std::vector<u64> squarefree_smooth(double X, u64 bound) {
  std::vector<u64> out;
  if (bound == 0) return out;
  const auto primes = primes_below(X);
  out.push_back(1);
  for (u64 p : primes) {
    const std::size_t existing = out.size();
    for (std::size_t i = 0; i < existing; ++i)
      if (out[i] <= bound / p) out.push_back(out[i] * p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gl3
