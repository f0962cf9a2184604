#pragma once

#include <complex>
#include <map>
#include <string>

#include "gl3/arith.hpp"

namespace gl3 {

using cplx = std::complex<double>;

// Finite sum  sum_n c_n n^{-s}  with terms kept in ascending n.
class DirichletPolynomial {
 public:
  DirichletPolynomial() = default;
  explicit DirichletPolynomial(std::map<u64, cplx> terms, std::string description = {});

  void add(u64 n, cplx c);
  const std::map<u64, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  u64 max_index() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  cplx coefficient(u64 n) const;

  const std::string& description() const { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

  // Compensated sum in ascending n.
  cplx evaluate(cplx s) const;

  // Dirichlet convolution; terms whose index would exceed max_index are dropped.
  DirichletPolynomial times(const DirichletPolynomial& other, u64 max_index = ~u64{0}) const;
  DirichletPolynomial scaled(cplx factor) const;
  // sum_n c_n n^{-s0} n^{-s}: absorbs a fixed shift into the coefficients.
  DirichletPolynomial shifted(cplx s0) const;

 private:
  std::map<u64, cplx> terms_;
  std::string description_;
};

inline cplx evaluate(const DirichletPolynomial& poly, cplx s) { return poly.evaluate(s); }

}  // namespace gl3
