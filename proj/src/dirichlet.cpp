#include "gl3/dirichlet.hpp"

#include <cmath>

#include "gl3/errors.hpp"
#include "gl3/summation.hpp"

namespace gl3 {

DirichletPolynomial::DirichletPolynomial(std::map<u64, cplx> terms, std::string description)
    : terms_(std::move(terms)), description_(std::move(description)) {
  if (terms_.count(0) != 0) throw domain_error("Dirichlet polynomial index 0");
}

void DirichletPolynomial::add(u64 n, cplx c) {
  if (n == 0) throw domain_error("Dirichlet polynomial index 0");
  terms_[n] += c;
}

cplx DirichletPolynomial::coefficient(u64 n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx DirichletPolynomial::evaluate(cplx s) const {
  CompensatedSum sum;
  for (const auto& [n, c] : terms_) {
    if (n == 1) {
      sum.add(c);
      continue;
    }
    sum.add(c * std::exp(-s * std::log(static_cast<double>(n))));
  }
  return sum.value();
}

DirichletPolynomial DirichletPolynomial::times(const DirichletPolynomial& other, u64 max_index) const {
  DirichletPolynomial out;
  for (const auto& [n, a] : terms_) {
    for (const auto& [m, b] : other.terms_) {
      if (m > max_index / n) break;
      out.terms_[n * m] += a * b;
    }
  }
  return out;
}

DirichletPolynomial DirichletPolynomial::scaled(cplx factor) const {
  DirichletPolynomial out = *this;
  for (auto& [n, c] : out.terms_) c *= factor;
  return out;
}

DirichletPolynomial DirichletPolynomial::shifted(cplx s0) const {
  DirichletPolynomial out = *this;
  for (auto& [n, c] : out.terms_)
    if (n > 1) c *= std::exp(-s0 * std::log(static_cast<double>(n)));
  return out;
}

}  // namespace gl3
