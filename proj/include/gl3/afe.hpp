#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "gl3/archimedean.hpp"
#include "gl3/coeffs.hpp"

namespace gl3 {

struct AfeConfig {
  int A = 6;                      // kernel cos(pi u / 4A)^{-12A}
  double eps = 1.0;               // truncation at q^{1+eps}
  double contour_abscissa = 3.0;  // default line Re u = c
  double quad_step = 0.25;        // largest trapezoid step on the line
  u64 term_budget = 20'000'000;
};

// Throws usage_error naming the offending field.
void validate(const AfeConfig& cfg);

// ceil(q(s)^{1+eps}); resource_error beyond cfg.term_budget.
u64 truncation_length(const ArchimedeanData& arch, cplx s, const AfeConfig& cfg, bool dual = false);

// V_s(n), or V'_s(n) when dual is set. The integration line is picked per n
// from Re u = c_left < 0 (adding the residue 1 at u = 0) and the integers
// 1..2A-1, whichever keeps the integrand smallest.
cplx v_weight(const ArchimedeanData& arch, cplx s, u64 n, const AfeConfig& cfg, bool dual = false);

// Same integral evaluated on the given line only. A negative abscissa must
// lie right of every Gamma pole; the residue at u = 0 is then added.
cplx v_weight_on_line(const ArchimedeanData& arch, cplx s, u64 n, const AfeConfig& cfg, bool dual,
                      double abscissa);

// V_s(e^x) tabulated on a uniform x grid for fast evaluation at many n.
class WeightTable {
 public:
  WeightTable(const ArchimedeanData& arch, cplx s, const AfeConfig& cfg, bool dual, u64 n_max);
  cplx operator()(u64 n) const;
  cplx at_log(double log_n) const;  // same as operator() with log n precomputed
  u64 n_max() const { return n_max_; }

  // Interpolation weights at log n. All tables share one grid, so a basis
  // computed once serves any number of tables.
  struct Basis {
    long cell;
    double w[6];
  };
  static Basis basis(double log_n);
  cplx at_log(double log_n, const Basis& b) const;

 private:
  struct Segment {
    long first = 0;  // grid index of values[0]
    std::vector<cplx> values;
  };
  static cplx interpolate(const Segment& seg, double x, const Basis& b);

  u64 n_max_;
  double pivot_;  // x below the pivot uses the left line
  bool has_left_;
  Segment left_, right_;
};

// The two-sum approximation of L(s) (dual = false) or of L for the
// contragredient (dual = true). Sums run to truncation_length unless
// truncation > 0 is given, in which case both sums stop at that index.
cplx truncated_l(const SatakeSource& src, const ArchimedeanData& arch, cplx s, const AfeConfig& cfg,
                 bool dual = false, u64 truncation = 0);

}  // namespace gl3
