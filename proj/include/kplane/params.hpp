#pragma once

#include "kplane/rational.hpp"

namespace kplane {

/// Plane dimension k, ambient dimension d and the exponents of the
/// L^p(r^{d-1}dr) -> L^q(r^{d-k-1}dr) inequality, kept as exact rationals.
struct Params {
  int k = 1;
  int d = 2;
  Rational p;          // (d+1)/(k+1)
  Rational q;          // d+1
  Rational p_conj;     // p/(p-1)
  Rational scale_exp;  // d/p, the dilation exponent

  [[nodiscard]] double pd() const { return p.to_double(); }
  [[nodiscard]] double qd() const { return q.to_double(); }
  [[nodiscard]] int q_int() const { return d + 1; }
  /// Power of r in the input measure, d-1.
  [[nodiscard]] int input_weight() const { return d - 1; }
  /// Power of r in the output measure, d-k-1.
  [[nodiscard]] int output_weight() const { return d - k - 1; }
};

/// Throws ParameterError naming the violated constraint unless 2 <= d and 1 <= k <= d-1.
Params make_params(int k, int d);

}  // namespace kplane
