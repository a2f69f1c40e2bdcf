#include "kplane/params.hpp"

#include <string>

#include "kplane/errors.hpp"

namespace kplane {

Params make_params(int k, int d) {
  if (d < 2) throw ParameterError("d >= 2 violated (d = " + std::to_string(d) + ")");
  if (k < 1) throw ParameterError("k >= 1 violated (k = " + std::to_string(k) + ")");
  if (k > d - 1) {
    throw ParameterError("k <= d-1 violated (k = " + std::to_string(k) + ", d = " + std::to_string(d) + ")");
  }
  Params out;
  out.k = k;
  out.d = d;
  out.p = Rational(d + 1, k + 1);
  out.q = Rational(d + 1);
  out.p_conj = out.p / (out.p - Rational(1));
  out.scale_exp = Rational(d) / out.p;
  return out;
}

}  // namespace kplane
