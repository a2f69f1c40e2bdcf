#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kplane {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes ascending. Newton iteration on P_n.
GaussRule gauss_legendre(int n);

using RealFunction = std::function<double(double)>;

/// Integral of fn over [lo, hi] (hi may be +infinity), split at the given
/// breakpoints. Finite pieces use tanh-sinh, the infinite piece exp-sinh, so
/// integrable endpoint singularities and kinks at breakpoints are handled.
double integrate_function(const RealFunction& fn, double lo, double hi,
                          std::span<const double> breakpoints = {});

}  // namespace kplane
