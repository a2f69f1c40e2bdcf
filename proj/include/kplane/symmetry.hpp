#pragma once

#include <utility>

#include "kplane/params.hpp"
#include "kplane/profile.hpp"

namespace kplane {

/// Nonincreasing rearrangement of |f| with respect to r^{d-1} dr.
///
/// Nodes are sorted by |f| (descending, ties by radius) and their quadrature
/// masses are laid end to end. Node i of the result receives the L^p average
/// of that stream over its own mass slot, so the result is nonincreasing and
/// its L^p norm on the grid equals that of f up to round-off.
RadialProfile rearrange(const Params& params, const RadialProfile& f);

/// f_lambda(r) = lambda^{d/p} f(lambda r), resampled on f's grid by panel
/// interpolation (zero beyond the grid).
RadialProfile dilate(const Params& params, const RadialProfile& f, double lambda);

/// Radius below which half of the L^p(r^{d-1}) mass of f lies.
double mass_median(const Params& params, const RadialProfile& f);

struct Normalized {
  double lambda = 1.0;
  RadialProfile g;
};

/// Dilation with lambda = mass_median(f), so that g has its mass median at
/// r = 1. Throws DomainError for a zero profile.
Normalized normalize_dilation(const Params& params, const RadialProfile& f);

struct Truncation {
  RadialProfile g;    // f on [0, m] where f <= m
  RadialProfile eps;  // f - g
};

/// g = f 1_{[0,m]} 1_{f <= m}, decided node by node; eps = f - g.
Truncation truncate(const Params& params, const RadialProfile& f, double m);

}  // namespace kplane
