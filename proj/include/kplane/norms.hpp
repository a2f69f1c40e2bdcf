#pragma once

#include "kplane/params.hpp"
#include "kplane/profile.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

/// (integral |f|^p r^a dr)^{1/p} by the grid rule. Requires p >= 1.
double weighted_lp_norm(const RadialProfile& f, int a, double p);

/// integral |f|^p r^a dr.
double weighted_lp_power(const RadialProfile& f, int a, double p);

/// Same for a function given in closed form, integrated adaptively on
/// (0, hi) with the given breakpoints.
double weighted_lp_norm(const RealFunction& f, int a, double p, double hi,
                        std::span<const double> breakpoints = {});

/// ||f||_p^p in L^p(r^{d-1} dr).
double input_mass(const Params& params, const RadialProfile& f);

/// integral over [R, inf) of |f|^p r^{d-1} dr.
double mass_tail(const Params& params, const RadialProfile& f, double R);

/// integral over [0, R] of |f|^p r^{d-1} dr.
double mass_within(const Params& params, const RadialProfile& f, double R);

/// integral over {|f| > m} of |f|^p r^{d-1} dr, decided node by node.
double mass_above_level(const Params& params, const RadialProfile& f, double m);

/// <f, g> with respect to r^a dr.
double weighted_inner(const RadialProfile& f, const RadialProfile& g, int a);

}  // namespace kplane
