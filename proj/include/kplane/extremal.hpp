#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kplane/params.hpp"
#include "kplane/profile.hpp"
#include "kplane/transform.hpp"

namespace kplane {

/// h_lambda(r) = lambda^{d/p} (1 + (lambda r)^2)^{-(k+1)/2}.
RadialProfile extremizer_profile(const Params& params, double lambda, GridPtr grid);

/// Surface measure of the unit sphere in R^i, 2 pi^{i/2} / Gamma(i/2).
double sphere_area(int i);

/// A(k,d) = [2^{k-d} |S^k|^d / |S^d|^k]^{1/(d+1)}.
double constant_A(const Params& params);

/// Phi(f) = ||Tf||_{L^q(r^{d-k-1})} / ||f||_{L^p(r^{d-1})}. DomainError if ||f||_p = 0.
double functional_ratio(const Params& params, const RadialProfile& f);
double functional_ratio(const TransformOperator& op, const RadialProfile& f);

struct ConstantEstimate {
  double value = 0.0;
  /// |Phi_n(h) - Phi_{n/2}(h)|, the change under halving the resolution.
  double est_error = 0.0;
};

/// B(k,d) = Phi(h) on a half-line grid of the given resolution.
ConstantEstimate constant_B(const Params& params, int resolution);

struct SearchOptions {
  int max_iter = 500;
  double tol = 1e-8;
  /// Number of consecutive iterations whose relative change must stay below tol.
  int stagnation_window = 5;
  /// Allowed relative decrease of Phi per step before damping kicks in.
  double ascent_slack = 1e-9;
};

struct SearchTrace {
  std::vector<double> iterates;  // Phi after each iteration, starting with the initial profile
  RadialProfile final_profile;
  bool converged = false;
  int iterations_used = 0;
  int damped_steps = 0;
  int recentered_steps = 0;
};

/// Nonlinear power iteration f <- normalize([T^t (Tf)^{q-1}]^{1/(p-1)}) with
/// the discrete transpose, which is the Euler-Lagrange map of the discretized
/// ratio. Iterates are kept at unit L^p norm; when the mass median leaves
/// [1/2, 2] the iterate is re-centered by normalize_dilation.
/// Throws DomainError for inputs with negative values or zero norm, and
/// IterationAnomaly when Phi decreases even after damping.
SearchTrace search_extremizer(const Params& params, const RadialProfile& init, const SearchOptions& options = {});

/// Random positive profile decaying at least like the extremizer: a sum of
/// one to three terms c (1 + a r^2)^{-beta} with beta in (k+1)/2 + {0, 1/2, 1}
/// and, with probability 1/2, a Gaussian bump.
RadialProfile random_decaying_profile(const Params& params, GridPtr grid, std::mt19937_64& rng);

}  // namespace kplane
