#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kplane/interval_set.hpp"
#include "kplane/params.hpp"
#include "kplane/profile.hpp"

namespace kplane {

/// Dense discretization of Tf(r) = integral_0^inf f(sqrt(r^2+s^2)) s^{k-1} ds
/// on a RadialGrid: (Tf)(r_i) ~ sum_j M(i, j) f(r_j).
///
/// Row i integrates in u = sqrt(r_i^2 + s^2) over u >= r_i. Panels close to
/// r_i use the panel interpolant of f: the first stretch u in [r, 2r] in the
/// s variable, where the integrand is smooth for every k, then pieces that
/// grow geometrically in theta away from the kernel singularity. Far panels
/// are plain Nystrom sums. On a half-line grid the last panel interpolates
/// f / cos^{k+1}(theta), which is smooth for profiles decaying like r^{-(k+1)}.
class TransformOperator {
 public:
  TransformOperator(const Params& params, GridPtr grid);

  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Tf on the grid; f must live on the same grid.
  [[nodiscard]] RadialProfile apply(const RadialProfile& f) const;

  /// Transpose with respect to the discrete pairings sum w_i r_i^{d-k-1} and
  /// sum w_j r_j^{d-1}, so that <Tf, g> = <f, T^t g> holds exactly on the grid.
  [[nodiscard]] RadialProfile apply_transpose(const RadialProfile& g) const;

 private:
  Params params_;
  GridPtr grid_;
  Eigen::MatrixXd matrix_;
};

struct TransformResult {
  RadialProfile values;
  /// Estimated size of the part of Tf the grid does not resolve.
  double tail_estimate = 0.0;
  /// Set when tail_estimate exceeds 1e-6 of max |Tf|.
  bool tail_warning = false;
};

/// Tf sampled on f's grid.
RadialProfile apply_T(const Params& params, const RadialProfile& f);
TransformResult apply_T_with_diagnostics(const Params& params, const RadialProfile& f);

/// T 1_F(r) in closed form: on [a, b] the transform is
/// ((b^2 - r^2)^{k/2} - (max(a, r)^2 - r^2)^{k/2}) / k.
double indicator_transform(const Params& params, const IntervalSet& set, double r);
RadialProfile apply_T_indicator(const Params& params, const IntervalSet& set, GridPtr grid);

/// Adjoint T*g(u) = u^{2-d} integral_0^u g(r) (u^2-r^2)^{k/2-1} r^{d-k-1} dr,
/// evaluated as integral_0^{pi/2} g(u sin phi) cos^{k-1} phi sin^{d-k-1} phi dphi.
RadialProfile apply_T_adjoint(const Params& params, const RadialProfile& g);
/// Same for g in closed form; g may jump at the given radii.
double adjoint_at(const Params& params, const RealFunction& g, double u,
                  std::span<const double> jumps = {});

/// T restricted to inputs supported in [0, R].
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  double R = 0.0;
  GridPtr grid;
};

OperatorMatrix discretize_T_R(const Params& params, double R, int n);

/// Singular values (descending) of W^{1/2} M V^{-1/2}, with W, V the output and
/// input quadrature weights, approximating the singular values of T_R from
/// L^2(r^{d-1} dr) to L^2(r^{d-k-1} dr).
std::vector<double> singular_value_profile(const Params& params, const OperatorMatrix& m);

/// I(h, r) = integral_0^R |1_{u>=r+h}(u^2-(r+h)^2)^{k/2-1} - 1_{u>=r}(u^2-r^2)^{k/2-1}| u du.
double equicontinuity_integral(const Params& params, double R, double h, double r);
/// sup of I(h, r) over 257 equally spaced r in [0, R-h].
double equicontinuity_modulus(const Params& params, double R, double h);

}  // namespace kplane
