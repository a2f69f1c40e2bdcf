#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace kplane {

/// One Gauss-Legendre panel of the grid in the angle variable theta = atan(r).
struct GridPanel {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int first = 0;  // index of the panel's first node
};

/// Quadrature grid on the half-line built from the substitution r = tan(theta).
///
/// (0, theta_max) is cut into equal panels, each carrying an `order`-point
/// Gauss-Legendre rule, so a smooth integrand in theta is integrated to
/// spectral accuracy. With theta_max = pi/2 the grid covers all of (0, inf);
/// the extremizer (1+r^2)^{-(k+1)/2} and its transform are then polynomials
/// in sin/cos and every weighted norm of them is resolved to round-off.
class RadialGrid {
 public:
  RadialGrid(std::vector<GridPanel> panels, int order, double theta_max);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& theta_nodes() const { return theta_nodes_; }
  /// Weights of the rule for the integral of g(r) dr over (0, r_max).
  [[nodiscard]] const std::vector<double>& base_weights() const { return base_weights_; }
  [[nodiscard]] const std::vector<GridPanel>& panels() const { return panels_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] double theta_max() const { return theta_max_; }
  /// Truncation radius; +infinity for a full half-line grid.
  [[nodiscard]] double r_max() const { return r_max_; }
  [[nodiscard]] bool unbounded() const { return std::isinf(r_max_); }

  /// Index of the panel containing the angle theta (clamped to the valid range).
  [[nodiscard]] int panel_of(double theta) const;

  /// Lagrange basis of the panel evaluated at theta (out.size() == order()).
  void basis(int panel, double theta, std::span<double> out) const;

  /// Weights w_i with sum_i w_i g(r_i) ~ integral of g over [lo, hi].
  /// Panels cut by lo or hi are integrated by exact integration of the
  /// interpolating polynomial of the theta-integrand g(tan t) sec^2 t.
  [[nodiscard]] std::vector<double> range_weights(double lo, double hi) const;

  /// Quadrature of samples over the whole grid.
  [[nodiscard]] double integrate(std::span<const double> samples) const;
  /// Quadrature of samples over [lo, hi].
  [[nodiscard]] double integrate(std::span<const double> samples, double lo, double hi) const;

  /// Integral of the interpolant of samples (in r) over the angle range
  /// [theta_a, theta_b] inside one panel.
  [[nodiscard]] double integrate_panel(std::span<const double> samples, int panel, double theta_a,
                                       double theta_b) const;

  /// Panel interpolation of samples at radius r; 0 beyond r_max.
  [[nodiscard]] double interpolate(std::span<const double> samples, double r) const;

  /// Cell [a, b] in r owned by node i: the panel is split at cumulative
  /// Gauss weights, so cells tile (0, r_max) and cell i has theta-length w_i.
  [[nodiscard]] std::pair<double, double> cell(std::size_t i) const;

 private:
  // Integral over [a, b] (inside panel) of each Lagrange basis polynomial.
  void basis_integrals(int panel, double a, double b, std::span<double> out) const;

  std::vector<GridPanel> panels_;
  int order_;
  double theta_max_;
  double r_max_;
  std::vector<double> nodes_;
  std::vector<double> theta_nodes_;
  std::vector<double> base_weights_;
  std::vector<double> theta_weights_;
  std::vector<double> bary_;  // barycentric weights of the reference nodes
  std::vector<double> cell_edges_;  // theta edges, size() + panels
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// x -> integral over [0, x] of a sampled integrand, O(order) per query after
/// an O(n) setup.
class CumulativeIntegral {
 public:
  CumulativeIntegral(GridPtr grid, std::vector<double> samples);
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double total() const { return prefix_.back(); }

 private:
  GridPtr grid_;
  std::vector<double> samples_;
  std::vector<double> prefix_;  // integral up to the start of each panel, plus the total
};

/// Grid with n_points nodes on (0, r_max_hint]; r_max_hint = +infinity (or
/// any non-positive value) gives the full half-line. Panel order is the
/// largest of {8, 4, 2, 1} dividing n_points. Each breakpoint that falls
/// strictly inside a panel splits it in two, adding `order` nodes, so
/// piecewise-smooth profiles with jumps there are integrated exactly.
/// Throws ConfigError for n_points < 16.
GridPtr make_grid(int n_points, double r_max_hint, std::span<const double> breakpoints = {});

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

}  // namespace kplane
