#include "kplane/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kplane/errors.hpp"
#include "kplane/parallel.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

namespace {

constexpr int kNearPanels = 4;
constexpr int kPieceOrder = 16;
constexpr double kHalfPi = std::numbers::pi / 2;

double int_power(double x, int m) {
  double result = 1.0;
  for (int i = 0; i < m; ++i) result *= x;
  return result;
}

// x^{m/2} for x > 0 and integer m >= -1.
double half_power(double x, int m) {
  if (m % 2 == 0) return int_power(x, m / 2);
  if (m == -1) return 1.0 / std::sqrt(x);
  return std::sqrt(x) * int_power(x, (m - 1) / 2);
}

// (u^2 - r^2)^{k/2 - 1} u for u > r.
double kernel(int k, double u, double r) {
  return half_power((u - r) * (u + r), k - 2) * u;
}

// Integrates against the panel interpolant and scatters the weights into a row.
class RowBuilder {
 public:
  RowBuilder(const RadialGrid& grid, int k, Eigen::RowVectorXd& row)
      : grid_(grid), k_(k), row_(row), rule_(gauss_legendre(kPieceOrder)), basis_(grid.order()) {}

  // Weight factor making the last panel of a half-line grid interpolate f / cos^{k+1}.
  double damping(int panel, double theta) const {
    if (!grid_.unbounded() || panel + 1 != static_cast<int>(grid_.panels().size())) return 1.0;
    return int_power(std::cos(theta), k_ + 1);
  }

  // Adds the quadrature weight w attached to the point theta of the panel.
  void scatter(int panel, double theta, double w) {
    grid_.basis(panel, theta, basis_);
    const int first = grid_.panels()[panel].first;
    const double damp = damping(panel, theta);
    for (int j = 0; j < grid_.order(); ++j) {
      const double ratio = damp == 1.0 ? 1.0 : damp / damping(panel, grid_.theta_nodes()[first + j]);
      row_(first + j) += w * basis_[j] * ratio;
    }
  }

  // s-form over theta in [a, b] within one panel: integrand f(u) s^{k-1} ds.
  void s_piece(int panel, double r, double a, double b) {
    const double ua = std::tan(a);
    const double ub = std::tan(b);
    const double sa = std::sqrt(std::max((ua - r) * (ua + r), 0.0));
    const double sb = std::sqrt(std::max((ub - r) * (ub + r), 0.0));
    const double mid = 0.5 * (sa + sb);
    const double half = 0.5 * (sb - sa);
    for (int q = 0; q < kPieceOrder; ++q) {
      const double s = mid + half * rule_.nodes[q];
      const double theta = std::atan(std::hypot(r, s));
      scatter(panel, theta, half * rule_.weights[q] * int_power(s, k_ - 1));
    }
  }

  // theta-form over [a, b] within one panel: integrand f(u) K(u, r) sec^2(theta) dtheta.
  void theta_piece(int panel, double r, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int q = 0; q < kPieceOrder; ++q) {
      const double theta = mid + half * rule_.nodes[q];
      const double c = std::cos(theta);
      scatter(panel, theta, half * rule_.weights[q] * kernel(k_, std::tan(theta), r) / (c * c));
    }
  }

  template <typename Piece>
  void split_by_panels(int first_panel, int end_panel, double a, double b, Piece piece) {
    for (int p = first_panel; p < end_panel; ++p) {
      const double lo = std::max(a, grid_.panels()[p].theta_lo);
      const double hi = std::min(b, grid_.panels()[p].theta_hi);
      if (hi > lo) piece(p, lo, hi);
    }
  }

 private:
  const RadialGrid& grid_;
  int k_;
  Eigen::RowVectorXd& row_;
  GaussRule rule_;
  std::vector<double> basis_;
};

void assemble_row(const RadialGrid& grid, int k, std::size_t i, Eigen::RowVectorXd& row) {
  const double r = grid.nodes()[i];
  const double theta_r = grid.theta_nodes()[i];
  const auto& panels = grid.panels();
  const int n_panels = static_cast<int>(panels.size());
  const int pc = grid.panel_of(theta_r);
  const int near_end = std::min(pc + kNearPanels, n_panels);
  const double theta_near = panels[near_end - 1].theta_hi;

  RowBuilder builder(grid, k, row);

  // atan(2r) - atan(r), written to avoid cancellation.
  const double delta0 = std::atan(r / (1.0 + 2.0 * r * r));
  const double s_end = std::min(theta_r + delta0, theta_near);
  builder.split_by_panels(pc, near_end, theta_r, s_end,
                          [&](int p, double a, double b) { builder.s_piece(p, r, a, b); });

  for (double step = delta0; theta_r + step < theta_near; step *= 2.0) {
    const double a = theta_r + step;
    const double b = std::min(theta_r + 2.0 * step, theta_near);
    builder.split_by_panels(pc, near_end, a, b,
                            [&](int p, double lo, double hi) { builder.theta_piece(p, r, lo, hi); });
  }

  if (near_end < n_panels) {
    const std::size_t far = static_cast<std::size_t>(panels[near_end].first);
    for (std::size_t j = far; j < grid.size(); ++j) {
      row(static_cast<Eigen::Index>(j)) += grid.base_weights()[j] * kernel(k, grid.nodes()[j], r);
    }
  }
}

std::vector<double> weighted_measure(const RadialGrid& grid, int a) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w[i] = grid.base_weights()[i] * std::pow(grid.nodes()[i], a);
  }
  return w;
}

}  // namespace

TransformOperator::TransformOperator(const Params& params, GridPtr grid)
    : params_(params), grid_(std::move(grid)) {
  const auto n = static_cast<Eigen::Index>(grid_->size());
  matrix_ = Eigen::MatrixXd::Zero(n, n);
  parallel_for(grid_->size(), [this](std::size_t i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(matrix_.cols());
    assemble_row(*grid_, params_.k, i, row);
    matrix_.row(static_cast<Eigen::Index>(i)) = row;
  });
}

RadialProfile TransformOperator::apply(const RadialProfile& f) const {
  if (f.grid() != grid_) throw DataError("profile lives on a different grid than the operator");
  const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::VectorXd y = matrix_ * x;
  return RadialProfile(grid_, std::vector<double>(y.data(), y.data() + y.size()));
}

RadialProfile TransformOperator::apply_transpose(const RadialProfile& g) const {
  if (g.grid() != grid_) throw DataError("profile lives on a different grid than the operator");
  const auto out_w = weighted_measure(*grid_, params_.output_weight());
  const auto in_w = weighted_measure(*grid_, params_.input_weight());
  Eigen::VectorXd weighted(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) weighted(static_cast<Eigen::Index>(i)) = out_w[i] * g[i];
  const Eigen::VectorXd y = matrix_.transpose() * weighted;
  std::vector<double> values(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) values[j] = y(static_cast<Eigen::Index>(j)) / in_w[j];
  return RadialProfile(grid_, std::move(values));
}

RadialProfile apply_T(const Params& params, const RadialProfile& f) {
  return TransformOperator(params, f.grid()).apply(f);
}

TransformResult apply_T_with_diagnostics(const Params& params, const RadialProfile& f) {
  TransformResult result{apply_T(params, f)};
  const std::size_t n = f.size();
  const double f_last = std::abs(f[n - 1]);
  const double r_last = f.radius(n - 1);
  const int k = params.k;
  if (f_last == 0.0) return result;

  if (!f.grid()->unbounded()) {
    // Power-law continuation f_last (r_last / u)^{k+1} beyond the grid.
    result.tail_estimate = f_last * std::pow(r_last, k);
  } else {
    // The rule covers the whole half-line; flag inputs whose decay is too slow
    // for the integral to converge, judged from the last two samples.
    const double f_prev = std::abs(f[n - 2]);
    const double alpha = f_prev > 0.0 ? std::log(f_prev / f_last) / std::log(r_last / f.radius(n - 2)) : 0.0;
    if (alpha <= k) {
      result.tail_estimate = std::numeric_limits<double>::infinity();
    } else if (alpha < k + 0.5) {
      result.tail_estimate = f_last * std::pow(r_last, k) / (alpha - k);
    }
  }
  result.tail_warning = result.tail_estimate > 1e-6 * result.values.max_abs();
  return result;
}

double indicator_transform(const Params& params, const IntervalSet& set, double r) {
  const int k = params.k;
  double total = 0.0;
  for (const auto& iv : set.intervals()) {
    if (iv.b <= r) continue;
    const double lo = std::max(iv.a, r);
    const double upper = half_power((iv.b - r) * (iv.b + r), k);
    const double lower = lo > r ? half_power((lo - r) * (lo + r), k) : 0.0;
    total += (upper - lower) / k;
  }
  return total;
}

RadialProfile apply_T_indicator(const Params& params, const IntervalSet& set, GridPtr grid) {
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = indicator_transform(params, set, grid->nodes()[i]);
  return RadialProfile(std::move(grid), std::move(values));
}

RadialProfile apply_T_adjoint(const Params& params, const RadialProfile& g) {
  const RadialGrid& grid = *g.grid();
  const int k = params.k;
  const int d = params.d;
  const GaussRule rule = gauss_legendre(grid.order() + 8);
  std::vector<double> edges;
  for (const auto& p : grid.panels()) edges.push_back(std::tan(p.theta_hi));

  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double u = grid.nodes()[i];
    std::vector<double> cuts{0.0};
    for (double e : edges) {
      if (e >= u) break;
      cuts.push_back(std::asin(e / u));
    }
    cuts.push_back(kHalfPi);
    // The interpolant varies on the scale of the distance to phi = 0, so
    // pieces are kept no longer than their left end.
    std::vector<double> graded{0.0};
    for (std::size_t c = 1; c < cuts.size(); ++c) {
      for (double x = 2.0 * graded.back(); graded.back() > 0.0 && x < cuts[c]; x *= 2.0) graded.push_back(x);
      graded.push_back(cuts[c]);
    }
    cuts.swap(graded);
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
      const double half = 0.5 * (cuts[c + 1] - cuts[c]);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double phi = mid + half * rule.nodes[q];
        const double weight = int_power(std::cos(phi), k - 1) * int_power(std::sin(phi), d - k - 1);
        total += half * rule.weights[q] * weight * grid.interpolate(g.span(), u * std::sin(phi));
      }
    }
    out[i] = total;
  });
  return RadialProfile(g.grid(), std::move(out));
}

double adjoint_at(const Params& params, const RealFunction& g, double u, std::span<const double> jumps) {
  const int k = params.k;
  const int d = params.d;
  std::vector<double> cuts;
  for (double j : jumps) {
    if (j > 0.0 && j < u) cuts.push_back(std::asin(j / u));
  }
  std::sort(cuts.begin(), cuts.end());
  return integrate_function(
      [&](double phi) {
        return g(u * std::sin(phi)) * int_power(std::cos(phi), k - 1) * int_power(std::sin(phi), d - k - 1);
      },
      0.0, kHalfPi, cuts);
}

OperatorMatrix discretize_T_R(const Params& params, double R, int n) {
  if (!(R > 0.0) || std::isinf(R)) throw ParameterError("truncation radius must be positive and finite");
  GridPtr grid = make_grid(n, R);
  TransformOperator op(params, grid);
  return OperatorMatrix{op.matrix(), R, grid};
}

std::vector<double> singular_value_profile(const Params& params, const OperatorMatrix& m) {
  const RadialGrid& grid = *m.grid;
  const auto out_w = weighted_measure(grid, params.output_weight());
  const auto in_w = weighted_measure(grid, params.input_weight());
  Eigen::MatrixXd scaled = m.entries;
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
      scaled(i, j) *= std::sqrt(out_w[i] / in_w[j]);
    }
  }
  if (!scaled.allFinite()) throw NumericalError("operator matrix has non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled);
  if (svd.info() != Eigen::Success) throw NumericalError("singular value decomposition did not converge");
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double equicontinuity_integral(const Params& params, double R, double h, double r) {
  const int k = params.k;
  if (h <= 0.0 || r >= R) return 0.0;
  const double rh = r + h;
  const double mid = std::min(rh, R);
  // Both pieces start at a root of a kernel; u = start + t^2 removes the
  // inverse square root there for k = 1.
  const auto near = [&](double t) {
    const double u = r + t * t;
    return 2.0 * int_power(t, k - 1) * half_power(2.0 * r + t * t, k - 2) * u;
  };
  const auto far = [&](double t) {
    const double u = rh + t * t;
    const double shifted = int_power(t, k - 1) * half_power(2.0 * rh + t * t, k - 2);
    const double base = t * half_power((h + t * t) * (u + r), k - 2);
    return 2.0 * std::abs(shifted - base) * u;
  };
  double total = r > 0.0 ? integrate_function(near, 0.0, std::sqrt(mid - r))
                         : integrate_function([k](double u) { return int_power(u, k - 1); }, 0.0, mid);
  if (mid < R) total += integrate_function(far, 0.0, std::sqrt(R - rh));
  return total;
}

double equicontinuity_modulus(const Params& params, double R, double h) {
  if (h <= 0.0) return 0.0;
  if (!(h < R)) throw ParameterError("step must lie in (0, R)");
  constexpr int kSamples = 257;
  double best = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double r = (R - h) * i / (kSamples - 1);
    best = std::max(best, equicontinuity_integral(params, R, h, r));
  }
  return best;
}

}  // namespace kplane
