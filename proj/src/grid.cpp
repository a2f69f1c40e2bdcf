#include "kplane/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kplane/errors.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

namespace {

double sec2(double theta) {
  const double c = std::cos(theta);
  return 1.0 / (c * c);
}

}  // namespace

RadialGrid::RadialGrid(std::vector<GridPanel> panels, int order, double theta_max)
    : panels_(std::move(panels)), order_(order), theta_max_(theta_max) {
  r_max_ = theta_max_ >= std::numbers::pi / 2 ? kUnbounded : std::tan(theta_max_);
  const GaussRule ref = gauss_legendre(order_);

  bary_.assign(order_, 1.0);
  for (int j = 0; j < order_; ++j) {
    for (int m = 0; m < order_; ++m) {
      if (m != j) bary_[j] /= (ref.nodes[j] - ref.nodes[m]);
    }
  }

  const std::size_t n = panels_.size() * static_cast<std::size_t>(order_);
  nodes_.reserve(n);
  theta_nodes_.reserve(n);
  base_weights_.reserve(n);
  theta_weights_.reserve(n);
  int index = 0;
  for (auto& panel : panels_) {
    panel.first = index;
    const double mid = 0.5 * (panel.theta_lo + panel.theta_hi);
    const double half = 0.5 * (panel.theta_hi - panel.theta_lo);
    double edge = panel.theta_lo;
    cell_edges_.push_back(edge);
    for (int j = 0; j < order_; ++j) {
      const double t = mid + half * ref.nodes[j];
      const double w = half * ref.weights[j];
      theta_nodes_.push_back(t);
      nodes_.push_back(std::tan(t));
      theta_weights_.push_back(w);
      base_weights_.push_back(w * sec2(t));
      edge += w;
      cell_edges_.push_back(j + 1 == order_ ? panel.theta_hi : edge);
      ++index;
    }
  }
}

int RadialGrid::panel_of(double theta) const {
  auto it = std::lower_bound(panels_.begin(), panels_.end(), theta,
                             [](const GridPanel& p, double t) { return p.theta_hi < t; });
  if (it == panels_.end()) return static_cast<int>(panels_.size()) - 1;
  return static_cast<int>(it - panels_.begin());
}

void RadialGrid::basis(int panel, double theta, std::span<double> out) const {
  const GridPanel& p = panels_[panel];
  const double mid = 0.5 * (p.theta_lo + p.theta_hi);
  const double half = 0.5 * (p.theta_hi - p.theta_lo);
  const double x = (theta - mid) / half;
  double denom = 0.0;
  for (int j = 0; j < order_; ++j) {
    const double xj = (theta_nodes_[p.first + j] - mid) / half;
    const double diff = x - xj;
    if (diff == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      out[j] = 1.0;
      return;
    }
    out[j] = bary_[j] / diff;
    denom += out[j];
  }
  for (int j = 0; j < order_; ++j) out[j] /= denom;
}

void RadialGrid::basis_integrals(int panel, double a, double b, std::span<double> out) const {
  static thread_local std::vector<double> scratch;
  scratch.resize(order_);
  std::fill(out.begin(), out.end(), 0.0);
  const GaussRule rule = gauss_legendre(order_);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int g = 0; g < order_; ++g) {
    basis(panel, mid + half * rule.nodes[g], scratch);
    for (int j = 0; j < order_; ++j) out[j] += half * rule.weights[g] * scratch[j];
  }
}

std::vector<double> RadialGrid::range_weights(double lo, double hi) const {
  std::vector<double> w(size(), 0.0);
  lo = std::max(lo, 0.0);
  hi = std::min(hi, r_max_);
  if (!(hi > lo)) return w;
  const double ta = std::atan(lo);
  const double tb = std::isinf(hi) ? std::numbers::pi / 2 : std::atan(hi);
  std::vector<double> integrals(order_);
  for (int pi = 0; pi < static_cast<int>(panels_.size()); ++pi) {
    const GridPanel& p = panels_[pi];
    const double a = std::max(ta, p.theta_lo);
    const double b = std::min(tb, p.theta_hi);
    if (!(b > a)) continue;
    if (a <= p.theta_lo && b >= p.theta_hi) {
      for (int j = 0; j < order_; ++j) w[p.first + j] = base_weights_[p.first + j];
      continue;
    }
    basis_integrals(pi, a, b, integrals);
    for (int j = 0; j < order_; ++j) {
      w[p.first + j] = integrals[j] * sec2(theta_nodes_[p.first + j]);
    }
  }
  return w;
}

double RadialGrid::integrate(std::span<const double> samples) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += base_weights_[i] * samples[i];
  return s;
}

double RadialGrid::integrate(std::span<const double> samples, double lo, double hi) const {
  const std::vector<double> w = range_weights(lo, hi);
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += w[i] * samples[i];
  return s;
}

double RadialGrid::integrate_panel(std::span<const double> samples, int panel, double theta_a,
                                   double theta_b) const {
  const GridPanel& p = panels_[panel];
  theta_a = std::max(theta_a, p.theta_lo);
  theta_b = std::min(theta_b, p.theta_hi);
  if (!(theta_b > theta_a)) return 0.0;
  std::vector<double> integrals(order_);
  basis_integrals(panel, theta_a, theta_b, integrals);
  double s = 0.0;
  for (int j = 0; j < order_; ++j) s += integrals[j] * sec2(theta_nodes_[p.first + j]) * samples[p.first + j];
  return s;
}

CumulativeIntegral::CumulativeIntegral(GridPtr grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  const auto& panels = grid_->panels();
  prefix_.assign(panels.size() + 1, 0.0);
  const int order = grid_->order();
  for (std::size_t p = 0; p < panels.size(); ++p) {
    double s = 0.0;
    for (int j = 0; j < order; ++j) s += grid_->base_weights()[panels[p].first + j] * samples_[panels[p].first + j];
    prefix_[p + 1] = prefix_[p] + s;
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= grid_->r_max()) return total();
  const double theta = std::atan(x);
  const int p = grid_->panel_of(theta);
  return prefix_[p] + grid_->integrate_panel(samples_, p, grid_->panels()[p].theta_lo, theta);
}

double RadialGrid::interpolate(std::span<const double> samples, double r) const {
  if (r > r_max_) return 0.0;
  const std::size_t n = nodes_.size();
  if (unbounded() && n >= 2 && r > nodes_[n - 1]) {
    // Beyond the last node a polynomial in theta cannot follow a power-law
    // tail, so continue the tail through the last two samples instead.
    const double a = samples[n - 2];
    const double b = samples[n - 1];
    if (a != 0.0 && b != 0.0 && (a > 0.0) == (b > 0.0) && std::abs(b) <= std::abs(a)) {
      const double alpha = std::log(a / b) / std::log(nodes_[n - 1] / nodes_[n - 2]);
      return b * std::pow(r / nodes_[n - 1], -alpha);
    }
  }
  const double theta = std::atan(std::max(r, 0.0));
  const int pi = panel_of(theta);
  static thread_local std::vector<double> scratch;
  scratch.resize(order_);
  basis(pi, theta, scratch);
  double v = 0.0;
  const int first = panels_[pi].first;
  for (int j = 0; j < order_; ++j) v += scratch[j] * samples[first + j];
  return v;
}

std::pair<double, double> RadialGrid::cell(std::size_t i) const {
  const std::size_t panel = i / order_;
  const std::size_t local = i % order_;
  const std::size_t base = panel * (order_ + 1);
  const double a = cell_edges_[base + local];
  const double b = cell_edges_[base + local + 1];
  const double rb = b >= std::numbers::pi / 2 ? kUnbounded : std::tan(b);
  return {std::tan(a), rb};
}

GridPtr make_grid(int n_points, double r_max_hint, std::span<const double> breakpoints) {
  if (n_points < 16) {
    throw ConfigError("make_grid: n_points >= 16 required (got " + std::to_string(n_points) + ")");
  }
  int order = 1;
  for (int candidate : {8, 4, 2}) {
    if (n_points % candidate == 0) {
      order = candidate;
      break;
    }
  }
  const double theta_max = (!(r_max_hint > 0.0) || std::isinf(r_max_hint))
                               ? std::numbers::pi / 2
                               : std::atan(r_max_hint);
  const int n_panels = n_points / order;
  std::vector<GridPanel> panels;
  panels.reserve(n_panels + breakpoints.size());
  for (int i = 0; i < n_panels; ++i) {
    panels.push_back({theta_max * i / n_panels, theta_max * (i + 1) / n_panels, 0});
  }
  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (b > 0.0 && std::atan(b) < theta_max) cuts.push_back(std::atan(b));
  }
  std::sort(cuts.begin(), cuts.end());
  for (double t : cuts) {
    auto it = std::find_if(panels.begin(), panels.end(),
                           [t](const GridPanel& p) { return p.theta_lo < t && t < p.theta_hi; });
    if (it == panels.end()) continue;
    const double scale = it->theta_hi - it->theta_lo;
    if (t - it->theta_lo < 1e-14 * scale || it->theta_hi - t < 1e-14 * scale) continue;
    GridPanel upper{t, it->theta_hi, 0};
    it->theta_hi = t;
    panels.insert(it + 1, upper);
  }
  return std::make_shared<const RadialGrid>(std::move(panels), order, theta_max);
}

}  // namespace kplane
