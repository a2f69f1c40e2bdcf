#include "kplane/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kplane/errors.hpp"

namespace kplane {

RadialProfile::RadialProfile(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DataError("RadialProfile: null grid");
  if (values_.size() != grid_->size()) {
    throw DataError("RadialProfile: " + std::to_string(values_.size()) + " samples for a grid of " +
                    std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("RadialProfile: non-finite sample at node " + std::to_string(i));
    }
  }
}

RadialProfile RadialProfile::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return {std::move(grid), std::vector<double>(n, 0.0)};
}

RadialProfile RadialProfile::sample(GridPtr grid, const RealFunction& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->nodes()[i]);
  return {std::move(grid), std::move(v)};
}

RadialProfile RadialProfile::indicator(GridPtr grid, const IntervalSet& set) {
  std::vector<double> v(grid->size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto [a, b] = grid->cell(i);
    if (std::isinf(b)) {
      v[i] = set.contains(grid->nodes()[i]) ? 1.0 : 0.0;
      continue;
    }
    v[i] = set.overlap(a, b) / (b - a);
  }
  return {std::move(grid), std::move(v)};
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool RadialProfile::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

RadialProfile RadialProfile::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return {grid_, std::move(v)};
}

RadialProfile RadialProfile::operator+(const RadialProfile& other) const {
  if (other.grid_ != grid_) throw DataError("RadialProfile: grids differ");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return {grid_, std::move(v)};
}

RadialProfile RadialProfile::operator-(const RadialProfile& other) const {
  return *this + other.scaled(-1.0);
}

}  // namespace kplane
