#pragma once

#include <span>
#include <vector>

#include "kplane/grid.hpp"
#include "kplane/interval_set.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

/// Radial function sampled on the nodes of a RadialGrid.
class RadialProfile {
 public:
  /// Throws DataError on a length mismatch or a non-finite sample.
  RadialProfile(GridPtr grid, std::vector<double> values);

  static RadialProfile zeros(GridPtr grid);
  static RadialProfile sample(GridPtr grid, const RealFunction& fn);
  /// Indicator of F. A node whose cell is cut by an endpoint of F gets the
  /// covered fraction of the cell's length.
  static RadialProfile indicator(GridPtr grid, const IntervalSet& set);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::span<const double> span() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double radius(std::size_t i) const { return grid_->nodes()[i]; }

  [[nodiscard]] double at(double r) const { return grid_->interpolate(values_, r); }
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool nonnegative() const;

  [[nodiscard]] RadialProfile scaled(double c) const;
  [[nodiscard]] RadialProfile operator+(const RadialProfile& other) const;
  [[nodiscard]] RadialProfile operator-(const RadialProfile& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace kplane
