#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace kplane {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

/// Finite union of disjoint intervals in [0, inf), stored sorted.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Throws ParameterError unless 0 <= a_j < b_j < a_{j+1}.
  explicit IntervalSet(std::vector<Interval> intervals);
  IntervalSet(std::initializer_list<Interval> intervals)
      : IntervalSet(std::vector<Interval>(intervals)) {}

  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] double inf() const;
  [[nodiscard]] double sup() const;
  [[nodiscard]] bool contains(double r) const;

  [[nodiscard]] double lebesgue_measure() const;
  /// Measure w.r.t. r^{d-1} dr: sum (b^d - a^d) / d.
  [[nodiscard]] double weighted_measure(int d) const;
  /// Lebesgue length of the intersection with [lo, hi].
  [[nodiscard]] double overlap(double lo, double hi) const;
  /// Interval endpoints, ascending.
  [[nodiscard]] std::vector<double> endpoints() const;

  [[nodiscard]] std::string str() const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace kplane
