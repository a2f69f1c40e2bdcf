#include "kplane/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kplane/errors.hpp"

namespace kplane {

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& iv = intervals_[i];
    if (!(iv.a >= 0.0) || !(iv.b > iv.a) || !std::isfinite(iv.b)) {
      throw ParameterError("IntervalSet: need 0 <= a < b < inf, got " + str());
    }
    if (i > 0 && !(intervals_[i - 1].b < iv.a)) {
      throw ParameterError("IntervalSet: intervals must be sorted and disjoint, got " + str());
    }
  }
}

double IntervalSet::inf() const { return empty() ? 0.0 : intervals_.front().a; }
double IntervalSet::sup() const { return empty() ? 0.0 : intervals_.back().b; }

bool IntervalSet::contains(double r) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [r](const Interval& iv) { return iv.a <= r && r <= iv.b; });
}

double IntervalSet::lebesgue_measure() const {
  double s = 0.0;
  for (const auto& iv : intervals_) s += iv.b - iv.a;
  return s;
}

double IntervalSet::weighted_measure(int d) const {
  double s = 0.0;
  for (const auto& iv : intervals_) s += (std::pow(iv.b, d) - std::pow(iv.a, d)) / d;
  return s;
}

double IntervalSet::overlap(double lo, double hi) const {
  double s = 0.0;
  for (const auto& iv : intervals_) s += std::max(0.0, std::min(hi, iv.b) - std::max(lo, iv.a));
  return s;
}

std::vector<double> IntervalSet::endpoints() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) {
    out.push_back(iv.a);
    out.push_back(iv.b);
  }
  return out;
}

std::string IntervalSet::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    os << (i ? ", " : "") << "(" << intervals_[i].a << ", " << intervals_[i].b << ")";
  }
  os << "}";
  return os.str();
}

}  // namespace kplane
