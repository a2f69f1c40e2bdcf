#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kplane/interval_set.hpp"
#include "kplane/params.hpp"
#include "kplane/profile.hpp"
#include "kplane/transform.hpp"

namespace kplane {

/// sup over y >= 0 of the L^p(r^{d-1}) mass of f on [y - R, y + R].
double concentration_function(const Params& params, const RadialProfile& f, double R);

/// Two-way split of a profile across the widest gap in its essential support.
struct Split {
  IntervalSet inner;
  IntervalSet outer;
  double inner_mass = 0.0;  // fractions of the total mass
  double outer_mass = 0.0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  [[nodiscard]] double gap() const { return gap_hi - gap_lo; }
};

/// Cells carrying less than 1e-9 of the total mass are negligible; a gap is a
/// maximal run of negligible cells between non-negligible ones. Returns the
/// widest gap whose two sides both carry at least `floor` of the mass.
std::optional<Split> dichotomy_split(const Params& params, const RadialProfile& f, double floor);

enum class Verdict { Tight, Vanishing, Dichotomy, Undetermined };
std::string to_string(Verdict v);

struct TrichotomyOptions {
  double eps = 0.1;
  double separation_min = 10.0;
  double floor = 0.1;
  std::vector<double> radii{0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
};

struct TrichotomyReport {
  Verdict verdict = Verdict::Undetermined;
  std::vector<double> radii;
  /// evidence[i][j] = concentration function of profile i at radii[j].
  std::vector<std::vector<double>> evidence;
  /// Q_first(R) - Q_last(R) per radius; empty for a single profile.
  std::optional<std::vector<double>> trend_drop;
  /// Whether every Q_n(R) is nonincreasing in n; empty for a single profile.
  std::optional<bool> monotone_spreading;
  std::optional<Split> split;
  std::optional<double> alpha_estimate;
  /// Gap of the best split for each profile (0 when there is none).
  std::vector<double> split_gaps;
};

/// Classifies a finite sequence of unit-mass profiles:
///  Tight when some radius keeps at least 1 - eps of every profile's mass;
///  Dichotomy when the last profile splits across a gap of at least
///    separation_min with both sides above floor and gaps never shrink;
///  Vanishing when every Q_n(R) is nonincreasing in n and drops by at least eps
///    at some radius;
///  Undetermined otherwise.
/// A single profile is judged from its split and window masses alone.
/// Throws DomainError when a profile's mass differs from 1 by more than 1e-6.
TrichotomyReport classify_trichotomy(const Params& params, const std::vector<RadialProfile>& seq,
                                     const TrichotomyOptions& options = {});

/// <(Tf1)^{q-m}, (Tf2)^m> in L^1(r^{d-k-1} dr), for 1 <= m <= q-1.
double interaction_term(const TransformOperator& op, const RadialProfile& f1, const RadialProfile& f2, int m);
double interaction_term(const Params& params, const RadialProfile& f1, const RadialProfile& f2, int m);

struct InteractionBound {
  double lhs = 0.0;        // <1_[0,R], (T psi)^m>
  double rhs_shape = 0.0;  // R^{d-k} (R + delta)^{-m/p'} ||psi||_p^m
  [[nodiscard]] double ratio() const { return rhs_shape > 0.0 ? lhs / rhs_shape : 0.0; }
};

/// Requires R >= 1, delta >= R, psi vanishing on [0, R + delta) and
/// 1 <= m <= q-1 (PreconditionError / ParameterError otherwise).
InteractionBound interaction_bound_check(const TransformOperator& op, double R, double delta,
                                         const RadialProfile& psi, int m);
InteractionBound interaction_bound_check(const Params& params, double R, double delta, const RadialProfile& psi,
                                         int m);

/// sin^2 bump on [a, b], scaled to unit L^p(r^{d-1}) norm on the grid.
RadialProfile unit_bump(const Params& params, GridPtr grid, double a, double b);

/// Synthetic sequences with a known verdict: "tight" (repeated extremizer),
/// "vanishing" (dilates h_{2^-n}, n = 0..8), "dichotomy" (inner bump of mass
/// alpha plus an outer bump of mass 1 - alpha whose distance doubles).
std::vector<RadialProfile> synthetic_sequence(const Params& params, GridPtr grid, const std::string& kind,
                                              double alpha = 0.4);

}  // namespace kplane
