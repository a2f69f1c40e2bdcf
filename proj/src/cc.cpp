#include "kplane/cc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kplane/errors.hpp"
#include "kplane/extremal.hpp"
#include "kplane/norms.hpp"

namespace kplane {

namespace {

std::vector<double> mass_density(const Params& params, const RadialProfile& f) {
  const double p = params.pd();
  const int a = params.input_weight();
  std::vector<double> dens(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) dens[i] = std::pow(std::abs(f[i]), p) * std::pow(f.radius(i), a);
  return dens;
}

}  // namespace

double concentration_function(const Params& params, const RadialProfile& f, double R) {
  if (!(R > 0.0)) throw ParameterError("window half-width must be positive");
  const CumulativeIntegral mass(f.grid(), mass_density(params, f));
  const double total = mass.total();
  if (2.0 * R >= f.grid()->r_max()) return total;

  const auto window = [&](double a) { return mass(a + 2.0 * R) - mass(a); };
  std::vector<double> starts{0.0};
  for (double r : f.grid()->nodes()) {
    starts.push_back(r);
    if (r > 2.0 * R) starts.push_back(r - 2.0 * R);
  }
  std::sort(starts.begin(), starts.end());
  std::size_t best = 0;
  double best_value = window(starts[0]);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const double v = window(starts[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement between the neighbouring candidates.
  double lo = starts[best > 0 ? best - 1 : 0];
  double hi = starts[std::min(best + 1, starts.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double x1 = hi - phi * (hi - lo);
    const double x2 = lo + phi * (hi - lo);
    const double v1 = window(x1);
    const double v2 = window(x2);
    best_value = std::max({best_value, v1, v2});
    if (v1 < v2) {
      lo = x1;
    } else {
      hi = x2;
    }
  }
  return std::clamp(best_value, 0.0, total);
}

std::optional<Split> dichotomy_split(const Params& params, const RadialProfile& f, double floor) {
  const RadialGrid& grid = *f.grid();
  const std::vector<double> dens = mass_density(params, f);
  std::vector<double> contrib(f.size());
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    contrib[i] = grid.base_weights()[i] * dens[i];
    total += contrib[i];
  }
  if (!(total > 0.0)) return std::nullopt;

  std::vector<std::size_t> essential;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (contrib[i] >= 1e-9 * total) essential.push_back(i);
  }
  if (essential.size() < 2) return std::nullopt;

  std::vector<double> prefix(f.size() + 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) prefix[i + 1] = prefix[i] + contrib[i];

  const auto finite_edge = [&](std::size_t i) {
    const double hi = grid.cell(i).second;
    return std::isfinite(hi) ? hi : grid.nodes()[i];
  };

  std::optional<Split> best;
  for (std::size_t e = 0; e + 1 < essential.size(); ++e) {
    const std::size_t i = essential[e];
    const std::size_t j = essential[e + 1];
    if (j == i + 1) continue;
    const double gap_lo = grid.cell(i).second;
    const double gap_hi = grid.cell(j).first;
    const double inner = prefix[i + 1] / total;
    const double outer = (prefix.back() - prefix[j]) / total;
    if (inner < floor || outer < floor) continue;
    if (best && gap_hi - gap_lo <= best->gap()) continue;
    best = Split{IntervalSet{{grid.cell(essential.front()).first, gap_lo}},
                 IntervalSet{{gap_hi, finite_edge(essential.back())}},
                 inner,
                 outer,
                 gap_lo,
                 gap_hi};
  }
  return best;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Tight:
      return "Tight";
    case Verdict::Vanishing:
      return "Vanishing";
    case Verdict::Dichotomy:
      return "Dichotomy";
    case Verdict::Undetermined:
      break;
  }
  return "Undetermined";
}

TrichotomyReport classify_trichotomy(const Params& params, const std::vector<RadialProfile>& seq,
                                     const TrichotomyOptions& options) {
  if (seq.empty()) throw DomainError("empty profile sequence");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const double mass = input_mass(params, seq[i]);
    if (std::abs(mass - 1.0) > 1e-6) {
      throw DomainError("profile " + std::to_string(i) + " has L^p mass " + std::to_string(mass) + ", expected 1");
    }
  }

  TrichotomyReport report;
  report.radii = options.radii;
  for (const auto& f : seq) {
    std::vector<double> row;
    for (double R : options.radii) row.push_back(concentration_function(params, f, R));
    report.evidence.push_back(std::move(row));
    const auto split = dichotomy_split(params, f, options.floor);
    report.split_gaps.push_back(split ? split->gap() : 0.0);
  }

  bool tight = false;
  for (std::size_t j = 0; j < options.radii.size(); ++j) {
    double worst = 1.0;
    for (const auto& row : report.evidence) worst = std::min(worst, row[j]);
    if (worst >= 1.0 - options.eps) tight = true;
  }

  const auto last_split = dichotomy_split(params, seq.back(), options.floor);
  const bool wide_split = last_split && last_split->gap() >= options.separation_min;
  const auto mark_dichotomy = [&] {
    report.verdict = Verdict::Dichotomy;
    report.split = last_split;
    report.alpha_estimate = last_split->inner_mass;
  };

  if (seq.size() == 1) {
    if (wide_split) {
      mark_dichotomy();
    } else if (tight) {
      report.verdict = Verdict::Tight;
    }
    return report;
  }

  std::vector<double> drop;
  bool monotone = true;
  for (std::size_t j = 0; j < options.radii.size(); ++j) {
    drop.push_back(report.evidence.front()[j] - report.evidence.back()[j]);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      if (report.evidence[i][j] > report.evidence[i - 1][j] + 1e-9) monotone = false;
    }
  }
  const bool separating = std::is_sorted(report.split_gaps.begin(), report.split_gaps.end());
  const double max_drop = *std::max_element(drop.begin(), drop.end());
  report.trend_drop = drop;
  report.monotone_spreading = monotone;

  if (tight) {
    report.verdict = Verdict::Tight;
  } else if (wide_split && separating) {
    mark_dichotomy();
  } else if (monotone && max_drop >= options.eps) {
    report.verdict = Verdict::Vanishing;
  }
  return report;
}

double interaction_term(const TransformOperator& op, const RadialProfile& f1, const RadialProfile& f2, int m) {
  const Params& params = op.params();
  const int q = params.q_int();
  if (m < 1 || m > q - 1) throw ParameterError("interaction exponent m must lie in [1, q-1]");
  const RadialProfile t1 = op.apply(f1);
  const RadialProfile t2 = op.apply(f2);
  const int a = params.output_weight();
  std::vector<double> integrand(t1.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    integrand[i] = std::pow(std::max(t1[i], 0.0), q - m) * std::pow(std::max(t2[i], 0.0), m) *
                   std::pow(t1.radius(i), a);
  }
  return t1.grid()->integrate(integrand);
}

double interaction_term(const Params& params, const RadialProfile& f1, const RadialProfile& f2, int m) {
  return interaction_term(TransformOperator(params, f1.grid()), f1, f2, m);
}

InteractionBound interaction_bound_check(const TransformOperator& op, double R, double delta,
                                         const RadialProfile& psi, int m) {
  const Params& params = op.params();
  const int q = params.q_int();
  if (m < 1 || m > q - 1) throw ParameterError("interaction exponent m must lie in [1, q-1]");
  if (!(R >= 1.0)) throw PreconditionError("R >= 1 required");
  if (!(delta >= R)) throw PreconditionError("delta >= R required");
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi.radius(i) < R + delta && psi[i] != 0.0) {
      throw PreconditionError("psi must vanish on [0, R + delta)");
    }
  }
  const RadialProfile t = op.apply(psi);
  const int a = params.output_weight();
  std::vector<double> integrand(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) integrand[i] = std::pow(std::max(t[i], 0.0), m) * std::pow(t.radius(i), a);

  InteractionBound out;
  out.lhs = t.grid()->integrate(integrand, 0.0, R);
  const double norm = weighted_lp_norm(psi, params.input_weight(), params.pd());
  out.rhs_shape = std::pow(R, params.d - params.k) * std::pow(R + delta, -m / params.p_conj.to_double()) *
                  std::pow(norm, m);
  return out;
}

InteractionBound interaction_bound_check(const Params& params, double R, double delta, const RadialProfile& psi,
                                         int m) {
  return interaction_bound_check(TransformOperator(params, psi.grid()), R, delta, psi, m);
}

RadialProfile unit_bump(const Params& params, GridPtr grid, double a, double b) {
  if (!(b > a) || a < 0.0) throw ParameterError("bump support must be an interval [a, b] with 0 <= a < b");
  const auto raw = RadialProfile::sample(std::move(grid), [a, b](double r) {
    if (r <= a || r >= b) return 0.0;
    const double s = std::sin(std::numbers::pi * (r - a) / (b - a));
    return s * s;
  });
  const double norm = weighted_lp_norm(raw, params.input_weight(), params.pd());
  if (!(norm > 0.0)) throw DomainError("bump support contains no grid node");
  return raw.scaled(1.0 / norm);
}

std::vector<RadialProfile> synthetic_sequence(const Params& params, GridPtr grid, const std::string& kind,
                                              double alpha) {
  const double p = params.pd();
  const auto unit = [&](const RadialProfile& f) {
    return f.scaled(1.0 / weighted_lp_norm(f, params.input_weight(), p));
  };
  std::vector<RadialProfile> seq;
  if (kind == "tight") {
    const auto h = unit(extremizer_profile(params, 1.0, grid));
    seq.assign(9, h);
  } else if (kind == "vanishing") {
    for (int n = 0; n <= 8; ++n) seq.push_back(unit(extremizer_profile(params, std::ldexp(1.0, -n), grid)));
  } else if (kind == "dichotomy") {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("dichotomy mass fraction must lie in (0, 1)");
    const auto inner = unit_bump(params, grid, 0.5, 1.5).scaled(std::pow(alpha, 1.0 / p));
    for (int n = 0; n <= 5; ++n) {
      const double c = 3.0 * std::ldexp(1.0, n);
      seq.push_back(inner + unit_bump(params, grid, c, 1.5 * c).scaled(std::pow(1.0 - alpha, 1.0 / p)));
    }
  } else {
    throw ParameterError("unknown synthetic family '" + kind + "'");
  }
  return seq;
}

}  // namespace kplane
