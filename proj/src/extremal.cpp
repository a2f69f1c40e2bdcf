#include "kplane/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kplane/errors.hpp"
#include "kplane/norms.hpp"
#include "kplane/symmetry.hpp"

namespace kplane {

RadialProfile extremizer_profile(const Params& params, double lambda, GridPtr grid) {
  if (!(lambda > 0.0)) throw ParameterError("dilation factor must be positive");
  const double scale = std::pow(lambda, params.scale_exp.to_double());
  const double e = -(params.k + 1) / 2.0;
  return RadialProfile::sample(std::move(grid), [=](double r) {
    const double x = lambda * r;
    return scale * std::pow(1.0 + x * x, e);
  });
}

double sphere_area(int i) {
  if (i < 1) throw ParameterError("sphere dimension must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, i / 2.0) / std::tgamma(i / 2.0);
}

double constant_A(const Params& params) {
  const int k = params.k;
  const int d = params.d;
  const double log_value = (k - d) * std::log(2.0) + d * std::log(sphere_area(k + 1)) - k * std::log(sphere_area(d + 1));
  return std::exp(log_value / (d + 1));
}

double functional_ratio(const TransformOperator& op, const RadialProfile& f) {
  const Params& params = op.params();
  const double denom = weighted_lp_norm(f, params.input_weight(), params.pd());
  if (!(denom > 0.0)) throw DomainError("functional ratio of a zero profile");
  return weighted_lp_norm(op.apply(f), params.output_weight(), params.qd()) / denom;
}

double functional_ratio(const Params& params, const RadialProfile& f) {
  return functional_ratio(TransformOperator(params, f.grid()), f);
}

ConstantEstimate constant_B(const Params& params, int resolution) {
  const auto value_at = [&](int n) {
    const GridPtr grid = make_grid(n, kUnbounded);
    return functional_ratio(params, extremizer_profile(params, 1.0, grid));
  };
  const double fine = value_at(resolution);
  const double coarse = value_at(std::max(16, resolution / 2));
  return ConstantEstimate{fine, std::abs(fine - coarse)};
}

namespace {

RadialProfile unit_norm(const Params& params, const RadialProfile& f) {
  const double norm = weighted_lp_norm(f, params.input_weight(), params.pd());
  if (!(norm > 0.0)) throw DomainError("iterate has zero L^p norm");
  return f.scaled(1.0 / norm);
}

RadialProfile power_step(const TransformOperator& op, const RadialProfile& f) {
  const Params& params = op.params();
  const double q = params.qd();
  const double p = params.pd();
  const RadialProfile tf = op.apply(f);
  std::vector<double> g(tf.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::max(tf[i], 0.0), q - 1.0);
  const RadialProfile back = op.apply_transpose(RadialProfile(f.grid(), std::move(g)));
  std::vector<double> next(back.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::pow(std::max(back[i], 0.0), 1.0 / (p - 1.0));
  return unit_norm(params, RadialProfile(f.grid(), std::move(next)));
}

RadialProfile geometric_mean(const Params& params, const RadialProfile& a, const RadialProfile& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(a[i] * b[i]);
  return unit_norm(params, RadialProfile(a.grid(), std::move(out)));
}

}  // namespace

SearchTrace search_extremizer(const Params& params, const RadialProfile& init, const SearchOptions& options) {
  for (double v : init.values()) {
    if (v < 0.0) throw DomainError("initial profile must be nonnegative");
  }
  const TransformOperator op(params, init.grid());
  RadialProfile f = unit_norm(params, init);
  double phi = functional_ratio(op, f);

  SearchTrace trace{{phi}, f};
  int calm = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    RadialProfile next = power_step(op, f);
    double phi_next = functional_ratio(op, next);
    if (phi_next < phi * (1.0 - options.ascent_slack)) {
      next = geometric_mean(params, f, next);
      phi_next = functional_ratio(op, next);
      ++trace.damped_steps;
      if (phi_next < phi * (1.0 - options.ascent_slack)) {
        throw IterationAnomaly("functional ratio decreased from " + std::to_string(phi) + " to " +
                               std::to_string(phi_next) + " at iteration " + std::to_string(it));
      }
    }

    const double median = mass_median(params, next);
    if (median < 0.5 || median > 2.0) {
      RadialProfile centered = unit_norm(params, dilate(params, next, median));
      const double phi_centered = functional_ratio(op, centered);
      if (phi_centered >= phi_next * (1.0 - options.ascent_slack)) {
        next = std::move(centered);
        phi_next = phi_centered;
        ++trace.recentered_steps;
      }
    }

    const double change = std::abs(phi_next - phi) / phi_next;
    f = std::move(next);
    phi = phi_next;
    trace.iterates.push_back(phi);
    trace.iterations_used = it;
    calm = change < options.tol ? calm + 1 : 0;
    if (calm >= options.stagnation_window) {
      trace.converged = true;
      break;
    }
  }
  trace.final_profile = f;
  return trace;
}

RadialProfile random_decaying_profile(const Params& params, GridPtr grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 3);
  std::uniform_int_distribution<int> half_steps(0, 2);
  std::uniform_real_distribution<double> coeff(0.2, 2.0);
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> center(0.0, 3.0);
  std::uniform_real_distribution<double> width(0.3, 1.5);
  std::bernoulli_distribution with_bump(0.5);

  struct Term {
    double c, a, beta;
  };
  std::vector<Term> parts;
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    const double c = coeff(rng);
    const double a = std::exp(log_scale(rng));
    const double beta = (params.k + 1) / 2.0 + 0.5 * half_steps(rng);
    parts.push_back({c, a, beta});
  }
  const bool bump = with_bump(rng);
  const double bc = coeff(rng);
  const double r0 = center(rng);
  const double w = width(rng);
  return RadialProfile::sample(std::move(grid), [=](double r) {
    double v = 0.0;
    for (const auto& t : parts) v += t.c * std::pow(1.0 + t.a * r * r, -t.beta);
    if (bump) v += bc * std::exp(-(r - r0) * (r - r0) / (w * w));
    return v;
  });
}

}  // namespace kplane
