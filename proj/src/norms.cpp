#include "kplane/norms.hpp"

#include <cmath>
#include <string>

#include "kplane/errors.hpp"

namespace kplane {

namespace {

void require_p(double p) {
  if (!(p >= 1.0)) throw ParameterError("weighted norm: p >= 1 required (p = " + std::to_string(p) + ")");
}

std::vector<double> density(const RadialProfile& f, int a, double p) {
  const auto& r = f.grid()->nodes();
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::pow(std::abs(f[i]), p) * std::pow(r[i], a);
  }
  return out;
}

}  // namespace

double weighted_lp_power(const RadialProfile& f, int a, double p) {
  require_p(p);
  return f.grid()->integrate(density(f, a, p));
}

double weighted_lp_norm(const RadialProfile& f, int a, double p) {
  return std::pow(weighted_lp_power(f, a, p), 1.0 / p);
}

double weighted_lp_norm(const RealFunction& f, int a, double p, double hi,
                        std::span<const double> breakpoints) {
  require_p(p);
  const double s = integrate_function(
      [&](double r) { return std::pow(std::abs(f(r)), p) * std::pow(r, a); }, 0.0, hi,
      breakpoints);
  return std::pow(s, 1.0 / p);
}

double input_mass(const Params& params, const RadialProfile& f) {
  return weighted_lp_power(f, params.input_weight(), params.pd());
}

double mass_tail(const Params& params, const RadialProfile& f, double R) {
  if (!(R >= 0.0)) throw ParameterError("mass_tail: R >= 0 required");
  const double s = f.grid()->integrate(density(f, params.input_weight(), params.pd()), R, kUnbounded);
  return std::max(s, 0.0);
}

double mass_within(const Params& params, const RadialProfile& f, double R) {
  const double s = f.grid()->integrate(density(f, params.input_weight(), params.pd()), 0.0, R);
  return std::max(s, 0.0);
}

double mass_above_level(const Params& params, const RadialProfile& f, double m) {
  if (!(m >= 0.0)) throw ParameterError("mass_above_level: m >= 0 required");
  const std::vector<double> dens = density(f, params.input_weight(), params.pd());
  const auto& w = f.grid()->base_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i) {
    if (std::abs(f[i]) > m) s += w[i] * dens[i];
  }
  return s;
}

double weighted_inner(const RadialProfile& f, const RadialProfile& g, int a) {
  const auto& r = f.grid()->nodes();
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i] * std::pow(r[i], a);
  return f.grid()->integrate(prod);
}

}  // namespace kplane
