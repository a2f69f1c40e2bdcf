#include "kplane/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kplane/errors.hpp"
#include "kplane/norms.hpp"

namespace kplane {

RadialProfile rearrange(const Params& params, const RadialProfile& f) {
  const RadialGrid& grid = *f.grid();
  const std::size_t n = f.size();
  const double p = params.pd();
  const int a = params.input_weight();

  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = grid.base_weights()[i] * std::pow(grid.nodes()[i], a);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(f[x]) > std::abs(f[y]); });

  // Walk the sorted stream and the radial slots together.
  std::vector<double> out(n, 0.0);
  std::size_t src = 0;
  double src_left = n > 0 ? mass[order[0]] : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double need = mass[i];
    double acc = 0.0;
    while (need > 0.0 && src < n) {
      const double take = std::min(need, src_left);
      acc += take * std::pow(std::abs(f[order[src]]), p);
      need -= take;
      src_left -= take;
      if (src_left <= 0.0) {
        ++src;
        if (src < n) src_left = mass[order[src]];
      }
    }
    out[i] = std::pow(acc / mass[i], 1.0 / p);
  }
  // Keep the result nonincreasing against round-off in the slot sums.
  for (std::size_t i = 1; i < n; ++i) out[i] = std::min(out[i], out[i - 1]);
  return RadialProfile(f.grid(), std::move(out));
}

RadialProfile dilate(const Params& params, const RadialProfile& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("dilation factor must be positive");
  const double scale = std::pow(lambda, params.scale_exp.to_double());
  const RadialGrid& grid = *f.grid();
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * grid.interpolate(f.span(), lambda * grid.nodes()[i]);
  return RadialProfile(f.grid(), std::move(out));
}

double mass_median(const Params& params, const RadialProfile& f) {
  const double total = input_mass(params, f);
  if (!(total > 0.0)) throw DomainError("profile has zero L^p mass");
  const RadialGrid& grid = *f.grid();
  double lo = 0.0;
  double hi = grid.theta_max();
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass_within(params, f, std::tan(mid)) < 0.5 * total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::tan(0.5 * (lo + hi));
}

Normalized normalize_dilation(const Params& params, const RadialProfile& f) {
  const double lambda = mass_median(params, f);
  return Normalized{lambda, dilate(params, f, lambda)};
}

Truncation truncate(const Params& /*params*/, const RadialProfile& f, double m) {
  std::vector<double> g(f.size());
  std::vector<double> eps(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const bool keep = f.radius(i) <= m && f[i] <= m;
    g[i] = keep ? f[i] : 0.0;
    eps[i] = f[i] - g[i];
  }
  return Truncation{RadialProfile(f.grid(), std::move(g)), RadialProfile(f.grid(), std::move(eps))};
}

}  // namespace kplane
