#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kplane/norms.hpp"
#include "kplane/transform.hpp"
#include "oracles.hpp"

using namespace kplane;

namespace {

double extremizer(int k, double r) { return std::pow(1.0 + r * r, -(k + 1) / 2.0); }

double max_rel_error(const RadialProfile& got, const std::function<double(double)>& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double w = want(got.radius(i));
    worst = std::max(worst, std::abs(got[i] - w) / std::max(std::abs(w), 1e-300));
  }
  return worst;
}

}  // namespace

TEST(Transform, ZeroMapsToZero) {
  const auto grid = make_grid(256, kUnbounded);
  const auto out = apply_T(make_params(2, 3), RadialProfile::zeros(grid));
  EXPECT_EQ(out.max_abs(), 0.0);
}

class ExtremizerTransform : public ::testing::TestWithParam<int> {};

TEST_P(ExtremizerTransform, MatchesBetaConstant) {
  const int k = GetParam();
  const Params params = make_params(k, k + 1);
  const auto grid = make_grid(1024, kUnbounded);
  const auto f = RadialProfile::sample(grid, [k](double r) { return extremizer(k, r); });
  const double c = oracle::extremizer_transform_constant(k);
  const auto out = apply_T(params, f);
  EXPECT_LT(max_rel_error(out, [c](double r) { return c / std::sqrt(1.0 + r * r); }), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(K, ExtremizerTransform, ::testing::Values(1, 2, 3, 4, 5));

TEST(Transform, K1ArctangentExample) {
  const auto grid = make_grid(2048, kUnbounded);
  const auto f = RadialProfile::sample(grid, [](double u) { return 1.0 / (1.0 + u * u); });
  const auto out = apply_T(make_params(1, 3), f);
  const double half_pi = std::numbers::pi / 2;
  EXPECT_LT(max_rel_error(out, [=](double r) { return half_pi / std::sqrt(1.0 + r * r); }), 1e-10);
}

TEST(Transform, NonExtremalProfiles) {
  // (1+u^2)^{-2} for k = 2: antiderivative -(1+u^2)^{-1}/2 of u(1+u^2)^{-2}.
  const auto grid = make_grid(1024, kUnbounded);
  const auto f = RadialProfile::sample(grid, [](double u) { return std::pow(1.0 + u * u, -2.0); });
  const auto out = apply_T(make_params(2, 4), f);
  EXPECT_LT(max_rel_error(out, [](double r) { return 0.5 / (1.0 + r * r); }), 1e-10);
}

TEST(Transform, Linearity) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(512, kUnbounded);
  const auto f = RadialProfile::sample(grid, [](double r) { return std::exp(-r * r); });
  const auto g = RadialProfile::sample(grid, [](double r) { return 1.0 / (1.0 + r * r); });
  const TransformOperator op(params, grid);
  const auto lhs = op.apply(f.scaled(2.5) + g.scaled(-0.75));
  const auto rhs = op.apply(f).scaled(2.5) + op.apply(g).scaled(-0.75);
  EXPECT_LT((lhs - rhs).max_abs(), 1e-12 * rhs.max_abs());
}

TEST(Transform, PositivityAndMonotonicity) {
  const Params params = make_params(2, 5);
  const auto grid = make_grid(512, kUnbounded);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  const TransformOperator op(params, grid);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = unif(rng);
    const double b = unif(rng);
    const auto f = RadialProfile::sample(grid, [=](double r) { return std::pow(1.0 + a * r * r, -2.0); });
    const auto g = RadialProfile::sample(grid, [=](double r) {
      return std::pow(1.0 + a * r * r, -2.0) + std::pow(1.0 + b * r * r, -3.0);
    });
    const auto tf = op.apply(f);
    const auto tg = op.apply(g);
    EXPECT_TRUE(tf.nonnegative());
    for (std::size_t i = 0; i < tf.size(); ++i) EXPECT_LE(tf[i], tg[i]);
  }
}

TEST(Transform, DilationCovariance) {
  const int k = 2;
  const int d = 4;
  const Params params = make_params(k, d);
  const double s = params.scale_exp.to_double();
  const auto grid = make_grid(1024, kUnbounded);
  for (double lambda : {0.5, 2.0, 7.0}) {
    const auto f_lambda = RadialProfile::sample(
        grid, [=](double r) { return std::pow(lambda, s) * extremizer(k, lambda * r); });
    const auto out = apply_T(params, f_lambda);
    const double c = oracle::extremizer_transform_constant(k);
    EXPECT_LT(max_rel_error(out,
                            [=](double r) {
                              return std::pow(lambda, s - k) * c / std::sqrt(1.0 + lambda * lambda * r * r);
                            }),
              1e-9)
        << lambda;
  }
}

TEST(TransformDiagnostics, TailWarnings) {
  const Params params = make_params(2, 3);
  const auto full = make_grid(1024, kUnbounded);
  const auto h = RadialProfile::sample(full, [](double r) { return extremizer(2, r); });
  EXPECT_FALSE(apply_T_with_diagnostics(params, h).tail_warning);

  const auto slow = RadialProfile::sample(full, [](double r) { return 1.0 / (1.0 + r * r); });
  const auto slow_result = apply_T_with_diagnostics(params, slow);
  EXPECT_TRUE(slow_result.tail_warning);
  EXPECT_TRUE(std::isinf(slow_result.tail_estimate));

  const auto truncated = make_grid(1024, 50.0);
  const auto h50 = RadialProfile::sample(truncated, [](double r) { return extremizer(2, r); });
  EXPECT_TRUE(apply_T_with_diagnostics(params, h50).tail_warning);
}

TEST(IndicatorTransform, ClosedForms) {
  const IntervalSet unit{{0.0, 1.5}};
  for (double r : {0.0, 0.3, 1.0, 1.49}) {
    EXPECT_NEAR(indicator_transform(make_params(2, 3), unit, r), (2.25 - r * r) / 2.0, 1e-14);
    EXPECT_NEAR(indicator_transform(make_params(1, 3), unit, r), std::sqrt(2.25 - r * r), 1e-14);
  }
  const IntervalSet two{{0.5, 1.0}, {2.0, 3.0}};
  for (int k = 1; k <= 4; ++k) {
    const Params params = make_params(k, k + 1);
    for (double r : {0.0, 0.7, 1.5, 2.5}) {
      const double want = oracle::interval_transform(k, 0.5, 1.0, r) + oracle::interval_transform(k, 2.0, 3.0, r);
      EXPECT_NEAR(indicator_transform(params, two, r), want, 1e-13);
    }
    EXPECT_EQ(indicator_transform(params, two, 3.2), 0.0);
  }
}

TEST(IndicatorTransform, ProfileOnGrid) {
  const auto grid = make_grid(64, kUnbounded);
  const auto out = apply_T_indicator(make_params(3, 5), IntervalSet{{1.0, 2.0}}, grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_DOUBLE_EQ(out[i], oracle::interval_transform(3, 1.0, 2.0, out.radius(i)));
  }
}

TEST(Adjoint, ZeroMapsToZero) {
  const auto grid = make_grid(128, kUnbounded);
  EXPECT_EQ(apply_T_adjoint(make_params(2, 3), RadialProfile::zeros(grid)).max_abs(), 0.0);
}

TEST(Adjoint, IndicatorK2D3) {
  const Params params = make_params(2, 3);
  const std::vector<double> jump{1.0};
  for (double u : {0.25, 0.9, 1.0, 1.7, 12.0}) {
    const double got = adjoint_at(params, [](double r) { return r <= 1.0 ? 1.0 : 0.0; }, u, jump);
    EXPECT_NEAR(got, std::min(u, 1.0) / u, 1e-12) << u;
  }
  const auto grid = make_grid(512, kUnbounded, jump);
  const auto g = RadialProfile::indicator(grid, IntervalSet{{0.0, 1.0}});
  const auto out = apply_T_adjoint(params, g);
  EXPECT_LT(max_rel_error(out, [](double u) { return std::min(u, 1.0) / u; }), 1e-10);
}

class AdjointIdentity : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(AdjointIdentity, RandomDecayingPairs) {
  const auto [k, d] = GetParam();
  const Params params = make_params(k, d);
  const auto grid = make_grid(1024, kUnbounded);
  const TransformOperator op(params, grid);
  std::mt19937_64 rng(1000 * k + d);
  std::uniform_real_distribution<double> unif(0.3, 2.0);
  for (int trial = 0; trial < 4; ++trial) {
    const double a = unif(rng), b = unif(rng), c = unif(rng), e = unif(rng);
    const auto f = RadialProfile::sample(grid, [=](double r) {
      return std::pow(1.0 + a * r * r, -(k + 1) / 2.0) * (1.0 + b / (1.0 + r * r));
    });
    const auto g = RadialProfile::sample(grid, [=](double r) {
      return std::pow(1.0 + c * r * r, -(d - k + 1) / 2.0) * (2.0 - e / (1.0 + e + r * r));
    });
    const double lhs = weighted_inner(op.apply(f), g, params.output_weight());
    const double rhs = weighted_inner(f, apply_T_adjoint(params, g), params.input_weight());
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(lhs));
    const double discrete = weighted_inner(f, op.apply_transpose(g), params.input_weight());
    EXPECT_NEAR(lhs, discrete, 1e-12 * std::abs(lhs));
  }
}

INSTANTIATE_TEST_SUITE_P(KD, AdjointIdentity,
                         ::testing::Values(std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}, std::pair{2, 5},
                                           std::pair{3, 4}, std::pair{4, 6}));

TEST(TruncatedOperator, MatchesTruncatedTransform) {
  const double R = 5.0;
  for (int k : {1, 2}) {
    const Params params = make_params(k, 3);
    const auto m = discretize_T_R(params, R, 512);
    const auto f = RadialProfile::sample(m.grid, [k](double r) { return extremizer(k, r); });
    const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(f.size()));
    const Eigen::VectorXd y = m.entries * x;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      worst = std::max(worst, std::abs(y(i) - oracle::truncated_extremizer_transform(k, R, f.radius(i))));
    }
    EXPECT_LT(worst, 1e-6) << k;
  }
}

TEST(TruncatedOperator, IndicatorWithPanelAlignedEndpoint) {
  const Params params = make_params(2, 3);
  const auto m = discretize_T_R(params, 4.0, 512);
  const double a = std::tan(m.grid->panels()[30].theta_lo);
  const auto f = RadialProfile::indicator(m.grid, IntervalSet{{0.0, a}});
  const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::VectorXd y = m.entries * x;
  const auto want = apply_T_indicator(params, IntervalSet{{0.0, a}}, m.grid);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(y(i), want[i], 1e-6);
}

TEST(TruncatedOperator, SupportAndSign) {
  for (int k : {1, 2, 3}) {
    const Params params = make_params(k, k + 2);
    const auto m = discretize_T_R(params, 3.0, 256);
    const auto& grid = *m.grid;
    const int order = grid.order();
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
      const int panel = grid.panel_of(grid.theta_nodes()[i]);
      const Eigen::Index first = grid.panels()[panel].first;
      const Eigen::Index far = std::min<Eigen::Index>(first + 4 * order, m.entries.cols());
      for (Eigen::Index j = 0; j < first; ++j) EXPECT_EQ(m.entries(i, j), 0.0);
      for (Eigen::Index j = far; j < m.entries.cols(); ++j) EXPECT_GT(m.entries(i, j), 0.0);
      EXPECT_GT(m.entries.row(i).sum(), 0.0);
    }
  }
}

TEST(SingularValues, ZeroMatrix) {
  const Params params = make_params(2, 3);
  auto m = discretize_T_R(params, 1.0, 32);
  m.entries.setZero();
  for (double s : singular_value_profile(params, m)) EXPECT_EQ(s, 0.0);
}

TEST(SingularValues, DecayTightensWithResolution) {
  const Params params = make_params(2, 3);
  double previous = 1.0;
  for (int n : {64, 128, 256}) {
    const auto sv = singular_value_profile(params, discretize_T_R(params, 1.0, n));
    EXPECT_TRUE(std::is_sorted(sv.rbegin(), sv.rend()));
    const double ratio = sv[n / 4] / sv[0];
    EXPECT_LT(ratio, previous) << n;
    previous = ratio;
  }
}

TEST(Equicontinuity, K2ClosedForm) {
  const Params params = make_params(2, 3);
  const double R = 2.0;
  for (double h : {0.1, 0.01, 0.001}) {
    EXPECT_NEAR(equicontinuity_modulus(params, R, h), (2 * R * h - h * h) / 2, 1e-10);
  }
  EXPECT_EQ(equicontinuity_modulus(params, R, 0.0), 0.0);
}

TEST(Equicontinuity, PointwiseAgainstAntiderivative) {
  for (int k : {1, 3, 4}) {
    const Params params = make_params(k, k + 1);
    for (double r : {0.0, 0.4, 1.2}) {
      for (double h : {0.2, 0.01}) {
        EXPECT_NEAR(equicontinuity_integral(params, 1.5, h, r), oracle::equicontinuity_integral(k, 1.5, h, r), 1e-9)
            << k << " " << r << " " << h;
      }
    }
  }
}

TEST(Equicontinuity, ShrinksWithStep) {
  for (int k : {1, 2, 3}) {
    const Params params = make_params(k, k + 2);
    const double a = equicontinuity_modulus(params, 1.0, 0.1);
    const double b = equicontinuity_modulus(params, 1.0, 0.01);
    const double c = equicontinuity_modulus(params, 1.0, 0.001);
    EXPECT_GT(a, b);
    EXPECT_GT(b, c);
  }
}
