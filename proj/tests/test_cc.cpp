#include <gtest/gtest.h>

#include <cmath>

#include "kplane/cc.hpp"
#include "kplane/errors.hpp"
#include "kplane/extremal.hpp"
#include "kplane/norms.hpp"
#include "kplane/symmetry.hpp"

using namespace kplane;

namespace {

GridPtr unit_indicator_grid() {
  const std::vector<double> cuts{0.5, 1.0};
  return make_grid(1024, 4.0, cuts);
}

}  // namespace

TEST(ConcentrationFunction, IndicatorWindows) {
  const Params params = make_params(1, 3);
  const auto grid = unit_indicator_grid();
  const auto f = RadialProfile::indicator(grid, IntervalSet{{0.0, 1.0}});
  // Half-width 1/2: the window [0, 1] holds everything.
  EXPECT_NEAR(concentration_function(params, f, 0.5), 1.0 / 3.0, 1e-9);
  // Half-width 1/4: the outer half [1/2, 1] beats [0, 1/2].
  EXPECT_NEAR(concentration_function(params, f, 0.25), (1.0 - 0.125) / 3.0, 1e-9);
  EXPECT_NEAR(concentration_function(params, f, 10.0), input_mass(params, f), 1e-15);
}

TEST(ConcentrationFunction, MonotoneAndBounded) {
  const Params params = make_params(2, 4);
  const auto grid = make_grid(1024, kUnbounded);
  const auto f = RadialProfile::sample(grid, [](double r) {
    return std::exp(-(r - 2.0) * (r - 2.0)) + 0.3 * std::pow(1.0 + r * r, -1.5);
  });
  const double total = input_mass(params, f);
  double previous = 0.0;
  for (double R : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
    const double q = concentration_function(params, f, R);
    EXPECT_GE(q, previous - 1e-14);
    EXPECT_LE(q, total * (1.0 + 1e-14));
    previous = q;
  }
}

TEST(DichotomySplit, SingleBumpHasNoSplit) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(1024, 20.0);
  EXPECT_FALSE(dichotomy_split(params, unit_bump(params, grid, 1.0, 3.0), 0.1).has_value());
}

TEST(DichotomySplit, TwoHalvesAcrossDeadZone) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(2048, 20.0);
  const double half = std::pow(0.5, 1.0 / params.pd());
  const auto f = unit_bump(params, grid, 1.0, 2.0).scaled(half) + unit_bump(params, grid, 12.0, 13.0).scaled(half);
  const auto split = dichotomy_split(params, f, 0.1);
  ASSERT_TRUE(split.has_value());
  EXPECT_NEAR(split->inner_mass, 0.5, 0.01);
  EXPECT_NEAR(split->outer_mass, 0.5, 0.01);
  EXPECT_GE(split->gap_lo, 1.9);
  EXPECT_LE(split->gap_hi, 12.1);
  EXPECT_GE(split->gap(), 9.8);
  EXPECT_LE(split->inner.sup(), split->gap_lo);
  EXPECT_GE(split->outer.inf(), split->gap_hi);
}

TEST(DichotomySplit, FloorSemantics) {
  const Params params = make_params(2, 3);
  const auto grid = make_grid(2048, 20.0);
  const double p = params.pd();
  const auto f = unit_bump(params, grid, 1.0, 2.0).scaled(std::pow(0.4, 1.0 / p)) +
                 unit_bump(params, grid, 12.0, 13.0).scaled(std::pow(0.6, 1.0 / p));
  EXPECT_TRUE(dichotomy_split(params, f, 0.35).has_value());
  EXPECT_FALSE(dichotomy_split(params, f, 0.45).has_value());
}

class Synthetic : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(Synthetic, FamiliesAreClassified) {
  const auto [k, d] = GetParam();
  const Params params = make_params(k, d);
  const auto grid = make_grid(2048, kUnbounded);
  EXPECT_EQ(classify_trichotomy(params, synthetic_sequence(params, grid, "tight")).verdict, Verdict::Tight);

  const auto spreading = synthetic_sequence(params, grid, "vanishing");
  const auto vanishing = classify_trichotomy(params, spreading);
  EXPECT_EQ(vanishing.verdict, Verdict::Vanishing);
  ASSERT_TRUE(vanishing.monotone_spreading.has_value());
  EXPECT_TRUE(*vanishing.monotone_spreading);

  std::vector<RadialProfile> recentered;
  for (const auto& f : spreading) {
    const auto g = normalize_dilation(params, f).g;
    recentered.push_back(g.scaled(1.0 / weighted_lp_norm(g, params.input_weight(), params.pd())));
  }
  EXPECT_EQ(classify_trichotomy(params, recentered).verdict, Verdict::Tight);

  const auto split = classify_trichotomy(params, synthetic_sequence(params, grid, "dichotomy", 0.4));
  EXPECT_EQ(split.verdict, Verdict::Dichotomy);
  ASSERT_TRUE(split.alpha_estimate.has_value());
  EXPECT_NEAR(*split.alpha_estimate, 0.4, 0.05);
}

INSTANTIATE_TEST_SUITE_P(KD, Synthetic, ::testing::Values(std::pair{1, 3}, std::pair{2, 3}, std::pair{2, 4}));

TEST(Classify, SingleProfileHasNoTrend) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(1024, kUnbounded);
  const auto seq = synthetic_sequence(params, grid, "dichotomy", 0.4);
  const auto report = classify_trichotomy(params, {seq.back()});
  EXPECT_EQ(report.verdict, Verdict::Dichotomy);
  EXPECT_FALSE(report.trend_drop.has_value());
  EXPECT_FALSE(report.monotone_spreading.has_value());
}

TEST(Classify, RejectsUnnormalizedProfiles) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(256, kUnbounded);
  EXPECT_THROW(classify_trichotomy(params, {extremizer_profile(params, 1.0, grid)}), DomainError);
}

TEST(Interaction, ZeroPartnerAndRange) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(512, kUnbounded);
  const auto h = extremizer_profile(params, 1.0, grid);
  EXPECT_EQ(interaction_term(params, h, RadialProfile::zeros(grid), 2), 0.0);
  EXPECT_THROW(interaction_term(params, h, h, 0), ParameterError);
  EXPECT_THROW(interaction_term(params, h, h, 4), ParameterError);
}

TEST(Interaction, BinomialIdentityAndHoelder) {
  const Params params = make_params(2, 3);
  const auto grid = make_grid(1024, kUnbounded);
  const TransformOperator op(params, grid);
  const auto f = extremizer_profile(params, 1.0, grid);
  const auto g = unit_bump(params, grid, 0.5, 2.0);
  const int q = params.q_int();
  const double tf = weighted_lp_power(op.apply(f), params.output_weight(), q);
  const double tg = weighted_lp_power(op.apply(g), params.output_weight(), q);
  double sum = 2.0 * tf;
  for (int m = 1; m < q; ++m) {
    sum += std::tgamma(q + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(q - m + 1.0)) * interaction_term(op, f, f, m);
    const double bound = std::pow(tf, (q - m) / double(q)) * std::pow(tg, m / double(q));
    EXPECT_LE(interaction_term(op, f, g, m), bound * (1.0 + 1e-8));
  }
  EXPECT_NEAR(sum, std::pow(2.0, q) * tf, 1e-12 * std::pow(2.0, q) * tf);
}

TEST(Interaction, DecaysWithSeparation) {
  for (int k : {1, 2}) {
    const Params params = make_params(k, 3);
    const auto grid = make_grid(4096, 60.0);
    const TransformOperator op(params, grid);
    const auto near = unit_bump(params, grid, 0.0, 1.0);
    for (int m = 1; m < params.q_int(); ++m) {
      double previous = std::numeric_limits<double>::infinity();
      for (double delta : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        const double term = interaction_term(op, near, unit_bump(params, grid, delta, delta + 1.0), m);
        EXPECT_LT(term, previous) << k << " " << m << " " << delta;
        previous = term;
      }
    }
  }
}

TEST(InteractionBound, Preconditions) {
  const Params params = make_params(1, 3);
  const auto grid = make_grid(512, kUnbounded);
  const TransformOperator op(params, grid);
  const auto psi = unit_bump(params, grid, 5.0, 8.0);
  EXPECT_EQ(interaction_bound_check(op, 1.0, 2.0, RadialProfile::zeros(grid), 1).lhs, 0.0);
  EXPECT_THROW(interaction_bound_check(op, 1.0, 2.0, psi, 4), ParameterError);
  EXPECT_THROW(interaction_bound_check(op, 1.0, 6.0, psi, 1), PreconditionError);
  EXPECT_THROW(interaction_bound_check(op, 0.5, 2.0, psi, 1), PreconditionError);
  EXPECT_THROW(interaction_bound_check(op, 2.0, 1.0, psi, 1), PreconditionError);
}

TEST(InteractionBound, RatioStaysInBandForScaledBumps) {
  for (auto [k, d] : {std::pair{1, 3}, std::pair{2, 3}}) {
    const Params params = make_params(k, d);
    const auto grid = make_grid(2048, kUnbounded);
    const TransformOperator op(params, grid);
    const double R = 1.0;
    for (int m = 1; m < params.q_int(); ++m) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (double delta : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        const auto psi = unit_bump(params, grid, R + delta, 2.0 * (R + delta));
        const double ratio = interaction_bound_check(op, R, delta, psi, m).ratio();
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      EXPECT_LT(hi / lo, 4.0) << k << d << " m=" << m;
    }
  }
}
