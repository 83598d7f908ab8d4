/**
 * Copyright 2026 The fedprune Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedprune/gsm.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace fedprune::gsm {
namespace {

ScoreVector make_scores(std::vector<double> values) {
  ScoreVector s;
  s.values = std::move(values);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.client_ids.push_back(static_cast<ClientId>(i));
  return s;
}

GsmConfig fixed_sigma(double sigma_w_sq) {
  GsmConfig cfg;
  cfg.sigma_estimation = SigmaEstimation::kFixed;
  cfg.sigma_w_sq = sigma_w_sq;
  return cfg;
}

// Sort-based reference median, independent of the nth_element path.
double reference_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Grid {
  double argmin;
  double value;
};

template <typename F>
Grid grid_search(F f, double lo, double hi, double step) {
  Grid best{lo, f(lo)};
  const long n = static_cast<long>((hi - lo) / step + 0.5);
  for (long i = 1; i <= n; ++i) {
    const double x = lo + i * step;
    if (const double v = f(x); v < best.value) best = {x, v};
  }
  return best;
}

TEST(EstimateNoiseVariance, ConstantVectorHitsFloor) {
  GsmConfig cfg;
  EXPECT_EQ(estimate_noise_variance(make_scores({5, 5, 5}), cfg), 1e-12);
}

TEST(EstimateNoiseVariance, FixedModePassesThrough) {
  EXPECT_EQ(estimate_noise_variance(make_scores({1, 2, 3}), fixed_sigma(0.5)), 0.5);
}

TEST(EstimateNoiseVariance, MadOfMostlyZeroVectorIsZero) {
  const std::vector<double> v{0, 0, 0, 10};
  const double med = reference_median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - med));
  ASSERT_EQ(reference_median(dev), 0.0);
  EXPECT_EQ(estimate_noise_variance(make_scores(v), GsmConfig{}), 1e-12);
}

TEST(EstimateNoiseVariance, MatchesSortedMadOracle) {
  std::mt19937_64 rng(11);
  std::lognormal_distribution<double> dist(0.0, 1.0);
  for (int n : {1, 2, 5, 6, 19, 20}) {
    std::vector<double> v(n);
    for (double &x : v) x = dist(rng);
    const double med = reference_median(v);
    std::vector<double> dev;
    for (double x : v) dev.push_back(std::abs(x - med));
    const double sigma = 1.4826 * reference_median(dev);
    EXPECT_DOUBLE_EQ(estimate_noise_variance(make_scores(v), GsmConfig{}), std::max(sigma * sigma, 1e-12));
  }
}

TEST(EstimateNoiseVariance, EmptyScoresRejected) {
  try {
    estimate_noise_variance(ScoreVector{}, GsmConfig{});
    FAIL() << "expected an error";
  } catch (const std::invalid_argument &e) {
    EXPECT_STREQ(e.what(), "empty scores");
  }
}

TEST(SolveThetaScalar, PositiveLinearTermGivesZero) {
  const double eps = 1e-6;
  const auto f = [&](double t) { return t * t + 4 * t + std::log(t + eps); };
  const Grid g = grid_search(f, 0.0, 10.0, 1e-4);
  EXPECT_EQ(g.argmin, 0.0);
  EXPECT_EQ(solve_theta_scalar(1.0, 4.0, 1.0, eps), 0.0);
}

TEST(SolveThetaScalar, ZeroQuadraticTermGivesZero) {
  for (double b : {-5.0, 0.0, 3.0}) {
    EXPECT_EQ(solve_theta_scalar(0.0, b, 1.0, 1e-6), 0.0);
  }
}

TEST(SolveThetaScalar, MatchesFineGrid) {
  const double a = 1.0, b = -4.0, c = 0.05, eps = 1e-6;
  const auto f = [&](double t) { return theta_scalar_objective(a, b, c, eps, t); };
  const Grid g = grid_search(f, 0.0, std::abs(b) / (2 * a) + 5.0, 1e-5);
  const double theta = solve_theta_scalar(a, b, c, eps);
  EXPECT_NEAR(theta, g.argmin, 1e-4);
  EXPECT_LE(f(theta), g.value + 1e-9);
  // larger root of 2 a t^2 + b t + c
  EXPECT_NEAR(theta, (4.0 + std::sqrt(16.0 - 8.0 * c)) / 4.0, 1e-12);
}

TEST(SolveThetaScalar, InvalidConstantsRejected) {
  EXPECT_THROW(solve_theta_scalar(1, -1, 0.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(solve_theta_scalar(1, -1, -1.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(solve_theta_scalar(1, -1, 1.0, 0.0), std::invalid_argument);
  try {
    solve_theta_scalar(1, -1, 0.0, 1e-6);
  } catch (const std::invalid_argument &e) {
    EXPECT_STREQ(e.what(), "invalid GSM constants");
  }
}

TEST(SolveThetaScalar, NeverWorseThanCoarseGrid) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0, 10), ub(-10, 10), uc(1e-3, 10);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), b = ub(rng), c = uc(rng), eps = 1e-6;
    const auto f = [&](double t) { return theta_scalar_objective(a, b, c, eps, t); };
    const Grid g = grid_search(f, 0.0, 20.0, 1e-3);
    const double theta = solve_theta_scalar(a, b, c, eps);
    EXPECT_GE(theta, 0.0);
    EXPECT_LE(f(theta), g.value + 1e-6) << "a=" << a << " b=" << b << " c=" << c;
  }
}

TEST(SolveTheta, ZeroAlphaGivesZeroTheta) {
  const auto theta = solve_theta(std::vector<double>(4, 0.0), make_scores({1, -2, 3, 0}), fixed_sigma(1));
  EXPECT_EQ(theta, std::vector<double>(4, 0.0));
}

TEST(SolveTheta, SingleElementMatchesScalar) {
  GsmConfig cfg = fixed_sigma(0.1);
  const auto theta = solve_theta(std::vector<double>{1.0}, make_scores({2.0}), cfg);
  ASSERT_EQ(theta.size(), 1u);
  EXPECT_EQ(theta[0], solve_theta_scalar(1.0, -4.0, 0.4, cfg.epsilon));
}

TEST(SolveTheta, ElementwiseDecomposition) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0, 2);
  std::vector<double> alpha(5), s(5);
  for (int j = 0; j < 5; ++j) {
    alpha[j] = nd(rng);
    s[j] = nd(rng);
  }
  const GsmConfig cfg = fixed_sigma(0.7);
  const auto theta = solve_theta(alpha, make_scores(s), cfg);
  for (int j = 0; j < 5; ++j) {
    EXPECT_EQ(theta[j], solve_theta_scalar(alpha[j] * alpha[j], -2 * alpha[j] * s[j], 4 * 0.7, cfg.epsilon));
  }
}

TEST(SolveTheta, LengthMismatchRejected) {
  EXPECT_THROW(solve_theta(std::vector<double>{1, 2}, make_scores({1}), fixed_sigma(1)),
               std::invalid_argument);
}

TEST(SolveAlpha, ClosedFormExamples) {
  EXPECT_EQ(solve_alpha(std::vector<double>{1.0}, make_scores({2.0}), fixed_sigma(1))[0], 1.0);
  EXPECT_EQ(solve_alpha(std::vector<double>{0.0}, make_scores({7.5}), fixed_sigma(1))[0], 0.0);
  EXPECT_THROW(solve_alpha(std::vector<double>{1, 2}, make_scores({1}), fixed_sigma(1)),
               std::invalid_argument);
}

TEST(SolveAlpha, LocalOptimalityAndStationarity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ut(0, 5), us(-10, 10), usig(0.05, 4);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> theta(10), s(10);
    for (int j = 0; j < 10; ++j) {
      theta[j] = ut(rng);
      s[j] = us(rng);
    }
    const double sigma2 = usig(rng);
    const auto alpha = solve_alpha(theta, s, sigma2);
    for (int j = 0; j < 10; ++j) {
      const auto g = [&](double a) { return (s[j] - theta[j] * a) * (s[j] - theta[j] * a) + sigma2 * a * a; };
      EXPECT_GT(g(alpha[j] + 1e-4), g(alpha[j]));
      EXPECT_GT(g(alpha[j] - 1e-4), g(alpha[j]));
      const double stationarity = 2 * theta[j] * (theta[j] * alpha[j] - s[j]) + 2 * sigma2 * alpha[j];
      EXPECT_NEAR(stationarity, 0.0, 1e-10);
    }
  }
}

TEST(DenoiseScores, AllZeroIsFixedPoint) {
  const auto res = denoise_scores(make_scores({0, 0, 0}), GsmConfig{});
  EXPECT_EQ(res.clean.values, std::vector<double>(3, 0.0));
  EXPECT_TRUE(std::isfinite(res.state.objective));
}

TEST(DenoiseScores, SmallEntryZeroedLargeShrunk) {
  const ScoreVector in = make_scores({10, 10, 10, 0.01});
  const GsmConfig cfg = fixed_sigma(1.0);
  const auto res = denoise_scores(in, cfg);
  EXPECT_EQ(res.clean.values[3], 0.0);
  for (int j = 0; j < 3; ++j) {
    EXPECT_GT(res.clean.values[j], 0.0);
    EXPECT_LT(res.clean.values[j], 10.0);
  }
  // Coordinate-wise grid check of the joint objective at the returned point.
  const double eps = cfg.epsilon, sigma2 = res.state.sigma_w_sq;
  for (int j = 0; j < 4; ++j) {
    const double s = in.values[j], th = res.state.theta[j], al = res.state.alpha[j];
    const auto ht = [&](double t) { return (s - t * al) * (s - t * al) + 4 * sigma2 * std::log(t + eps); };
    const auto ha = [&](double a) { return (s - th * a) * (s - th * a) + sigma2 * a * a; };
    EXPECT_LE(ht(th), grid_search(ht, 0.0, 30.0, 1e-4).value + 1e-6);
    EXPECT_LE(ha(al), grid_search(ha, -5.0, 5.0, 1e-4).value + 1e-6);
  }
}

TEST(DenoiseScores, RobustSigmaOnDegenerateSpreadDoesNotZero) {
  // MAD is zero here, so the variance floor leaves every entry nearly untouched.
  const auto res = denoise_scores(make_scores({10, 10, 10, 0.01}), GsmConfig{});
  EXPECT_EQ(res.state.sigma_w_sq, 1e-12);
  EXPECT_NEAR(res.clean.values[3], 0.01, 1e-9);
}

TEST(DenoiseScores, SingleClientKeepsIdAndSign) {
  ScoreVector in;
  in.values = {50.0};
  in.client_ids = {42};
  const auto res = denoise_scores(in, fixed_sigma(0.5));
  EXPECT_EQ(res.clean.client_ids, std::vector<ClientId>{42});
  EXPECT_GT(res.clean.values[0], 0.0);
  ScoreVector neg = in;
  neg.values = {-50.0};
  EXPECT_LT(denoise_scores(neg, fixed_sigma(0.5)).clean.values[0], 0.0);
}

TEST(DenoiseScores, InvalidInputsRejected) {
  EXPECT_THROW(denoise_scores(ScoreVector{}, GsmConfig{}), std::invalid_argument);
  EXPECT_THROW(denoise_scores(make_scores({1, NAN}), GsmConfig{}), std::invalid_argument);
  GsmConfig bad;
  bad.epsilon = 0.0;
  EXPECT_THROW(denoise_scores(make_scores({1, 2}), bad), std::invalid_argument);
  bad = GsmConfig{};
  bad.max_iters = 0;
  EXPECT_THROW(denoise_scores(make_scores({1, 2}), bad), std::invalid_argument);
}

TEST(DenoiseScores, PropertiesOnRandomSignedVectors) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd(0, 1);
  std::uniform_int_distribution<int> len(1, 25);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(len(rng));
    for (double &x : v) x = std::exp(nd(rng)) * (nd(rng) < 0 ? -1 : 1);
    GsmConfig cfg;
    if (rep % 2) cfg = fixed_sigma(std::exp(nd(rng)));
    const auto res = denoise_scores(make_scores(v), cfg);

    // Objective never increases.
    for (std::size_t i = 1; i < res.state.history.size(); ++i) {
      EXPECT_LE(res.state.history[i], res.state.history[i - 1] + 1e-9);
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
      EXPECT_GE(res.state.theta[j], 0.0);
      const double out = res.clean.values[j];
      EXPECT_TRUE(out == 0.0 || std::signbit(out) == std::signbit(v[j]));
      EXPECT_LE(std::abs(out), std::abs(v[j]) + 1e-12);
    }
    // Bit-identical on repeat.
    const auto again = denoise_scores(make_scores(v), cfg);
    EXPECT_EQ(again.clean.values, res.clean.values);
    EXPECT_EQ(again.state.history, res.state.history);
  }
}

}  // namespace
}  // namespace fedprune::gsm
