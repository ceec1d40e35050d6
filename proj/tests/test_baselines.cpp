// Copyright 2026 The MOF Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mof/baselines.hpp"
#include "mof/data.hpp"
#include "mof/error.hpp"
#include "mof/metrics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using mof::testing::box;
using mof::testing::window_from;

TEST(CvCsTest, ClosedFormExtrapolation)
{
  // Anchor at x = 14 + 29 with one pixel per frame.
  const auto w = window_from([](int i) { return box(14 + i, 5, 4, 8); });
  const auto f = mof::cv_cs_forecast(w);
  ASSERT_EQ(f.boxes.size(), 60u);
  for (int k = 1; k <= 60; ++k) EXPECT_EQ(f.boxes[k - 1], box(43 + k, 5, 4, 8)) << k;
  EXPECT_EQ(f.source, w.source);
}

TEST(CvCsTest, UsesOnlyTheLastFiveObservations)
{
  auto w = window_from([](int i) { return box(i < 25 ? 1000.0 * i : 14 + (i - 25), 5, 4, 8); });
  const auto f = mof::cv_cs_forecast(w);
  EXPECT_EQ(f.boxes.back(), box(18 + 60, 5, 4, 8));
}

TEST(CvCsTest, StationaryObjectStaysPut)
{
  const auto w = window_from([](int) { return box(7, 9, 3, 3); });
  for (const auto & b : mof::cv_cs_forecast(w).boxes) EXPECT_EQ(b, box(7, 9, 3, 3));
}

TEST(CvCsTest, UnderestimatesAcceleratingMotion)
{
  const auto w = window_from([](int i) { return box(0.05 * i * i, 0, 4, 4); });
  const auto f = mof::cv_cs_forecast(w);
  for (int k = 0; k < 60; ++k) EXPECT_LT(f.boxes[k].cx, w.future[k].cx);
}

TEST(CvCsTest, TranslationEquivariant)
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> step(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(90), ys(90);
    for (int i = 1; i < 90; ++i) {
      xs[i] = xs[i - 1] + step(rng);
      ys[i] = ys[i - 1] + step(rng);
    }
    const double dx = step(rng) * 50;
    const auto a = window_from([&](int i) { return box(xs[i], ys[i], 10, 20); });
    const auto b = window_from([&](int i) { return box(xs[i] + dx, ys[i], 10, 20); });
    const auto fa = mof::cv_cs_forecast(a);
    const auto fb = mof::cv_cs_forecast(b);
    for (int k = 0; k < 60; ++k) {
      EXPECT_NEAR(fb.boxes[k].cx - fa.boxes[k].cx, dx, 1e-9);
      EXPECT_EQ(fb.boxes[k].w, fa.boxes[k].w);
    }
  }
}

TEST(LkfTest, RecoversConstantVelocity)
{
  const auto w = window_from([](int i) { return box(100 + 2.0 * i, 50 - 1.5 * i, 20, 30); });
  const auto state = mof::lkf_filter(w, {});
  EXPECT_NEAR(state.mean(4), 2.0, 1e-3);
  EXPECT_NEAR(state.mean(5), -1.5, 1e-3);
  EXPECT_NEAR(state.mean(6), 0.0, 1e-3);
  EXPECT_NEAR(state.mean(7), 0.0, 1e-3);
}

TEST(LkfTest, StationaryObjectForecastIsStationary)
{
  const auto w = window_from([](int) { return box(7, 9, 3, 3); });
  const auto f = mof::lkf_forecast(w, {});
  for (const auto & b : f.boxes) {
    EXPECT_NEAR(b.cx, 7, 1e-9);
    EXPECT_NEAR(b.cy, 9, 1e-9);
    EXPECT_NEAR(b.w, 3, 1e-9);
  }
}

TEST(LkfTest, TinyObservationNoiseTracksTheLastObservation)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> jitter(0.0, 5.0);
  std::vector<mof::BBox> boxes;
  for (int i = 0; i < 90; ++i) boxes.push_back(box(50 + jitter(rng), 60 + jitter(rng), 20, 30));
  const auto w = window_from([&](int i) { return boxes[i]; });
  mof::KalmanParams p;
  p.observation_noise = 1e-9;
  const auto state = mof::lkf_filter(w, p);
  EXPECT_NEAR(state.mean(0), w.anchor_box().cx, 1e-6);
  EXPECT_NEAR(state.mean(1), w.anchor_box().cy, 1e-6);
}

TEST(LkfTest, RollOutFollowsTheTransition)
{
  mof::KalmanState s;
  s.mean << 10, 20, 30, 40, 1, -2, 0.5, 0;
  const auto f = mof::lkf_forecast(s, 60);
  ASSERT_EQ(f.boxes.size(), 60u);
  EXPECT_EQ(f.boxes[59], box(70, -100, 60, 40));
  EXPECT_EQ(f.model_id, "lkf");
}

TEST(LkfTest, ShrinkingSizeIsClampedToOnePixel)
{
  mof::KalmanState s;
  s.mean << 0, 0, 10, 10, 0, 0, -1, -1;
  const auto f = mof::lkf_forecast(s, 60);
  EXPECT_EQ(f.boxes[59].w, 1.0);
  EXPECT_EQ(f.boxes[59].h, 1.0);
  EXPECT_EQ(f.boxes[4].w, 5.0);
}

TEST(LkfTest, CovarianceStaysSymmetricPositiveDefinite)
{
  std::mt19937_64 rng(4);
  std::normal_distribution<double> jitter(0.0, 2.0);
  std::vector<mof::BBox> boxes;
  for (int i = 0; i < 90; ++i) boxes.push_back(box(3.0 * i + jitter(rng), jitter(rng), 20, 30));
  const auto w = window_from([&](int i) { return boxes[i]; });
  for (const auto & p : mof::default_lkf_grid()) {
    for (const auto & s : mof::lkf_filter_history(w, p)) {
      EXPECT_LT((s.covariance - s.covariance.transpose()).norm(), 1e-12);
      Eigen::SelfAdjointEigenSolver<mof::KalmanMatrix> eig(s.covariance);
      EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(LkfTest, RejectsNonPositiveNoise)
{
  mof::KalmanParams p;
  p.observation_noise = 0.0;
  EXPECT_THROW(p.validate(), mof::DataError);
}

TEST(LkfTuneTest, SingleElementGridIsReturned)
{
  const auto windows = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 5, 1.0, 1), 30, 60, 20);
  const mof::KalmanParams only{0.5, 0.25, 2.0, 10.0};
  const auto t = mof::lkf_tune(windows, {only});
  EXPECT_EQ(t.best, only);
  ASSERT_EQ(t.table.size(), 1u);
}

TEST(LkfTuneTest, PicksArgminAndFirstOnTies)
{
  const auto windows = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 5, 2.0, 2), 30, 60, 20);
  const auto grid = mof::default_lkf_grid();
  const auto t = mof::lkf_tune(windows, grid);
  ASSERT_EQ(t.table.size(), grid.size());
  double best = t.table[0].second;
  std::size_t at = 0;
  for (std::size_t i = 1; i < t.table.size(); ++i) {
    EXPECT_EQ(t.table[i].second, mof::lkf_validation_ade(windows, grid[i], mof::Execution::serial));
    if (t.table[i].second < best) {
      best = t.table[i].second;
      at = i;
    }
  }
  EXPECT_EQ(t.best, grid[at]);

  const auto dup = mof::lkf_tune(windows, {grid[at], grid[at]});
  EXPECT_EQ(dup.best, grid[at]);
  EXPECT_THROW(mof::lkf_tune({}, grid), mof::DataError);
  EXPECT_THROW(mof::lkf_tune(windows, {}), mof::DataError);
}

TEST(LkfTuneTest, BeatsConstantVelocityUnderNoise)
{
  const auto windows = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::constant_velocity, 20, 2.0, 5),
                                                30, 60, 30);
  const auto t = mof::lkf_tune(windows, mof::default_lkf_grid());
  std::vector<mof::WindowErrors> cv;
  for (const auto & w : windows) cv.push_back(mof::evaluate_window(mof::cv_cs_forecast(w), w));
  const double best = std::min_element(t.table.begin(), t.table.end(), [](auto & a, auto & b) {
                        return a.second < b.second;
                      })->second;
  EXPECT_LE(best, mof::aggregate(cv).ade);
}

TEST(KalmanJsonTest, ParamsAndGridRoundTrip)
{
  mof::testing::TempDir dir;
  const mof::KalmanParams p{0.1, 0.2, 0.30000000000000004, 7.0};
  mof::save_kalman_params(dir / "k.json", p);
  EXPECT_EQ(mof::load_kalman_params(dir / "k.json"), p);

  const auto grid = mof::default_lkf_grid();
  mof::save_kalman_grid(dir / "grid.json", grid);
  EXPECT_EQ(mof::load_kalman_grid(dir / "grid.json"), grid);

  mof::testing::write_file(dir / "axes.json", R"({"process_noise_pos":[1,2],"process_noise_vel":[3],
    "observation_noise":[4,5],"initial_velocity_variance":[6]})");
  const auto axes = mof::load_kalman_grid(dir / "axes.json");
  ASSERT_EQ(axes.size(), 4u);
  EXPECT_EQ(axes[1], (mof::KalmanParams{1, 3, 5, 6}));

  mof::testing::write_file(dir / "empty.json", R"({"grid":[]})");
  EXPECT_THROW(mof::load_kalman_grid(dir / "empty.json"), mof::DataError);
  mof::testing::write_file(dir / "neg.json", R"({"process_noise_pos":-1,"process_noise_vel":1,
    "observation_noise":1,"initial_velocity_variance":1})");
  EXPECT_THROW(mof::load_kalman_params(dir / "neg.json"), mof::DataError);
}
