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

#include "mof/data.hpp"
#include "mof/error.hpp"
#include "mof/harness.hpp"
#include "mof/io.hpp"
#include "mof/sted/checkpoint.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <sstream>

namespace
{

struct Dataset
{
  mof::testing::TempDir dir;
  std::filesystem::path tracks;
  std::filesystem::path splits;
};

std::unique_ptr<Dataset> make_dataset(mof::SynthKind kind, int n, double noise, std::uint64_t seed)
{
  auto d = std::make_unique<Dataset>();
  d->tracks = d->dir / "tracks.csv";
  d->splits = d->dir / "splits.json";
  mof::write_tracks(d->tracks, mof::synth_generate(kind, n, noise, seed));
  mof::save_split_config(d->splits, mof::synth_split_config());
  return d;
}

mof::ExperimentSpec spec_for(const Dataset & d, mof::ModelKind model)
{
  mof::ExperimentSpec spec;
  spec.tracks = d.tracks;
  spec.splits = d.splits;
  spec.model = model;
  spec.out = d.dir / "runs";
  spec.train_stride = 20;
  spec.eval_stride = 20;
  spec.train.hidden = 8;
  spec.train.embed = 4;
  spec.train.epochs = 1;
  spec.train.batch_size = 16;
  return spec;
}

}  // namespace

TEST(ExperimentSpecTest, JsonRoundTripAndHash)
{
  const auto d = make_dataset(mof::SynthKind::constant_velocity, 6, 0.0, 1);
  auto spec = spec_for(*d, mof::ModelKind::sted);
  spec.flow_dim = 64;
  spec.synthetic_flow = true;
  const auto back = mof::experiment_spec_from_json(mof::to_json(spec));
  EXPECT_EQ(mof::to_json(back), mof::to_json(spec));
  EXPECT_EQ(mof::spec_hash(back), mof::spec_hash(spec));
  EXPECT_EQ(mof::spec_hash(spec).size(), 16u);
  spec.train.seed = 1;
  EXPECT_NE(mof::spec_hash(back), mof::spec_hash(spec));
}

TEST(ExperimentSpecTest, ValidationNamesTheProblem)
{
  const auto d = make_dataset(mof::SynthKind::constant_velocity, 6, 0.0, 1);
  auto spec = spec_for(*d, mof::ModelKind::cv_cs);
  EXPECT_NO_THROW(spec.validate());
  spec.fold = 3;
  EXPECT_THROW(spec.validate(), mof::DataError);
  spec.fold = 0;
  spec.min_track_frames = 60;
  EXPECT_THROW(spec.validate(), mof::DataError);
  spec.min_track_frames = 90;
  spec.tracks = d->dir / "missing.csv";
  try {
    spec.validate();
    FAIL() << "expected DataError";
  } catch (const mof::DataError & e) {
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
  EXPECT_THROW(mof::parse_model_kind("rnn"), mof::DataError);
}

TEST(RunFoldTest, ConstantVelocityBaselineIsExactOnLinearTracks)
{
  const auto d = make_dataset(mof::SynthKind::constant_velocity, 60, 0.0, 2);
  const auto result = mof::run_fold(spec_for(*d, mof::ModelKind::cv_cs));
  EXPECT_LE(result.test.ade, 1e-9);
  EXPECT_GT(result.test.n_windows, 0u);
  EXPECT_TRUE(result.audit.ok());
  for (const auto * name : {"summary.csv", "curve.csv", "manifest.json", "breakdown_city.csv",
                            "breakdown_weather.csv", "breakdown_time_of_day.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(result.run_dir / name)) << name;
  }
  const auto manifest = nlohmann::json::parse(mof::testing::read_file(result.run_dir / "manifest.json"));
  EXPECT_EQ(manifest.at("fold").get<int>(), 0);
  EXPECT_TRUE(manifest.contains("versions"));
  EXPECT_TRUE(manifest.contains("city_audit"));
}

TEST(RunFoldTest, HeldOutCitiesNeverAppearInTraining)
{
  const auto d = make_dataset(mof::SynthKind::turning, 30, 1.0, 3);
  for (int fold = 0; fold < 3; ++fold) {
    auto spec = spec_for(*d, mof::ModelKind::cv_cs);
    spec.fold = fold;
    const auto r = mof::run_fold(spec);
    EXPECT_TRUE(r.audit.ok());
    for (const auto & city : r.audit.held_out) EXPECT_EQ(r.audit.train.count(city), 0u);
    EXPECT_NE(r.audit.summary().find("overlap 0"), std::string::npos);
  }
}

TEST(RunFoldTest, UntrainedStedReproducesConstantVelocity)
{
  const auto d = make_dataset(mof::SynthKind::turning, 30, 1.0, 4);
  auto spec = spec_for(*d, mof::ModelKind::sted);
  spec.untrained = true;
  const auto sted = mof::run_fold(spec);
  const auto cv = mof::run_fold(spec_for(*d, mof::ModelKind::cv_cs));
  EXPECT_NEAR(sted.test.ade, cv.test.ade, 1e-9);
  EXPECT_NEAR(sted.test.aiou, cv.test.aiou, 1e-9);
  EXPECT_NE(sted.run_dir, cv.run_dir);
}

TEST(RunFoldTest, RepeatedRunsAgreeAndGetDistinctDirectories)
{
  const auto d = make_dataset(mof::SynthKind::turning, 24, 1.0, 5);
  const auto spec = spec_for(*d, mof::ModelKind::sted);
  const auto a = mof::run_fold(spec);
  const auto b = mof::run_fold(spec);
  EXPECT_EQ(a.test.ade, b.test.ade);
  EXPECT_NE(a.run_dir, b.run_dir);
  ASSERT_TRUE(a.sted_model && b.sted_model);
  EXPECT_EQ(mof::sted::weight_checksum(a.sted_model->params), mof::sted::weight_checksum(b.sted_model->params));
  EXPECT_EQ(mof::testing::read_file(a.run_dir / "checkpoint.mofc"),
            mof::testing::read_file(b.run_dir / "checkpoint.mofc"));
}

TEST(RunFoldTest, KalmanBaselineIsTunedAndSaved)
{
  const auto d = make_dataset(mof::SynthKind::constant_velocity, 30, 2.0, 6);
  const auto r = mof::run_fold(spec_for(*d, mof::ModelKind::lkf));
  ASSERT_TRUE(r.kalman.has_value());
  EXPECT_EQ(mof::load_kalman_params(r.run_dir / "kalman.json"), *r.kalman);
  EXPECT_TRUE(std::filesystem::exists(r.run_dir / "lkf_tuning.json"));
}

TEST(RunAllFoldsTest, MeanIsTheAverageOfFolds)
{
  const auto d = make_dataset(mof::SynthKind::turning, 60, 1.0, 7);
  const auto all = mof::run_all_folds(spec_for(*d, mof::ModelKind::cv_cs));
  ASSERT_EQ(all.folds.size(), 3u);
  double ade = 0.0;
  double fiou = 0.0;
  for (const auto & f : all.folds) {
    ade += f.test.ade;
    fiou += f.test.fiou;
  }
  EXPECT_NEAR(all.mean.ade, ade / 3, 1e-12);
  EXPECT_NEAR(all.mean.fiou, fiou / 3, 1e-12);
}

TEST(RunAllFoldsTest, UnknownCityFailsBeforeAnyTraining)
{
  const auto d = make_dataset(mof::SynthKind::turning, 12, 1.0, 8);
  auto tracks = mof::load_tracks(d->tracks);
  tracks.back().metadata.city = "Atlantis";
  mof::write_tracks(d->tracks, tracks);
  auto spec = spec_for(*d, mof::ModelKind::sted);
  try {
    mof::run_all_folds(spec);
    FAIL() << "expected DataError";
  } catch (const mof::DataError & e) {
    EXPECT_NE(std::string(e.what()).find("Atlantis"), std::string::npos);
  }
  EXPECT_FALSE(std::filesystem::exists(spec.out));
}

TEST(CrossEvalTest, MatchesDirectEvaluationAndLeavesWeightsAlone)
{
  const auto train = make_dataset(mof::SynthKind::turning, 60, 1.0, 9);
  const auto fold = mof::run_fold(spec_for(*train, mof::ModelKind::sted));
  const auto target = make_dataset(mof::SynthKind::accelerating, 10, 1.0, 10);
  mof::CrossEvalOptions options;
  options.stride = 15;
  const auto r = mof::cross_eval(fold.run_dir / "checkpoint.mofc", target->tracks, options);
  EXPECT_EQ(r.checksum_before, r.checksum_after);

  const auto windows = mof::extract_all_windows(mof::filter_short_tracks(mof::load_tracks(target->tracks)), 30, 60,
                                                15);
  const auto forecasts = mof::run_forecaster(mof::ModelKind::sted, windows, fold.sted_model, std::nullopt);
  std::vector<mof::WindowErrors> errs;
  for (std::size_t i = 0; i < windows.size(); ++i) errs.push_back(mof::evaluate_window(forecasts[i], windows[i]));
  const auto direct = mof::aggregate(errs);
  EXPECT_EQ(r.report.n_windows, windows.size());
  EXPECT_NEAR(r.report.ade, direct.ade, 1e-12);
  EXPECT_EQ(r.breakdowns.count("city"), 1u);
}

TEST(CrossEvalTest, ReportsMissingWindowsAndFlow)
{
  const auto d = make_dataset(mof::SynthKind::turning, 12, 1.0, 11);
  auto spec = spec_for(*d, mof::ModelKind::sted);
  const auto fold = mof::run_fold(spec);
  mof::testing::write_file(d->dir / "short.csv", "video_id,city,weather,time_of_day,frame,track_id,cx,cy,w,h\n"
                                                 "v,A,S,D,0,1,1,1,1,1\n");
  try {
    mof::cross_eval(fold.run_dir / "checkpoint.mofc", d->dir / "short.csv");
    FAIL() << "expected DataError";
  } catch (const mof::DataError & e) {
    EXPECT_NE(std::string(e.what()).find("no windows after filtering"), std::string::npos);
  }

  spec.train.variant = mof::sted::Variant::both;
  spec.synthetic_flow = true;
  spec.flow_dim = 8;
  const auto flow_fold = mof::run_fold(spec);
  try {
    mof::cross_eval(flow_fold.run_dir / "checkpoint.mofc", d->tracks);
    FAIL() << "expected DataError";
  } catch (const mof::DataError & e) {
    EXPECT_NE(std::string(e.what()).find("bb_only"), std::string::npos);
  }
  mof::CrossEvalOptions options;
  options.synthetic_flow = true;
  options.stride = 20;
  EXPECT_NO_THROW(mof::cross_eval(flow_fold.run_dir / "checkpoint.mofc", d->tracks, options));
}

TEST(RunForecasterTest, RequiresTheMatchingModel)
{
  const auto windows =
    mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 2, 1.0, 12), 30, 60, 30);
  EXPECT_THROW(mof::run_forecaster(mof::ModelKind::sted, windows, std::nullopt, std::nullopt), mof::DataError);
  EXPECT_THROW(mof::run_forecaster(mof::ModelKind::lkf, windows, std::nullopt, std::nullopt), mof::DataError);
  EXPECT_EQ(mof::run_forecaster(mof::ModelKind::cv_cs, windows, std::nullopt, std::nullopt).size(), windows.size());
}
