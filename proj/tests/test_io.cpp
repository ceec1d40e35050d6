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
#include "mof/io.hpp"
#include "mof/sted/flow.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <sstream>

namespace
{

const std::string kHeader = "video_id,city,weather,time_of_day,frame,track_id,cx,cy,w,h\n";

std::vector<mof::Track> parse(const std::string & text)
{
  std::istringstream in(text);
  return mof::parse_tracks(in, "mem.csv");
}

std::string error_of(const std::string & text)
{
  try {
    parse(text);
  } catch (const mof::DataError & e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(LoadTracksTest, MinimalFile)
{
  const auto tracks = parse(kHeader + "v,Paris,Sun,Day,0,3,10,20,4,8\n"
                                      "v,Paris,Sun,Day,1,3,11,20,4,8\n"
                                      "v,Paris,Sun,Day,2,3,12,20,4,8\n");
  ASSERT_EQ(tracks.size(), 1u);
  EXPECT_EQ(tracks[0].boxes.size(), 3u);
  EXPECT_EQ(tracks[0].track_id, 3);
  EXPECT_EQ(tracks[0].start_frame, 0);
  EXPECT_EQ(tracks[0].metadata, (mof::Metadata{"Paris", "Sun", "Day"}));
  EXPECT_EQ(tracks[0].boxes[2], (mof::BBox{12, 20, 4, 8}));
}

TEST(LoadTracksTest, GapIsRejected)
{
  const auto msg = error_of(kHeader + "v,P,S,D,0,1,1,1,1,1\nv,P,S,D,1,1,1,1,1,1\nv,P,S,D,3,1,1,1,1,1\n");
  EXPECT_NE(msg.find("non-consecutive frames"), std::string::npos) << msg;
  EXPECT_NE(msg.find("mem.csv:4"), std::string::npos) << msg;
}

TEST(LoadTracksTest, DegenerateBoxIsRejected)
{
  const auto msg = error_of(kHeader + "v,P,S,D,0,1,1,1,0,1\n");
  EXPECT_NE(msg.find("degenerate box"), std::string::npos) << msg;
}

TEST(LoadTracksTest, MalformedInputs)
{
  EXPECT_NE(error_of(kHeader + "v,P,S,D,0,1,1,1,1\n").find("malformed row"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "v,P,S,D,0,1,abc,1,1,1\n").find("malformed number"), std::string::npos);
  EXPECT_NE(error_of("frame,cx\n0,1\n").find("unexpected header"), std::string::npos);
  EXPECT_NE(error_of("").find("empty track file"), std::string::npos);
  EXPECT_THROW(mof::load_tracks("/nonexistent/tracks.csv"), mof::DataError);
}

TEST(LoadTracksTest, AcceptsBomCrlfAndUnorderedRows)
{
  const auto tracks = parse("\xEF\xBB\xBF" + kHeader.substr(0, kHeader.size() - 1) + "\r\n" +
                            "v,P,S,D,11,1,2,1,1,1\r\nw,Q,R,N,5,2,9,9,2,2\r\nv,P,S,D,10,1,1,1,1,1\r\n");
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks[0].video_id, "v");
  EXPECT_EQ(tracks[0].start_frame, 10);
  EXPECT_EQ(tracks[0].boxes[1].cx, 2.0);
}

TEST(LoadTracksTest, OcclusionColumn)
{
  const auto tracks = parse("video_id,city,weather,time_of_day,frame,track_id,cx,cy,w,h,occlusion\n"
                            "v,P,S,D,0,1,1,1,1,1,0.25\nv,P,S,D,1,1,1,1,1,1,0.75\n");
  ASSERT_EQ(tracks.size(), 1u);
  EXPECT_EQ(tracks[0].occlusion, (std::vector<double>{0.25, 0.75}));
}

TEST(WriteTracksTest, RoundTripIsExact)
{
  const auto tracks = mof::synth_generate(mof::SynthKind::turning, 6, 2.0, 12);
  std::ostringstream out;
  mof::write_tracks(out, tracks);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto match = std::find_if(back.begin(), back.end(), [&](const mof::Track & t) {
      return t.video_id == tracks[i].video_id && t.track_id == tracks[i].track_id;
    });
    ASSERT_NE(match, back.end());
    EXPECT_EQ(match->boxes, tracks[i].boxes);
    EXPECT_EQ(match->start_frame, tracks[i].start_frame);
    EXPECT_EQ(match->metadata, tracks[i].metadata);
  }
}

TEST(FormatDoubleTest, ShortestRoundTrip)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng);
    EXPECT_EQ(mof::parse_double(mof::format_double(v), "test"), v);
  }
  EXPECT_EQ(mof::format_double(0.5), "0.5");
  EXPECT_EQ(mof::format_double(3.0), "3");
}

TEST(FlowMagnitudesTest, LoadsPerVideoSeries)
{
  mof::testing::TempDir dir;
  mof::testing::write_file(dir / "flow.csv", "video_id,frame,mean_flow_magnitude\n"
                                             "a,5,0.5\nb,0,2.0\na,6,1.0\nb,1,0.1\n");
  const auto series = mof::load_flow_magnitudes(dir / "flow.csv");
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].video_id, "a");
  EXPECT_EQ(series[0].start_frame, 5);
  EXPECT_EQ(series[0].magnitudes, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(series[1].magnitudes, (std::vector<double>{2.0, 0.1}));

  mof::testing::write_file(dir / "neg.csv", "video_id,frame,mean_flow_magnitude\na,0,-1\n");
  EXPECT_THROW(mof::load_flow_magnitudes(dir / "neg.csv"), mof::DataError);
  mof::testing::write_file(dir / "gap.csv", "video_id,frame,mean_flow_magnitude\na,0,1\na,2,1\n");
  EXPECT_THROW(mof::load_flow_magnitudes(dir / "gap.csv"), mof::DataError);
}

TEST(FlowFeaturesTest, SidecarRoundTrip)
{
  mof::testing::TempDir dir;
  auto windows = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 4, 1.0, 3), 30, 60, 25);
  ASSERT_GE(windows.size(), 4u);
  mof::sted::attach_synthetic_flow(windows, 12);
  windows[1].flow_feature.reset();
  mof::write_flow_features(dir / "flow_index.csv", windows);
  EXPECT_TRUE(std::filesystem::exists(mof::flow_blob_path(dir / "flow_index.csv")));

  auto fresh = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 4, 1.0, 3), 30, 60, 25);
  EXPECT_EQ(mof::attach_flow_features(dir / "flow_index.csv", fresh, 12), windows.size() - 1);
  EXPECT_FALSE(fresh[1].flow_feature.has_value());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i == 1) continue;
    EXPECT_EQ(*fresh[i].flow_feature, *windows[i].flow_feature);
  }
  EXPECT_THROW(mof::attach_flow_features(dir / "flow_index.csv", fresh, 16), mof::DataError);
}

TEST(SplitConfigTest, SaveLoadAndValidation)
{
  mof::testing::TempDir dir;
  const auto config = mof::synth_split_config();
  mof::save_split_config(dir / "splits.json", config);
  const auto back = mof::load_split_config(dir / "splits.json");
  EXPECT_EQ(back.folds, config.folds);
  EXPECT_EQ(back.val_fraction, config.val_fraction);

  mof::testing::write_file(dir / "dup.json", R"({"folds":{"0":["A"],"1":["A"]}})");
  EXPECT_THROW(mof::load_split_config(dir / "dup.json"), mof::DataError);
  mof::testing::write_file(dir / "fold.json", R"({"folds":{"5":["A"]}})");
  EXPECT_THROW(mof::load_split_config(dir / "fold.json"), mof::DataError);
  mof::testing::write_file(dir / "frac.json", R"({"folds":{"0":["A"]},"val_fraction":1.5})");
  EXPECT_THROW(mof::load_split_config(dir / "frac.json"), mof::DataError);
  mof::testing::write_file(dir / "bad.json", "{not json");
  EXPECT_THROW(mof::load_split_config(dir / "bad.json"), mof::DataError);
}
