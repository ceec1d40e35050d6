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

#include "mof/error.hpp"
#include "mof/metrics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using mof::testing::box;

namespace
{

std::vector<mof::BBox> constant(const mof::BBox & b, int n = mof::kForecastFrames)
{
  return std::vector<mof::BBox>(static_cast<std::size_t>(n), b);
}

/// Random per-window errors with a fixed forecast length.
mof::WindowErrors random_errors(std::mt19937_64 & rng, int steps = mof::kForecastFrames)
{
  std::uniform_real_distribution<double> d(0.0, 50.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mof::WindowErrors e;
  for (int k = 0; k < steps; ++k) {
    e.displacements.push_back(d(rng));
    e.ious.push_back(u(rng));
  }
  return e;
}

mof::ObservationWindow window_in(const std::string & city, const std::string & weather)
{
  auto w = mof::testing::window_from([](int i) { return box(i, 0, 2, 2); }, city);
  w.metadata.weather = weather;
  return w;
}

}  // namespace

TEST(EvaluateWindowTest, PerfectForecast)
{
  const auto gt = constant(box(5, 5, 10, 10));
  const auto r = mof::aggregate({mof::evaluate_window(gt, gt)});
  EXPECT_EQ(r.ade, 0.0);
  EXPECT_EQ(r.fde, 0.0);
  EXPECT_EQ(r.aiou, 1.0);
  EXPECT_EQ(r.fiou, 1.0);
  EXPECT_EQ(r.n_windows, 1u);
}

TEST(EvaluateWindowTest, ShiftedAndDisjointForecasts)
{
  const auto gt = constant(box(0, 0, 100, 100));
  auto e = mof::evaluate_window(constant(box(3, 4, 100, 100)), gt);
  for (double d : e.displacements) EXPECT_EQ(d, 5.0);

  e = mof::evaluate_window(constant(box(1000, 0, 100, 100)), gt);
  for (double iou : e.ious) EXPECT_EQ(iou, 0.0);
}

TEST(EvaluateWindowTest, OnlyFinalStepOff)
{
  auto pred = constant(box(0, 0, 2, 2));
  const auto gt = pred;
  pred.back() = box(5, 0, 2, 2);
  const auto r = mof::aggregate({mof::evaluate_window(pred, gt)});
  EXPECT_NEAR(r.ade, 5.0 / 60.0, 1e-15);
  EXPECT_EQ(r.fde, 5.0);
  EXPECT_EQ(r.fiou, 0.0);
  EXPECT_NEAR(r.aiou, 59.0 / 60.0, 1e-15);
}

TEST(EvaluateWindowTest, HalfOfWindowsPerfect)
{
  const auto gt = constant(box(0, 0, 2, 2));
  const auto far = constant(box(100, 0, 2, 2));
  const auto r = mof::aggregate({mof::evaluate_window(gt, gt), mof::evaluate_window(far, gt)});
  EXPECT_EQ(r.aiou, 0.5);
  EXPECT_EQ(r.iou_curve.size(), 60u);
  EXPECT_EQ(r.iou_curve[17], 0.5);
}

TEST(EvaluateWindowTest, LengthMismatchAndEmptyInputThrow)
{
  EXPECT_THROW(mof::evaluate_window(constant(box(0, 0, 1, 1), 59), constant(box(0, 0, 1, 1))), mof::DataError);
  EXPECT_THROW(mof::aggregate({}), mof::DataError);
  EXPECT_THROW(mof::mean_report({}), mof::DataError);
}

TEST(AggregateTest, MatchesDirectPooledOracle)
{
  std::mt19937_64 rng(3);
  std::vector<mof::WindowErrors> errs;
  for (int i = 0; i < 17; ++i) errs.push_back(random_errors(rng));
  const auto r = mof::aggregate(errs);
  double d = 0.0;
  double u = 0.0;
  for (const auto & e : errs) {
    for (int k = 0; k < 60; ++k) {
      d += e.displacements[k];
      u += e.ious[k];
    }
  }
  EXPECT_NEAR(r.ade, d / (17 * 60), 1e-12);
  EXPECT_NEAR(r.aiou, u / (17 * 60), 1e-12);
  double last = 0.0;
  for (const auto & e : errs) last += e.displacements.back();
  EXPECT_NEAR(r.fde, last / 17, 1e-12);
}

TEST(AggregateTest, AssociativeOverEqualSizedParts)
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<mof::WindowErrors> a, b, all;
    for (int i = 0; i < 6; ++i) a.push_back(random_errors(rng));
    for (int i = 0; i < 6; ++i) b.push_back(random_errors(rng));
    all = a;
    all.insert(all.end(), b.begin(), b.end());
    const auto whole = mof::aggregate(all);
    const auto parts = mof::mean_report({mof::aggregate(a), mof::aggregate(b)});
    EXPECT_NEAR(whole.ade, parts.ade, 1e-9);
    EXPECT_NEAR(whole.aiou, parts.aiou, 1e-12);
    EXPECT_NEAR(whole.fiou, parts.fiou, 1e-12);
    for (int k = 0; k < 60; ++k) EXPECT_NEAR(whole.displacement_curve[k], parts.displacement_curve[k], 1e-9);
  }
}

TEST(AggregateTest, InvariantUnderJointTranslation)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<mof::BBox> p, g, ps, gs;
    const double dx = shift(rng);
    const double dy = shift(rng);
    for (int k = 0; k < 60; ++k) {
      p.push_back(mof::testing::random_box(rng));
      g.push_back(mof::testing::random_box(rng));
      ps.push_back(box(p.back().cx + dx, p.back().cy + dy, p.back().w, p.back().h));
      gs.push_back(box(g.back().cx + dx, g.back().cy + dy, g.back().w, g.back().h));
    }
    const auto a = mof::aggregate({mof::evaluate_window(p, g)});
    const auto b = mof::aggregate({mof::evaluate_window(ps, gs)});
    EXPECT_NEAR(a.ade, b.ade, 1e-9);
    EXPECT_NEAR(a.aiou, b.aiou, 1e-9);
  }
}

TEST(MeanReportTest, AveragesEveryField)
{
  mof::MetricReport a;
  a.ade = 1;
  a.fde = 2;
  a.aiou = 0.2;
  a.fiou = 0.1;
  a.displacement_curve = {1, 2};
  a.iou_curve = {0.5, 0.25};
  a.n_windows = 3;
  mof::MetricReport b = a;
  b.ade = 3;
  b.displacement_curve = {3, 4};
  b.n_windows = 5;
  const auto m = mof::mean_report({a, b});
  EXPECT_EQ(m.ade, 2.0);
  EXPECT_EQ(m.fde, 2.0);
  EXPECT_EQ(m.displacement_curve, (std::vector<double>{2, 3}));
  EXPECT_EQ(m.n_windows, 8u);
  b.iou_curve = {0.1};
  EXPECT_THROW(mof::mean_report({a, b}), mof::DataError);
}

TEST(BreakdownTest, GroupsSortedByAverageIouDescending)
{
  const auto gt = constant(box(0, 0, 2, 2));
  const auto good = mof::evaluate_window(gt, gt);
  const auto bad = mof::evaluate_window(constant(box(1, 0, 2, 2)), gt);
  const std::vector<mof::ObservationWindow> windows = {window_in("A", "Sun"), window_in("B", "Rain"),
                                                       window_in("B", "Sun")};
  const auto by_city = mof::breakdown({bad, good, good}, windows, mof::MetadataField::city);
  ASSERT_EQ(by_city.size(), 2u);
  EXPECT_EQ(by_city[0].group_key, "B");
  EXPECT_EQ(by_city[0].n_windows, 2u);
  EXPECT_EQ(by_city[0].aiou, 1.0);
  EXPECT_EQ(by_city[1].group_key, "A");
  EXPECT_NEAR(by_city[1].aiou, 1.0 / 3.0, 1e-12);

  const auto by_weather = mof::breakdown({bad, good, good}, windows, mof::MetadataField::weather);
  EXPECT_EQ(by_weather[0].group_key, "Rain");
}

TEST(BreakdownTest, GroupsPartitionTheWindows)
{
  std::mt19937_64 rng(12);
  const std::vector<std::string> cities = {"A", "B", "C", "D"};
  std::vector<mof::WindowErrors> errs;
  std::vector<mof::ObservationWindow> windows;
  for (int i = 0; i < 40; ++i) {
    errs.push_back(random_errors(rng));
    windows.push_back(window_in(cities[rng() % cities.size()], "Sun"));
  }
  const auto groups = mof::breakdown(errs, windows, mof::MetadataField::city);
  std::size_t total = 0;
  double weighted = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    total += groups[g].n_windows;
    weighted += groups[g].ade * static_cast<double>(groups[g].n_windows);
    if (g > 0) EXPECT_GE(groups[g - 1].aiou, groups[g].aiou);
  }
  EXPECT_EQ(total, 40u);
  EXPECT_NEAR(weighted / 40.0, mof::aggregate(errs).ade, 1e-9);
}

TEST(BreakdownTest, MissingMetadataIsAnError)
{
  const auto gt = constant(box(0, 0, 2, 2));
  auto w = window_in("A", "");
  try {
    mof::breakdown({mof::evaluate_window(gt, gt)}, {w}, mof::MetadataField::weather);
    FAIL() << "expected DataError";
  } catch (const mof::DataError & e) {
    EXPECT_NE(std::string(e.what()).find("no weather metadata"), std::string::npos);
  }
  EXPECT_THROW(mof::breakdown({}, {w}, mof::MetadataField::city), mof::DataError);
}

TEST(ReportFilesTest, SummaryAndCurveCsv)
{
  mof::testing::TempDir dir;
  const auto gt = constant(box(0, 0, 2, 2));
  auto r = mof::aggregate({mof::evaluate_window(gt, gt)});
  mof::write_summary_csv(dir / "summary.csv", "cv_cs", {r});
  EXPECT_EQ(mof::testing::read_file(dir / "summary.csv"),
            "model,group,n_windows,ade,fde,aiou,fiou\ncv_cs,all,1,0,0,1,1\n");
  mof::write_curve_csv(dir / "curve.csv", r);
  const auto curve = mof::testing::read_file(dir / "curve.csv");
  EXPECT_EQ(curve.rfind("step,mean_displacement,mean_iou\n1,0,1\n", 0), 0u);
  EXPECT_NE(curve.find("\n60,0,1\n"), std::string::npos);
}
