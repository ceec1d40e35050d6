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

#ifndef MOF__CORE_HPP_
#define MOF__CORE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mof
{

/// Number of observed frames per sample (1 s at 30 Hz).
inline constexpr int kObservedFrames = 30;
/// Number of forecast frames per sample (2 s at 30 Hz).
inline constexpr int kForecastFrames = 60;
/// Minimum track length kept by default (3 s at 30 Hz).
inline constexpr int kMinTrackFrames = 90;
/// Frames spanned by the centroid velocity estimate: v = (b_t - b_{t-4}) / 4.
inline constexpr int kVelocityLag = 4;

/**
 * @brief Axis-aligned box stored as centroid and size, in pixels.
 *
 * Valid boxes have w > 0, h > 0 and finite fields. Construction does not
 * validate; ingestion paths call validate().
 */
struct BBox
{
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x1() const { return cx - 0.5 * w; }
  double x2() const { return cx + 0.5 * w; }
  double y1() const { return cy - 0.5 * h; }
  double y2() const { return cy + 0.5 * h; }

  bool is_valid() const;

  friend bool operator==(const BBox &, const BBox &) = default;
};

/// Throws DataError("degenerate box ...") when the box is not valid.
void validate(const BBox & box, const std::string & context);

/// Intersection over union of two valid boxes, in [0, 1].
double iou(const BBox & a, const BBox & b);

/// Euclidean distance between box centroids.
double centroid_distance(const BBox & a, const BBox & b);

/// Free-form per-clip annotations. Empty strings mean "not annotated".
struct Metadata
{
  std::string city;
  std::string weather;
  std::string time_of_day;

  friend bool operator==(const Metadata &, const Metadata &) = default;
};

enum class MetadataField { city, weather, time_of_day };

const std::string & metadata_value(const Metadata & meta, MetadataField field);
std::string to_string(MetadataField field);
MetadataField parse_metadata_field(const std::string & name);

/// One pedestrian's boxes over consecutive frames, starting at start_frame.
struct Track
{
  std::string video_id;
  std::int64_t track_id = 0;
  std::int64_t start_frame = 0;
  std::vector<BBox> boxes;
  Metadata metadata;
  /// Optional per-box occlusion fraction; empty when the source has no column.
  std::vector<double> occlusion;

  std::int64_t frame_of(std::size_t offset) const
  {
    return start_frame + static_cast<std::int64_t>(offset);
  }
  std::int64_t end_frame() const { return frame_of(boxes.size()) - 1; }
};

struct WindowSource
{
  std::string video_id;
  std::int64_t track_id = 0;
  std::int64_t anchor_frame = 0;

  friend bool operator==(const WindowSource &, const WindowSource &) = default;
  friend auto operator<=>(const WindowSource &, const WindowSource &) = default;
};

/// Sample unit: observed frames t-29..t, future frames t+1..t+60.
struct ObservationWindow
{
  WindowSource source;
  std::vector<BBox> observed;
  std::vector<BBox> future;
  std::optional<std::vector<float>> flow_feature;
  Metadata metadata;

  const BBox & anchor_box() const { return observed.back(); }
};

/// Throws DataError when a window violates its length or finiteness invariants.
void validate(const ObservationWindow & window, std::optional<std::size_t> flow_dim = std::nullopt);

struct Forecast
{
  WindowSource source;
  std::vector<BBox> boxes;
  std::string model_id;
};

/**
 * @brief Per-frame centroid velocity at the anchor, (c_t - c_{t-4}) / 4.
 *
 * Shared by the constant-velocity baseline and the residual decoder so both
 * extrapolate through the exact same arithmetic.
 */
struct Velocity
{
  double vx = 0.0;
  double vy = 0.0;
};
Velocity anchor_velocity(const std::vector<BBox> & observed);

/// Constant-velocity, constant-scale extrapolation k frames past the anchor.
BBox cv_extrapolate(const BBox & anchor, const Velocity & v, int k);

}  // namespace mof

#endif  // MOF__CORE_HPP_
