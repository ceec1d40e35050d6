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

#include "mof/core.hpp"

#include "mof/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mof
{

bool BBox::is_valid() const
{
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

void validate(const BBox & box, const std::string & context)
{
  if (!box.is_valid()) {
    std::ostringstream msg;
    msg << "degenerate box (" << box.cx << ", " << box.cy << ", " << box.w << ", " << box.h
        << ") at " << context;
    throw DataError(msg.str());
  }
}

double iou(const BBox & a, const BBox & b)
{
  const double ax1 = a.x1(), ax2 = a.x2(), ay1 = a.y1(), ay2 = a.y2();
  const double bx1 = b.x1(), bx2 = b.x2(), by1 = b.y1(), by2 = b.y2();
  const double iw = std::min(ax2, bx2) - std::max(ax1, bx1);
  const double ih = std::min(ay2, by2) - std::max(ay1, by1);
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  // Areas from the same corner values as the intersection, so iou(a, a) == 1 exactly.
  const double area_a = (ax2 - ax1) * (ay2 - ay1);
  const double area_b = (bx2 - bx1) * (by2 - by1);
  const double inter = iw * ih;
  return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
}

double centroid_distance(const BBox & a, const BBox & b)
{
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

const std::string & metadata_value(const Metadata & meta, MetadataField field)
{
  switch (field) {
    case MetadataField::city:
      return meta.city;
    case MetadataField::weather:
      return meta.weather;
    case MetadataField::time_of_day:
      return meta.time_of_day;
  }
  return meta.city;
}

std::string to_string(MetadataField field)
{
  switch (field) {
    case MetadataField::city:
      return "city";
    case MetadataField::weather:
      return "weather";
    case MetadataField::time_of_day:
      return "time_of_day";
  }
  return "city";
}

MetadataField parse_metadata_field(const std::string & name)
{
  if (name == "city") return MetadataField::city;
  if (name == "weather") return MetadataField::weather;
  if (name == "time_of_day") return MetadataField::time_of_day;
  throw DataError("unknown metadata field '" + name + "'");
}

void validate(const ObservationWindow & window, std::optional<std::size_t> flow_dim)
{
  std::ostringstream where;
  where << window.source.video_id << "/" << window.source.track_id << "@"
        << window.source.anchor_frame;
  if (window.observed.size() != static_cast<std::size_t>(kObservedFrames)) {
    throw DataError("window " + where.str() + " has " + std::to_string(window.observed.size()) +
                    " observed boxes, expected " + std::to_string(kObservedFrames));
  }
  if (window.future.size() != static_cast<std::size_t>(kForecastFrames)) {
    throw DataError("window " + where.str() + " has " + std::to_string(window.future.size()) +
                    " future boxes, expected " + std::to_string(kForecastFrames));
  }
  for (const auto & box : window.observed) validate(box, "window " + where.str());
  for (const auto & box : window.future) validate(box, "window " + where.str());
  if (window.flow_feature) {
    if (flow_dim && window.flow_feature->size() != *flow_dim) {
      throw DataError("window " + where.str() + " flow feature has length " +
                      std::to_string(window.flow_feature->size()) + ", expected " +
                      std::to_string(*flow_dim));
    }
    for (float v : *window.flow_feature) {
      if (!std::isfinite(v)) throw DataError("window " + where.str() + " has non-finite flow feature");
    }
  }
}

Velocity anchor_velocity(const std::vector<BBox> & observed)
{
  if (observed.size() <= static_cast<std::size_t>(kVelocityLag)) {
    throw DataError("velocity needs at least " + std::to_string(kVelocityLag + 1) + " observed boxes");
  }
  const BBox & now = observed.back();
  const BBox & then = observed[observed.size() - 1 - kVelocityLag];
  return {(now.cx - then.cx) / kVelocityLag, (now.cy - then.cy) / kVelocityLag};
}

BBox cv_extrapolate(const BBox & anchor, const Velocity & v, int k)
{
  return {anchor.cx + k * v.vx, anchor.cy + k * v.vy, anchor.w, anchor.h};
}

}  // namespace mof
