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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>
#include <sstream>

namespace mof
{

std::vector<Track> filter_short_tracks(const std::vector<Track> & tracks, int min_frames)
{
  if (min_frames < 1) {
    throw DataError("min_frames must be >= 1");
  }
  std::vector<Track> kept;
  for (const auto & track : tracks) {
    if (track.boxes.size() >= static_cast<std::size_t>(min_frames)) {
      kept.push_back(track);
    }
  }
  return kept;
}

std::vector<Track> filter_occluded_tracks(const std::vector<Track> & tracks, double max_fraction)
{
  std::vector<Track> kept;
  for (const auto & track : tracks) {
    const bool too_occluded = std::any_of(
      track.occlusion.begin(), track.occlusion.end(), [&](double o) { return o > max_fraction; });
    if (!too_occluded) {
      kept.push_back(track);
    }
  }
  return kept;
}

std::vector<ObservationWindow> extract_windows(const Track & track, int p, int q, int stride)
{
  if (stride < 1 || p < 1 || q < 1) {
    throw DataError("window extraction needs p, q, stride >= 1");
  }
  std::vector<ObservationWindow> windows;
  const auto n = static_cast<std::int64_t>(track.boxes.size());
  for (std::int64_t anchor = p - 1; anchor + q < n; anchor += stride) {
    ObservationWindow w;
    w.source = {track.video_id, track.track_id, track.frame_of(static_cast<std::size_t>(anchor))};
    w.observed.assign(track.boxes.begin() + (anchor - p + 1), track.boxes.begin() + anchor + 1);
    w.future.assign(track.boxes.begin() + anchor + 1, track.boxes.begin() + anchor + 1 + q);
    w.metadata = track.metadata;
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<ObservationWindow> extract_all_windows(
  const std::vector<Track> & tracks, int p, int q, int stride)
{
  std::vector<std::size_t> order(tracks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(tracks[a].video_id, tracks[a].track_id) <
           std::tie(tracks[b].video_id, tracks[b].track_id);
  });

  std::vector<std::vector<ObservationWindow>> per_track(tracks.size());
  const auto n = static_cast<std::int64_t>(order.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    per_track[static_cast<std::size_t>(i)] = extract_windows(tracks[order[i]], p, q, stride);
  }

  std::vector<ObservationWindow> all;
  for (auto & ws : per_track) {
    std::move(ws.begin(), ws.end(), std::back_inserter(all));
  }
  return all;
}

std::vector<ClipInterval> motion_filter_clips(
  const std::vector<double> & flow_magnitudes, double threshold, int clip_frames)
{
  if (clip_frames < 1) {
    throw DataError("clip_frames must be >= 1");
  }
  std::vector<ClipInterval> clips;
  std::int64_t run = 0;
  for (std::size_t i = 0; i < flow_magnitudes.size(); ++i) {
    const double m = flow_magnitudes[i];
    if (!std::isfinite(m) || m < 0.0) {
      throw DataError("flow magnitude at frame " + std::to_string(i) + " is not finite and non-negative");
    }
    if (m > threshold) {
      run = 0;
      continue;
    }
    if (++run == clip_frames) {
      const auto end = static_cast<std::int64_t>(i);
      clips.push_back({end - clip_frames + 1, end});
      run = 0;
    }
  }
  return clips;
}

void SplitConfig::validate() const
{
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw DataError("val_fraction must lie in (0, 1)");
  }
  for (const auto & [city, fold] : folds) {
    if (fold < 0 || fold >= kNumFolds) {
      throw DataError("city '" + city + "' assigned to invalid fold " + std::to_string(fold));
    }
  }
}

double video_hash_unit(const std::string & video_id)
{
  // FNV-1a leaves the high bits nearly blind to the last bytes, so ids that
  // differ only in a trailing counter would cluster. Finalize before scaling.
  std::uint64_t h = fnv1a64(video_id);
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void check_cities_known(const std::vector<Track> & tracks, const SplitConfig & config)
{
  for (const auto & track : tracks) {
    if (!config.folds.contains(track.metadata.city)) {
      throw DataError("city '" + track.metadata.city + "' of track " + track.video_id + "/" +
                      std::to_string(track.track_id) + " is not in the split config");
    }
  }
}

TrackSplit make_splits(const std::vector<Track> & tracks, const SplitConfig & config, int fold)
{
  config.validate();
  if (fold < 0 || fold >= SplitConfig::kNumFolds) {
    throw DataError("fold must be 0, 1 or 2, got " + std::to_string(fold));
  }
  check_cities_known(tracks, config);

  TrackSplit split;
  for (const auto & track : tracks) {
    if (config.folds.at(track.metadata.city) != fold) {
      split.train.push_back(track);
    } else if (video_hash_unit(track.video_id) < config.val_fraction) {
      split.val.push_back(track);
    } else {
      split.test.push_back(track);
    }
  }
  const std::string tag = "fold " + std::to_string(fold) + ": ";
  if (split.train.empty()) split.warnings.push_back(tag + "training set is empty");
  if (split.val.empty()) split.warnings.push_back(tag + "validation set is empty");
  if (split.test.empty()) split.warnings.push_back(tag + "test set is empty");
  return split;
}

SynthKind parse_synth_kind(const std::string & name)
{
  if (name == "constant_velocity") return SynthKind::constant_velocity;
  if (name == "accelerating") return SynthKind::accelerating;
  if (name == "turning") return SynthKind::turning;
  if (name == "stop_and_go") return SynthKind::stop_and_go;
  throw DataError("unknown synthetic kind '" + name + "'");
}

std::string to_string(SynthKind kind)
{
  switch (kind) {
    case SynthKind::constant_velocity:
      return "constant_velocity";
    case SynthKind::accelerating:
      return "accelerating";
    case SynthKind::turning:
      return "turning";
    case SynthKind::stop_and_go:
      return "stop_and_go";
  }
  return "constant_velocity";
}

const std::vector<std::string> & synth_cities()
{
  static const std::vector<std::string> cities = {"Alderbrook", "Brightwater", "Coldharbour",
                                                  "Dunmore",    "Eastwick",    "Fairhaven"};
  return cities;
}

SplitConfig synth_split_config()
{
  SplitConfig config;
  const auto & cities = synth_cities();
  for (std::size_t i = 0; i < cities.size(); ++i) {
    config.folds[cities[i]] = static_cast<int>(i % SplitConfig::kNumFolds);
  }
  return config;
}

namespace
{

constexpr int kTracksPerVideo = 2;
const std::vector<std::string> kWeathers = {"Sun", "Overcast", "Rain", "Snow"};
const std::vector<std::string> kTimesOfDay = {"Day", "Night"};

struct Point
{
  double x;
  double y;
};

}  // namespace

std::vector<Track> synth_generate(SynthKind kind, int n_tracks, double noise_sigma, std::uint64_t seed)
{
  if (n_tracks < 1 || !(noise_sigma >= 0.0)) {
    throw DataError("synth_generate needs n_tracks >= 1 and noise_sigma >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<Track> tracks;
  tracks.reserve(static_cast<std::size_t>(n_tracks));
  for (int i = 0; i < n_tracks; ++i) {
    const int video = i / kTracksPerVideo;
    Track track;
    {
      std::ostringstream id;
      id << "syn" << seed << "-" << to_string(kind) << "-v" << video;
      track.video_id = id.str();
    }
    track.track_id = i;
    track.metadata.city = synth_cities()[static_cast<std::size_t>(video) % synth_cities().size()];
    track.metadata.weather = kWeathers[static_cast<std::size_t>(video) % kWeathers.size()];
    track.metadata.time_of_day = kTimesOfDay[static_cast<std::size_t>(video / 3) % kTimesOfDay.size()];

    const int length = 120 + static_cast<int>(unit(rng) * 61.0);
    track.start_frame = static_cast<std::int64_t>(unit(rng) * 900.0);
    const Point c0{uniform(300.0, 980.0), uniform(250.0, 470.0)};
    const double w0 = uniform(30.0, 80.0);
    const double h0 = w0 * uniform(2.0, 2.6);
    const double scale_rate = uniform(-0.0015, 0.0015);
    const double speed = uniform(0.5, 3.0);
    const double heading = uniform(0.0, 2.0 * std::numbers::pi);
    const Point v{speed * std::cos(heading), speed * std::sin(heading)};

    // Per-kind parameters, drawn up front so every kind consumes the stream alike.
    const double accel = uniform(0.005, 0.025) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    const double turn_rate = uniform(0.005, 0.02) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    const double stop_at = uniform(20.0, length - 60.0);
    const double stop_for = uniform(15.0, 45.0);

    auto centroid = [&](double t) -> Point {
      switch (kind) {
        case SynthKind::constant_velocity:
          return {c0.x + v.x * t, c0.y + v.y * t};
        case SynthKind::accelerating: {
          const double s = 0.5 * accel * t * t;
          return {c0.x + v.x * t + s * std::cos(heading), c0.y + v.y * t + s * std::sin(heading)};
        }
        case SynthKind::turning: {
          const double r = speed / turn_rate;
          const double a = heading + turn_rate * t;
          return {c0.x + r * (std::sin(a) - std::sin(heading)),
                  c0.y - r * (std::cos(a) - std::cos(heading))};
        }
        case SynthKind::stop_and_go: {
          const double moving = t < stop_at ? t : std::max(stop_at, t - stop_for);
          return {c0.x + v.x * moving, c0.y + v.y * moving};
        }
      }
      return c0;
    };

    track.boxes.reserve(static_cast<std::size_t>(length));
    for (int f = 0; f < length; ++f) {
      const double t = f;
      const Point c = centroid(t);
      const double scale = 1.0 + scale_rate * t;
      BBox box{c.x, c.y, w0 * scale, h0 * scale};
      if (noise_sigma > 0.0) {
        box.cx += noise_sigma * noise(rng);
        box.cy += noise_sigma * noise(rng);
        box.w = std::max(1.0, box.w + noise_sigma * noise(rng));
        box.h = std::max(1.0, box.h + noise_sigma * noise(rng));
      }
      track.boxes.push_back(box);
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

}  // namespace mof
