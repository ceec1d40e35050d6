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

#ifndef MOF__DATA_HPP_
#define MOF__DATA_HPP_

#include "mof/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mof
{

/// Keeps tracks with at least min_frames boxes, preserving order.
std::vector<Track> filter_short_tracks(const std::vector<Track> & tracks, int min_frames = kMinTrackFrames);

/// Drops tracks with any box occluded by more than max_fraction. Tracks without
/// occlusion annotations are kept.
std::vector<Track> filter_occluded_tracks(const std::vector<Track> & tracks, double max_fraction);

/**
 * @brief Slides an observation window along one track.
 *
 * Anchors start at offset p-1 and advance by stride while q future frames
 * remain. Tracks shorter than p+q give no windows.
 */
std::vector<ObservationWindow> extract_windows(
  const Track & track, int p = kObservedFrames, int q = kForecastFrames, int stride = 1);

/// extract_windows over many tracks, ordered by (video_id, track_id, anchor_frame).
std::vector<ObservationWindow> extract_all_windows(
  const std::vector<Track> & tracks, int p = kObservedFrames, int q = kForecastFrames, int stride = 1);

struct ClipInterval
{
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;

  friend bool operator==(const ClipInterval &, const ClipInterval &) = default;
};

/**
 * @brief Greedy left-to-right selection of fixed-length low-motion clips.
 *
 * A frame is admissible when its mean flow magnitude does not exceed the
 * threshold. Every clip_frames consecutive admissible frames emit one clip;
 * an inadmissible frame restarts the run. Frame indices are offsets into
 * flow_magnitudes.
 */
std::vector<ClipInterval> motion_filter_clips(
  const std::vector<double> & flow_magnitudes, double threshold = 1.5, int clip_frames = 600);

/// City-level fold assignment for inter-city cross-validation.
struct SplitConfig
{
  std::map<std::string, int> folds;  // city -> fold in {0, 1, 2}
  double val_fraction = 0.5;

  static constexpr int kNumFolds = 3;
  void validate() const;
};

struct TrackSplit
{
  std::vector<Track> train;
  std::vector<Track> val;
  std::vector<Track> test;
  std::vector<std::string> warnings;
};

/// Position of a video in [0, 1) from a stable 64-bit hash of its id.
double video_hash_unit(const std::string & video_id);

/**
 * @brief Inter-city split for one fold.
 *
 * Tracks from cities in the held-out fold go to val or test by the hash of
 * their video_id (val when the hash unit is below val_fraction); every
 * other track is training data.
 */
TrackSplit make_splits(const std::vector<Track> & tracks, const SplitConfig & config, int fold);

/// Throws DataError naming the first track whose city is not in the config.
void check_cities_known(const std::vector<Track> & tracks, const SplitConfig & config);

enum class SynthKind { constant_velocity, accelerating, turning, stop_and_go };

SynthKind parse_synth_kind(const std::string & name);
std::string to_string(SynthKind kind);

/// Cities, weather and times of day cycled through by synth_generate.
const std::vector<std::string> & synth_cities();

/**
 * @brief Deterministic synthetic pedestrian tracks.
 *
 * Each track is 120 to 180 frames long. The noiseless centroid follows the
 * requested dynamics; width and height follow a slow linear scale ramp;
 * i.i.d. Gaussian noise of noise_sigma pixels is then added to all four box
 * coordinates. Metadata is assigned round-robin from synth_cities().
 */
std::vector<Track> synth_generate(SynthKind kind, int n_tracks, double noise_sigma, std::uint64_t seed);

/// Default three-fold assignment of synth_cities(), two cities per fold.
SplitConfig synth_split_config();

}  // namespace mof

#endif  // MOF__DATA_HPP_
