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

// Text and binary file formats shared by the CLI and the experiment harness.

#ifndef MOF__IO_HPP_
#define MOF__IO_HPP_

#include "mof/core.hpp"
#include "mof/data.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mof
{

inline constexpr std::string_view kTrackHeader =
  "video_id,city,weather,time_of_day,frame,track_id,cx,cy,w,h";

/**
 * Reads a track file. Header must be kTrackHeader, optionally followed by an
 * `occlusion` column. Tracks come back sorted by (video_id, track_id).
 */
std::vector<Track> load_tracks(const std::filesystem::path & path);
std::vector<Track> parse_tracks(std::istream & in, const std::string & source_name);

void write_tracks(const std::filesystem::path & path, const std::vector<Track> & tracks);
void write_tracks(std::ostream & out, const std::vector<Track> & tracks);

struct FlowSeries
{
  std::string video_id;
  std::int64_t start_frame = 0;
  std::vector<double> magnitudes;
};

/// Reads `video_id,frame,mean_flow_magnitude`; frames per video must be consecutive.
std::vector<FlowSeries> load_flow_magnitudes(const std::filesystem::path & path);

/// Blob path paired with a flow-feature index file (same stem, `.bin`).
std::filesystem::path flow_blob_path(const std::filesystem::path & index_path);

/**
 * Writes the flow-feature sidecar for every window that carries a feature.
 * Index rows are `video_id,track_id,anchor_frame,offset,length`, with
 * offset counted in float32 elements from the start of the blob.
 */
void write_flow_features(const std::filesystem::path & index_path,
                         const std::vector<ObservationWindow> & windows);

/// Attaches sidecar features to matching windows; returns how many were attached.
std::size_t attach_flow_features(const std::filesystem::path & index_path,
                                 std::vector<ObservationWindow> & windows, std::size_t flow_dim);

SplitConfig load_split_config(const std::filesystem::path & path);
void save_split_config(const std::filesystem::path & path, const SplitConfig & config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Splits on commas; no quoting.
std::vector<std::string_view> split_csv_line(std::string_view line);

double parse_double(std::string_view text, const std::string & context);
std::int64_t parse_int(std::string_view text, const std::string & context);

/// FNV-1a over bytes; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace mof

#endif  // MOF__IO_HPP_
