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

#include "mof/io.hpp"

#include "mof/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace mof
{

namespace
{

std::ifstream open_input(const std::filesystem::path & path, std::ios::openmode mode = std::ios::in)
{
  std::ifstream in(path, mode);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path & path, std::ios::openmode mode = std::ios::out)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  return out;
}

/// Strips a trailing CR and, on the first line, a UTF-8 byte-order mark.
std::string_view clean_line(std::string & line, bool first)
{
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string_view view = line;
  if (first && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
  return view;
}

std::string line_context(const std::string & source, std::size_t line_no)
{
  return source + ":" + std::to_string(line_no);
}

std::uint32_t float_to_le(float value)
{
  auto bits = std::bit_cast<std::uint32_t>(value);
  if constexpr (std::endian::native == std::endian::big) {
    bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
  }
  return bits;
}

float float_from_le(std::uint32_t bits)
{
  if constexpr (std::endian::native == std::endian::big) {
    bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
  }
  return std::bit_cast<float>(bits);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed)
{
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double value)
{
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw DataError("cannot format number");
  }
  return std::string(buf.data(), end);
}

std::vector<std::string_view> split_csv_line(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view text, const std::string & context)
{
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("malformed number '" + std::string(text) + "' at " + context);
  }
  return value;
}

std::int64_t parse_int(std::string_view text, const std::string & context)
{
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("malformed integer '" + std::string(text) + "' at " + context);
  }
  return value;
}

std::vector<Track> load_tracks(const std::filesystem::path & path)
{
  auto in = open_input(path);
  return parse_tracks(in, path.string());
}

std::vector<Track> parse_tracks(std::istream & in, const std::string & source_name)
{
  struct Row
  {
    std::int64_t frame;
    BBox box;
    double occlusion;
    std::size_t line_no;
  };
  struct Pending
  {
    Metadata metadata;
    std::vector<Row> rows;
  };

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(source_name + ": empty track file");
  }
  const std::string_view header = clean_line(line, true);
  bool has_occlusion = false;
  if (header == kTrackHeader) {
    has_occlusion = false;
  } else if (header == std::string(kTrackHeader) + ",occlusion") {
    has_occlusion = true;
  } else {
    throw DataError(line_context(source_name, 1) + ": unexpected header '" + std::string(header) + "'");
  }
  const std::size_t n_fields = has_occlusion ? 11 : 10;

  std::map<std::pair<std::string, std::int64_t>, Pending> pending;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = clean_line(line, false);
    if (view.empty()) continue;
    const std::string ctx = line_context(source_name, line_no);
    const auto fields = split_csv_line(view);
    if (fields.size() != n_fields) {
      throw DataError(ctx + ": malformed row, expected " + std::to_string(n_fields) + " fields, got " +
                      std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw DataError(ctx + ": malformed row, empty video_id");
    }
    Row row{};
    row.line_no = line_no;
    row.frame = parse_int(fields[4], ctx);
    const std::int64_t track_id = parse_int(fields[5], ctx);
    row.box = {parse_double(fields[6], ctx), parse_double(fields[7], ctx), parse_double(fields[8], ctx),
               parse_double(fields[9], ctx)};
    validate(row.box, ctx);
    row.occlusion = has_occlusion ? parse_double(fields[10], ctx) : 0.0;

    auto [it, inserted] = pending.try_emplace({std::string(fields[0]), track_id});
    if (inserted) {
      it->second.metadata = {std::string(fields[1]), std::string(fields[2]), std::string(fields[3])};
    }
    it->second.rows.push_back(row);
  }

  std::vector<Track> tracks;
  tracks.reserve(pending.size());
  for (auto & [key, p] : pending) {
    std::stable_sort(p.rows.begin(), p.rows.end(),
                     [](const Row & a, const Row & b) { return a.frame < b.frame; });
    Track track;
    track.video_id = key.first;
    track.track_id = key.second;
    track.metadata = p.metadata;
    track.start_frame = p.rows.front().frame;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      if (i > 0 && p.rows[i].frame != p.rows[i - 1].frame + 1) {
        throw DataError(line_context(source_name, p.rows[i].line_no) + ": non-consecutive frames in track " +
                        key.first + "/" + std::to_string(key.second) + " (frame " +
                        std::to_string(p.rows[i - 1].frame) + " followed by " +
                        std::to_string(p.rows[i].frame) + ")");
      }
      track.boxes.push_back(p.rows[i].box);
      if (has_occlusion) track.occlusion.push_back(p.rows[i].occlusion);
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

void write_tracks(const std::filesystem::path & path, const std::vector<Track> & tracks)
{
  auto out = open_output(path);
  write_tracks(out, tracks);
  if (!out) throw DataError("failed writing " + path.string());
}

void write_tracks(std::ostream & out, const std::vector<Track> & tracks)
{
  const bool occlusion = !tracks.empty() &&
                         std::all_of(tracks.begin(), tracks.end(), [](const Track & t) {
                           return t.occlusion.size() == t.boxes.size();
                         });
  out << kTrackHeader << (occlusion ? ",occlusion" : "") << '\n';
  for (const auto & t : tracks) {
    for (std::size_t i = 0; i < t.boxes.size(); ++i) {
      const BBox & b = t.boxes[i];
      out << t.video_id << ',' << t.metadata.city << ',' << t.metadata.weather << ','
          << t.metadata.time_of_day << ',' << t.frame_of(i) << ',' << t.track_id << ','
          << format_double(b.cx) << ',' << format_double(b.cy) << ',' << format_double(b.w) << ','
          << format_double(b.h);
      if (occlusion) out << ',' << format_double(t.occlusion[i]);
      out << '\n';
    }
  }
}

std::vector<FlowSeries> load_flow_magnitudes(const std::filesystem::path & path)
{
  auto in = open_input(path);
  const std::string source = path.string();
  std::string line;
  if (!std::getline(in, line) || clean_line(line, true) != "video_id,frame,mean_flow_magnitude") {
    throw DataError(source + ":1: expected header 'video_id,frame,mean_flow_magnitude'");
  }
  std::map<std::string, std::vector<std::tuple<std::int64_t, double, std::size_t>>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = clean_line(line, false);
    if (view.empty()) continue;
    const std::string ctx = line_context(source, line_no);
    const auto fields = split_csv_line(view);
    if (fields.size() != 3) {
      throw DataError(ctx + ": malformed row, expected 3 fields");
    }
    const double m = parse_double(fields[2], ctx);
    if (!std::isfinite(m) || m < 0.0) {
      throw DataError(ctx + ": flow magnitude must be finite and non-negative");
    }
    rows[std::string(fields[0])].emplace_back(parse_int(fields[1], ctx), m, line_no);
  }
  std::vector<FlowSeries> series;
  for (auto & [video, r] : rows) {
    std::sort(r.begin(), r.end());
    FlowSeries s;
    s.video_id = video;
    s.start_frame = std::get<0>(r.front());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0 && std::get<0>(r[i]) != std::get<0>(r[i - 1]) + 1) {
        throw DataError(line_context(source, std::get<2>(r[i])) + ": non-consecutive frames in video " + video);
      }
      s.magnitudes.push_back(std::get<1>(r[i]));
    }
    series.push_back(std::move(s));
  }
  return series;
}

std::filesystem::path flow_blob_path(const std::filesystem::path & index_path)
{
  auto blob = index_path;
  blob.replace_extension(".bin");
  return blob;
}

void write_flow_features(const std::filesystem::path & index_path,
                         const std::vector<ObservationWindow> & windows)
{
  auto index = open_output(index_path);
  auto blob = open_output(flow_blob_path(index_path), std::ios::out | std::ios::binary);
  index << "video_id,track_id,anchor_frame,offset,length\n";
  std::uint64_t offset = 0;
  for (const auto & w : windows) {
    if (!w.flow_feature) continue;
    const auto & f = *w.flow_feature;
    index << w.source.video_id << ',' << w.source.track_id << ',' << w.source.anchor_frame << ',' << offset
          << ',' << f.size() << '\n';
    for (float v : f) {
      const std::uint32_t bits = float_to_le(v);
      std::array<char, 4> bytes{};
      std::memcpy(bytes.data(), &bits, 4);
      blob.write(bytes.data(), 4);
    }
    offset += f.size();
  }
  if (!index || !blob) throw DataError("failed writing flow features to " + index_path.string());
}

std::size_t attach_flow_features(const std::filesystem::path & index_path,
                                 std::vector<ObservationWindow> & windows, std::size_t flow_dim)
{
  const auto blob_path = flow_blob_path(index_path);
  auto blob_in = open_input(blob_path, std::ios::in | std::ios::binary);
  std::vector<char> blob((std::istreambuf_iterator<char>(blob_in)), std::istreambuf_iterator<char>());
  if (blob.size() % 4 != 0) {
    throw DataError(blob_path.string() + ": size is not a multiple of 4 bytes");
  }
  const std::uint64_t n_floats = blob.size() / 4;

  auto in = open_input(index_path);
  const std::string source = index_path.string();
  std::string line;
  if (!std::getline(in, line) || clean_line(line, true) != "video_id,track_id,anchor_frame,offset,length") {
    throw DataError(source + ":1: expected header 'video_id,track_id,anchor_frame,offset,length'");
  }
  std::map<WindowSource, std::pair<std::uint64_t, std::uint64_t>> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = clean_line(line, false);
    if (view.empty()) continue;
    const std::string ctx = line_context(source, line_no);
    const auto fields = split_csv_line(view);
    if (fields.size() != 5) throw DataError(ctx + ": malformed row, expected 5 fields");
    const WindowSource key{std::string(fields[0]), parse_int(fields[1], ctx), parse_int(fields[2], ctx)};
    const auto offset = parse_int(fields[3], ctx);
    const auto length = parse_int(fields[4], ctx);
    if (offset < 0 || length < 0) throw DataError(ctx + ": negative offset or length");
    if (static_cast<std::uint64_t>(length) != flow_dim) {
      throw DataError(ctx + ": flow feature length " + std::to_string(length) + " does not match F = " +
                      std::to_string(flow_dim));
    }
    if (static_cast<std::uint64_t>(offset + length) > n_floats) {
      throw DataError(ctx + ": flow feature extends past the end of " + blob_path.string());
    }
    entries[key] = {static_cast<std::uint64_t>(offset), static_cast<std::uint64_t>(length)};
  }

  std::size_t attached = 0;
  for (auto & w : windows) {
    const auto it = entries.find(w.source);
    if (it == entries.end()) continue;
    std::vector<float> feature(it->second.second);
    for (std::size_t i = 0; i < feature.size(); ++i) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, blob.data() + 4 * (it->second.first + i), 4);
      feature[i] = float_from_le(bits);
      if (!std::isfinite(feature[i])) {
        throw DataError(source + ": non-finite flow feature for " + w.source.video_id + "/" +
                        std::to_string(w.source.track_id));
      }
    }
    w.flow_feature = std::move(feature);
    ++attached;
  }
  return attached;
}

SplitConfig load_split_config(const std::filesystem::path & path)
{
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception & e) {
    throw DataError(path.string() + ": " + e.what());
  }
  SplitConfig config;
  try {
    config.val_fraction = j.value("val_fraction", 0.5);
    for (const auto & [fold_key, cities] : j.at("folds").items()) {
      const int fold = static_cast<int>(parse_int(fold_key, path.string()));
      for (const auto & city : cities) {
        const auto name = city.get<std::string>();
        if (!config.folds.emplace(name, fold).second) {
          throw DataError(path.string() + ": city '" + name + "' appears in more than one fold");
        }
      }
    }
  } catch (const nlohmann::json::exception & e) {
    throw DataError(path.string() + ": " + e.what());
  }
  config.validate();
  return config;
}

void save_split_config(const std::filesystem::path & path, const SplitConfig & config)
{
  nlohmann::json folds = nlohmann::json::object();
  for (int f = 0; f < SplitConfig::kNumFolds; ++f) folds[std::to_string(f)] = nlohmann::json::array();
  for (const auto & [city, fold] : config.folds) folds[std::to_string(fold)].push_back(city);
  const nlohmann::json j = {{"folds", folds}, {"val_fraction", config.val_fraction}};
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace mof
