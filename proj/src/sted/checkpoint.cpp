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

#include "mof/sted/checkpoint.hpp"

#include "mof/error.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace mof::sted
{

namespace
{

constexpr std::array<char, 4> kMagic = {'M', 'O', 'F', 'C'};
constexpr std::uint32_t kFlagRelu = 1U;
// Guards against allocating absurd sizes from a corrupt header.
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 24;

template <typename U>
void put_le(std::ostream & out, U value)
{
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFU);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream & out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

class Reader
{
public:
  explicit Reader(std::istream & in) : in_(in) {}

  void read(char * dst, std::size_t n, const char * what)
  {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw DataError(std::string("truncated checkpoint while reading ") + what);
    }
  }

  template <typename U>
  U get(const char * what)
  {
    std::array<unsigned char, sizeof(U)> bytes{};
    read(reinterpret_cast<char *>(bytes.data()), bytes.size(), what);
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
  }

  double get_f64(const char * what) { return std::bit_cast<double>(get<std::uint64_t>(what)); }

private:
  std::istream & in_;
};

std::uint32_t variant_tag(Variant v)
{
  switch (v) {
    case Variant::bb_only: return 0;
    case Variant::of_only: return 1;
    case Variant::both: return 2;
  }
  return 0;
}

Variant variant_from_tag(std::uint32_t tag)
{
  switch (tag) {
    case 0: return Variant::bb_only;
    case 1: return Variant::of_only;
    case 2: return Variant::both;
    default: throw DataError("checkpoint has unknown variant tag " + std::to_string(tag));
  }
}

}  // namespace

void save_checkpoint(std::ostream & out, const StedModel & model, const TrainConfig & config)
{
  const ModelDims & d = model.params.dims;
  d.validate();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, variant_tag(d.variant));
  put_le<std::uint32_t>(out, d.fc_relu ? kFlagRelu : 0U);
  for (Eigen::Index v : {d.input, d.hidden, d.embed, d.flow, d.output}) {
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(v));
  }
  for (double m : model.stats.mean) put_f64(out, m);
  for (double s : model.stats.std) put_f64(out, s);

  const std::string json = to_json(config).dump();
  put_le<std::uint64_t>(out, json.size());
  out.write(json.data(), static_cast<std::streamsize>(json.size()));

  const auto expected = param_spans(ModelParams::zeros(d));
  const auto groups = param_spans(model.params);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() != expected[g].size()) {
      throw DataError("tensor " + std::string(kParamGroupNames[g]) + " does not match the model dims");
    }
    for (double v : groups[g]) put_f64(out, v);
  }
  if (!out) throw DataError("failed to write checkpoint");
}

void save_checkpoint(const std::filesystem::path & path, const StedModel & model, const TrainConfig & config)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  save_checkpoint(out, model, config);
}

Checkpoint load_checkpoint(std::istream & in)
{
  Reader r(in);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kMagic) {
    throw DataError("not a checkpoint (bad magic bytes)");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  }

  ModelDims d;
  d.variant = variant_from_tag(r.get<std::uint32_t>("variant"));
  d.fc_relu = (r.get<std::uint32_t>("flags") & kFlagRelu) != 0;
  std::array<std::uint64_t, 5> raw{};
  for (auto & v : raw) {
    v = r.get<std::uint64_t>("dims");
    if (v > kMaxDim) throw DataError("checkpoint dims are inconsistent (dimension " + std::to_string(v) + ")");
  }
  d.input = static_cast<Eigen::Index>(raw[0]);
  d.hidden = static_cast<Eigen::Index>(raw[1]);
  d.embed = static_cast<Eigen::Index>(raw[2]);
  d.flow = static_cast<Eigen::Index>(raw[3]);
  d.output = static_cast<Eigen::Index>(raw[4]);
  try {
    d.validate();
  } catch (const DataError & e) {
    throw DataError(std::string("checkpoint dims are inconsistent: ") + e.what());
  }

  Checkpoint cp;
  for (double & m : cp.model.stats.mean) m = r.get_f64("stats");
  for (double & s : cp.model.stats.std) s = r.get_f64("stats");

  const auto json_len = r.get<std::uint64_t>("config length");
  if (json_len > kMaxDim) throw DataError("checkpoint config block is implausibly large");
  std::string json(json_len, '\0');
  r.read(json.data(), json.size(), "config");
  try {
    cp.config = train_config_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::exception & e) {
    throw DataError(std::string("checkpoint config is not valid JSON: ") + e.what());
  }

  cp.model.params = ModelParams::zeros(d);
  auto groups = param_spans(cp.model.params);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::string what(kParamGroupNames[g]);
    for (double & v : groups[g]) v = r.get_f64(what.c_str());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("checkpoint has trailing bytes after the last tensor");
  }
  return cp;
}

Checkpoint load_checkpoint(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  try {
    return load_checkpoint(in);
  } catch (const DataError & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace mof::sted
