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

#ifndef MOF__STED__CHECKPOINT_HPP_
#define MOF__STED__CHECKPOINT_HPP_

#include "mof/sted/model.hpp"
#include "mof/sted/train.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace mof::sted
{

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint
{
  StedModel model;
  TrainConfig config;
};

/**
 * @brief Binary checkpoint, all integers and floats little-endian.
 *
 *   "MOFC"                          4 bytes
 *   version                         u32
 *   variant tag                     u32 (0 bb_only, 1 of_only, 2 both)
 *   flags                           u32 (bit 0: FC-1 rectifier)
 *   input, hidden, embed, flow, output   u64 x 5
 *   feature mean[8], std[8]         f64 x 16
 *   config length, config JSON      u64 + bytes
 *   tensors in kParamGroupNames order, row-major f64
 *
 * Empty tensors (the encoder of of_only) contribute no bytes.
 */
void save_checkpoint(std::ostream & out, const StedModel & model, const TrainConfig & config);
void save_checkpoint(const std::filesystem::path & path, const StedModel & model, const TrainConfig & config);

/// Throws DataError on bad magic, version mismatch, inconsistent dims, truncation or trailing bytes.
Checkpoint load_checkpoint(std::istream & in);
Checkpoint load_checkpoint(const std::filesystem::path & path);

}  // namespace mof::sted

#endif  // MOF__STED__CHECKPOINT_HPP_
