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

#ifndef MOF__STED__GRADCHECK_HPP_
#define MOF__STED__GRADCHECK_HPP_

#include "mof/sted/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mof::sted
{

/// Gradients smaller than this are compared on an absolute scale.
inline constexpr double kGradCheckFloor = 1e-6;

struct GroupCheck
{
  std::string name;
  std::size_t coordinates = 0;
  double max_rel_error = 0.0;
};

struct GradCheckResult
{
  double max_rel_error = 0.0;
  std::vector<GroupCheck> groups;
};

/**
 * @brief Compares backpropagated gradients with central differences.
 *
 * For every non-empty tensor, up to coords_per_group coordinates (all of
 * them for smaller tensors) are drawn with the seeded generator and
 * perturbed by +/- epsilon; the two loss evaluations are differenced per
 * residual element before summing. The error of one coordinate is
 * |analytic - numeric| / max(|analytic|, |numeric|, kGradCheckFloor).
 */
GradCheckResult grad_check(const ModelParams & params, const std::vector<Sample> & samples, double epsilon,
                           std::uint64_t seed, std::size_t coords_per_group = 50, double beta = 1.0);

}  // namespace mof::sted

#endif  // MOF__STED__GRADCHECK_HPP_
