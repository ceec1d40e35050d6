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

#include "mof/sted/loss.hpp"

#include "mof/error.hpp"
#include "mof/sted/model.hpp"

namespace mof::sted
{

double smooth_l1(const ResidualOutput & pred, const ResidualOutput & target, double beta)
{
  return smooth_l1(std::vector<ResidualOutput>{pred}, std::vector<ResidualOutput>{target}, beta);
}

double smooth_l1(const std::vector<ResidualOutput> & pred, const std::vector<ResidualOutput> & target, double beta)
{
  if (!(beta > 0.0)) throw DataError("smooth L1 beta must be positive");
  if (pred.size() != target.size() || pred.empty()) throw DataError("smooth L1 needs matching non-empty batches");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].steps.size() != target[i].steps.size()) throw DataError("smooth L1 step count mismatch");
    for (std::size_t k = 0; k < pred[i].steps.size(); ++k) {
      for (int c = 0; c < kResidualDim; ++c) {
        total += smooth_l1_element(pred[i].steps[k][c] - target[i].steps[k][c], beta);
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace mof::sted
