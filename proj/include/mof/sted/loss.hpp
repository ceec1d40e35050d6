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

#ifndef MOF__STED__LOSS_HPP_
#define MOF__STED__LOSS_HPP_

#include <cmath>
#include <vector>

namespace mof::sted
{

/// 0.5 d^2 / beta inside |d| < beta, |d| - 0.5 beta outside.
inline double smooth_l1_element(double d, double beta)
{
  const double a = std::abs(d);
  return a < beta ? 0.5 * d * d / beta : a - 0.5 * beta;
}

inline double smooth_l1_derivative(double d, double beta)
{
  if (std::abs(d) < beta) return d / beta;
  return d > 0.0 ? 1.0 : -1.0;
}

struct ResidualOutput;

/// Mean elementwise smooth L1 over all 60 x 4 residuals.
double smooth_l1(const ResidualOutput & pred, const ResidualOutput & target, double beta);

/// Mean over every element of every pair.
double smooth_l1(const std::vector<ResidualOutput> & pred, const std::vector<ResidualOutput> & target, double beta);

}  // namespace mof::sted

#endif  // MOF__STED__LOSS_HPP_
