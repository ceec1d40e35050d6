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

#ifndef MOF__STED__GRU_HPP_
#define MOF__STED__GRU_HPP_

#include <Eigen/Dense>

namespace mof::sted
{

/// Parameter storage is row-major so tensors serialize in their natural order.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
/// Activations: one column per sample.
using Batch = Eigen::MatrixXd;

/**
 * Gate blocks are stacked [update z; reset r; candidate n], H rows each.
 *
 *   z  = sigmoid(Wz x + Uz h + bz)
 *   r  = sigmoid(Wr x + Ur h + br)
 *   n  = tanh(Wn x + Un (r * h) + bn)
 *   h' = (1 - z) * n + z * h
 */
struct GruWeights
{
  Matrix W;  // 3H x input
  Matrix U;  // 3H x H
  Vector b;  // 3H

  GruWeights() = default;
  GruWeights(Eigen::Index input, Eigen::Index hidden);

  Eigen::Index hidden() const { return U.cols(); }
  Eigen::Index input() const { return W.cols(); }
};

/// Values kept from the forward step for backpropagation.
struct GruStepCache
{
  Batch h_prev;
  Batch z;
  Batch r;
  Batch n;
};

/// W x + b for a batch of inputs. Decoder inputs repeat across steps, so this is hoisted.
Batch gru_input_projection(const GruWeights & w, const Batch & x);

/// One step given the input projection; fills cache when non-null.
Batch gru_step(const GruWeights & w, const Batch & input_projection, const Batch & h_prev, GruStepCache * cache);

/**
 * Backpropagates dh (gradient w.r.t. the step output) through one step.
 *
 * Accumulates dU into grad.U, writes the gradient w.r.t. the input
 * projection (3H x B) into d_projection and returns the gradient w.r.t. h_prev.
 * The caller owns dW and db since it owns the input.
 */
Batch gru_step_backward(const GruWeights & w, const GruStepCache & cache, const Batch & dh, GruWeights & grad,
                        Batch & d_projection);

/// Single-sample cell.
Vector gru_cell(const Vector & x, const Vector & h, const GruWeights & w);

}  // namespace mof::sted

#endif  // MOF__STED__GRU_HPP_
