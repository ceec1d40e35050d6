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

#include "mof/sted/gru.hpp"

namespace mof::sted
{

namespace
{

Batch sigmoid(const Batch & a)
{
  return (1.0 + (-a.array()).exp()).inverse().matrix();
}

}  // namespace

GruWeights::GruWeights(Eigen::Index input, Eigen::Index hidden)
: W(Matrix::Zero(3 * hidden, input)), U(Matrix::Zero(3 * hidden, hidden)), b(Vector::Zero(3 * hidden))
{
}

Batch gru_input_projection(const GruWeights & w, const Batch & x)
{
  Batch a = w.W * x;
  a.colwise() += w.b;
  return a;
}

Batch gru_step(const GruWeights & w, const Batch & input_projection, const Batch & h_prev, GruStepCache * cache)
{
  const Eigen::Index H = w.hidden();
  const Batch hidden_gates = w.U.topRows(2 * H) * h_prev;
  Batch z = sigmoid(input_projection.topRows(H) + hidden_gates.topRows(H));
  Batch r = sigmoid(input_projection.middleRows(H, H) + hidden_gates.bottomRows(H));
  const Batch reset_hidden = (r.array() * h_prev.array()).matrix();
  Batch n = (input_projection.bottomRows(H) + w.U.bottomRows(H) * reset_hidden).array().tanh().matrix();
  Batch h = ((1.0 - z.array()) * n.array() + z.array() * h_prev.array()).matrix();
  if (cache != nullptr) {
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->n = std::move(n);
  }
  return h;
}

Batch gru_step_backward(const GruWeights & w, const GruStepCache & cache, const Batch & dh, GruWeights & grad,
                        Batch & d_projection)
{
  const Eigen::Index H = w.hidden();
  const auto z = cache.z.array();
  const auto r = cache.r.array();
  const auto n = cache.n.array();
  const auto h_prev = cache.h_prev.array();
  const auto g = dh.array();

  d_projection.resize(3 * H, dh.cols());
  // Candidate and update gate pre-activations.
  d_projection.bottomRows(H) = (g * (1.0 - z) * (1.0 - n * n)).matrix();
  d_projection.topRows(H) = (g * (h_prev - n) * z * (1.0 - z)).matrix();

  const Batch d_reset_hidden = w.U.bottomRows(H).transpose() * d_projection.bottomRows(H);
  d_projection.middleRows(H, H) = (d_reset_hidden.array() * h_prev * r * (1.0 - r)).matrix();

  const Batch reset_hidden = (r * h_prev).matrix();
  grad.U.topRows(2 * H).noalias() += d_projection.topRows(2 * H) * cache.h_prev.transpose();
  grad.U.bottomRows(H).noalias() += d_projection.bottomRows(H) * reset_hidden.transpose();

  Batch dh_prev = (g * z + d_reset_hidden.array() * r).matrix();
  dh_prev.noalias() += w.U.topRows(2 * H).transpose() * d_projection.topRows(2 * H);
  return dh_prev;
}

Vector gru_cell(const Vector & x, const Vector & h, const GruWeights & w)
{
  return gru_step(w, gru_input_projection(w, x), h, nullptr);
}

}  // namespace mof::sted
