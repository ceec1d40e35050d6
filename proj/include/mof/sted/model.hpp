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

#ifndef MOF__STED__MODEL_HPP_
#define MOF__STED__MODEL_HPP_

#include "mof/core.hpp"
#include "mof/sted/features.hpp"
#include "mof/sted/gru.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mof::sted
{

/// Which encoder features reach the decoder.
enum class Variant { bb_only, of_only, both };

std::string to_string(Variant variant);
Variant parse_variant(const std::string & name);
bool uses_box_encoder(Variant variant);
bool uses_flow(Variant variant);

inline constexpr int kResidualDim = 4;
inline constexpr Eigen::Index kDefaultHidden = 512;
inline constexpr Eigen::Index kDefaultEmbed = 256;
inline constexpr Eigen::Index kDefaultFlowDim = 2048;

struct ModelDims
{
  Eigen::Index input = kFeatureDim;
  Eigen::Index hidden = kDefaultHidden;
  Eigen::Index embed = kDefaultEmbed;
  /// Flow feature length; 0 for bb_only.
  Eigen::Index flow = 0;
  Eigen::Index output = kResidualDim;
  Variant variant = Variant::bb_only;
  /// Rectifier after FC-1.
  bool fc_relu = true;

  /// Decoder input length: embed, flow, or embed + flow.
  Eigen::Index context() const;
  void validate() const;

  friend bool operator==(const ModelDims &, const ModelDims &) = default;
};

/**
 * @brief Every trainable tensor of the temporal model.
 *
 * The encoder GRU and FC-1 are empty for of_only. The same struct doubles as
 * the gradient container.
 */
struct ModelParams
{
  ModelDims dims;
  GruWeights encoder;
  Matrix fc_W;  // embed x hidden
  Vector fc_b;
  GruWeights decoder;
  Matrix out_W;  // 4 x hidden
  Vector out_b;

  static ModelParams zeros(const ModelDims & dims);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) everywhere except the output layer, which is zero.
  static ModelParams initialize(const ModelDims & dims, std::uint64_t seed);
};

/// Tensor names in checkpoint order.
inline constexpr std::array<std::string_view, 10> kParamGroupNames = {
  "encoder.W", "encoder.U", "encoder.b", "fc1.W",  "fc1.b",
  "decoder.W", "decoder.U", "decoder.b", "output.W", "output.b"};

/// Flat row-major views of each tensor, in kParamGroupNames order.
std::vector<std::span<double>> param_spans(ModelParams & params);
std::vector<std::span<const double>> param_spans(const ModelParams & params);

/// Order-dependent hash over every weight's bit pattern.
std::uint64_t weight_checksum(const ModelParams & params);

/// Fills every tensor of the output layer with fan-in-scaled uniform values.
void randomize_output_layer(ModelParams & params, std::uint64_t seed);

struct StedModel
{
  ModelParams params;
  FeatureStats stats;
};

/// Per-step (dx, dy, dw, dh) relative to constant-velocity, constant-scale extrapolation.
struct ResidualOutput
{
  std::vector<std::array<double, kResidualDim>> steps;

  friend bool operator==(const ResidualOutput &, const ResidualOutput &) = default;
};

/// Ground-truth future expressed as residuals against the CV-CS extrapolation.
ResidualOutput residual_targets(const ObservationWindow & window);

/// Centroid = anchor + k v + (dx, dy); size = anchor size + (dw, dh), clamped to >= 1 px.
Forecast residuals_to_boxes(const ObservationWindow & window, const ResidualOutput & residuals);

/// Decoder input for one window: phi_b, the flow feature, or both concatenated.
Vector encode(const ObservationWindow & window, const StedModel & model);

/// Re-feeds the context at each of the steps, starting from a zero hidden state.
ResidualOutput decode(const Vector & context, const ModelParams & params, int steps = kForecastFrames);

Forecast forecast(const StedModel & model, const ObservationWindow & window);

/// Model inputs and residual targets of one window, ready for batching.
struct Sample
{
  Eigen::Matrix<double, kFeatureDim, Eigen::Dynamic> features;  // one column per observed frame
  Vector flow;                                                   // empty unless the variant needs it
  Eigen::Matrix<double, kResidualDim, Eigen::Dynamic> target;    // one column per forecast step
};

Sample make_sample(const ObservationWindow & window, const FeatureStats & stats, const ModelDims & dims);

/// A batch laid out step-major with one column per sample.
struct BatchData
{
  std::vector<Batch> steps;    // observed frames, each input x B
  Batch flow;                  // F x B
  std::vector<Batch> targets;  // forecast steps, each 4 x B
  Eigen::Index size = 0;
};

BatchData gather_batch(const std::vector<Sample> & samples, std::span<const std::size_t> indices);

struct ForwardPass
{
  std::vector<GruStepCache> encoder;
  Batch encoder_state;
  Batch fc_pre;
  Batch context;
  std::vector<GruStepCache> decoder;
  std::vector<Batch> decoder_states;
  std::vector<Batch> outputs;  // forecast steps, each 4 x B
};

ForwardPass forward(const ModelParams & params, const BatchData & batch, bool keep_cache);

/// Sum of elementwise smooth L1 terms over the batch.
double loss_sum(const ForwardPass & pass, const BatchData & batch, double beta);

/**
 * Adds scale * d(loss_sum)/d(theta) into grad and returns scale * loss_sum.
 * The pass must have been run with keep_cache.
 */
double backward(const ModelParams & params, const BatchData & batch, const ForwardPass & pass, double beta,
                double scale, ModelParams & grad);

}  // namespace mof::sted

#endif  // MOF__STED__MODEL_HPP_
