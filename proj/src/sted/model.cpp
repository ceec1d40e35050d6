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

#include "mof/sted/model.hpp"

#include "mof/error.hpp"
#include "mof/io.hpp"
#include "mof/sted/loss.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace mof::sted
{

std::string to_string(Variant variant)
{
  switch (variant) {
    case Variant::bb_only:
      return "bb_only";
    case Variant::of_only:
      return "of_only";
    case Variant::both:
      return "both";
  }
  return "bb_only";
}

Variant parse_variant(const std::string & name)
{
  if (name == "bb_only") return Variant::bb_only;
  if (name == "of_only") return Variant::of_only;
  if (name == "both") return Variant::both;
  throw DataError("unknown variant '" + name + "' (expected bb_only, of_only or both)");
}

bool uses_box_encoder(Variant variant) { return variant != Variant::of_only; }
bool uses_flow(Variant variant) { return variant != Variant::bb_only; }

Eigen::Index ModelDims::context() const
{
  switch (variant) {
    case Variant::bb_only:
      return embed;
    case Variant::of_only:
      return flow;
    case Variant::both:
      return embed + flow;
  }
  return embed;
}

void ModelDims::validate() const
{
  if (input != kFeatureDim || output != kResidualDim) {
    throw DataError("model input/output dims must be " + std::to_string(kFeatureDim) + "/" +
                    std::to_string(kResidualDim));
  }
  if (hidden < 1 || embed < 1) {
    throw DataError("hidden and embedding sizes must be positive");
  }
  if (uses_flow(variant) && flow < 1) {
    throw DataError("variant " + to_string(variant) + " needs a positive flow dimension");
  }
  if (!uses_flow(variant) && flow != 0) {
    throw DataError("bb_only models carry no flow dimension");
  }
}

ModelParams ModelParams::zeros(const ModelDims & dims)
{
  dims.validate();
  ModelParams p;
  p.dims = dims;
  if (uses_box_encoder(dims.variant)) {
    p.encoder = GruWeights(dims.input, dims.hidden);
    p.fc_W = Matrix::Zero(dims.embed, dims.hidden);
    p.fc_b = Vector::Zero(dims.embed);
  } else {
    p.encoder.W.resize(0, 0);
    p.encoder.U.resize(0, 0);
    p.encoder.b.resize(0);
    p.fc_W.resize(0, 0);
    p.fc_b.resize(0);
  }
  p.decoder = GruWeights(dims.context(), dims.hidden);
  p.out_W = Matrix::Zero(dims.output, dims.hidden);
  p.out_b = Vector::Zero(dims.output);
  return p;
}

namespace
{

template <class Tensor>
void fill_uniform(Tensor & t, double bound, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
}

Batch relu(const Batch & x) { return x.cwiseMax(0.0); }

std::string missing_flow_message(Variant variant, const WindowSource & s)
{
  return "variant " + to_string(variant) + " needs flow features but window " + s.video_id + "/" +
         std::to_string(s.track_id) + "@" + std::to_string(s.anchor_frame) +
         " has none; use the bb_only variant for data without flow features";
}

}  // namespace

ModelParams ModelParams::initialize(const ModelDims & dims, std::uint64_t seed)
{
  ModelParams p = zeros(dims);
  std::mt19937_64 rng(seed);
  const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  if (uses_box_encoder(dims.variant)) {
    fill_uniform(p.encoder.W, 1.0 / std::sqrt(static_cast<double>(dims.input)), rng);
    fill_uniform(p.encoder.U, hidden_bound, rng);
    fill_uniform(p.encoder.b, hidden_bound, rng);
    fill_uniform(p.fc_W, hidden_bound, rng);
    fill_uniform(p.fc_b, hidden_bound, rng);
  }
  fill_uniform(p.decoder.W, 1.0 / std::sqrt(static_cast<double>(dims.context())), rng);
  fill_uniform(p.decoder.U, hidden_bound, rng);
  fill_uniform(p.decoder.b, hidden_bound, rng);
  return p;
}

std::vector<std::span<double>> param_spans(ModelParams & p)
{
  auto span = [](auto & t) { return std::span<double>(t.data(), static_cast<std::size_t>(t.size())); };
  return {span(p.encoder.W), span(p.encoder.U), span(p.encoder.b), span(p.fc_W),    span(p.fc_b),
          span(p.decoder.W), span(p.decoder.U), span(p.decoder.b), span(p.out_W), span(p.out_b)};
}

std::vector<std::span<const double>> param_spans(const ModelParams & p)
{
  auto span = [](const auto & t) {
    return std::span<const double>(t.data(), static_cast<std::size_t>(t.size()));
  };
  return {span(p.encoder.W), span(p.encoder.U), span(p.encoder.b), span(p.fc_W),    span(p.fc_b),
          span(p.decoder.W), span(p.decoder.U), span(p.decoder.b), span(p.out_W), span(p.out_b)};
}

std::uint64_t weight_checksum(const ModelParams & params)
{
  std::uint64_t h = fnv1a64("");
  for (const auto & group : param_spans(params)) {
    for (double v : group) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      char bytes[8];
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
      h = fnv1a64(std::string_view(bytes, 8), h);
    }
  }
  return h;
}

void randomize_output_layer(ModelParams & params, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(params.dims.hidden));
  fill_uniform(params.out_W, bound, rng);
  fill_uniform(params.out_b, bound, rng);
}

ResidualOutput residual_targets(const ObservationWindow & window)
{
  const Velocity v = anchor_velocity(window.observed);
  const BBox & anchor = window.anchor_box();
  ResidualOutput r;
  r.steps.reserve(window.future.size());
  for (std::size_t k = 0; k < window.future.size(); ++k) {
    const BBox base = cv_extrapolate(anchor, v, static_cast<int>(k) + 1);
    const BBox & gt = window.future[k];
    r.steps.push_back({gt.cx - base.cx, gt.cy - base.cy, gt.w - base.w, gt.h - base.h});
  }
  return r;
}

Forecast residuals_to_boxes(const ObservationWindow & window, const ResidualOutput & residuals)
{
  const Velocity v = anchor_velocity(window.observed);
  const BBox & anchor = window.anchor_box();
  Forecast f{window.source, {}, "sted"};
  f.boxes.reserve(residuals.steps.size());
  for (std::size_t k = 0; k < residuals.steps.size(); ++k) {
    const auto & d = residuals.steps[k];
    BBox box = cv_extrapolate(anchor, v, static_cast<int>(k) + 1);
    box.cx += d[0];
    box.cy += d[1];
    box.w = std::max(1.0, box.w + d[2]);
    box.h = std::max(1.0, box.h + d[3]);
    f.boxes.push_back(box);
  }
  return f;
}

Vector encode(const ObservationWindow & window, const StedModel & model)
{
  const ModelParams & p = model.params;
  const ModelDims & dims = p.dims;
  Vector phi_b;
  if (uses_box_encoder(dims.variant)) {
    Vector h = Vector::Zero(dims.hidden);
    for (const auto & f : standardize(box_features(window), model.stats)) {
      const Vector x = Eigen::Map<const Vector>(f.data(), kFeatureDim);
      h = gru_cell(x, h, p.encoder);
    }
    phi_b = p.fc_W * h + p.fc_b;
    if (dims.fc_relu) phi_b = phi_b.cwiseMax(0.0);
  }
  if (!uses_flow(dims.variant)) {
    return phi_b;
  }
  if (!window.flow_feature) {
    throw DataError(missing_flow_message(dims.variant, window.source));
  }
  if (static_cast<Eigen::Index>(window.flow_feature->size()) != dims.flow) {
    throw DataError("flow feature length " + std::to_string(window.flow_feature->size()) +
                    " does not match model F = " + std::to_string(dims.flow));
  }
  const Vector flow = Eigen::Map<const Eigen::VectorXf>(window.flow_feature->data(), dims.flow).cast<double>();
  if (dims.variant == Variant::of_only) {
    return flow;
  }
  Vector context(dims.context());
  context << phi_b, flow;
  return context;
}

ResidualOutput decode(const Vector & context, const ModelParams & params, int steps)
{
  if (context.size() != params.dims.context()) {
    throw DataError("context length " + std::to_string(context.size()) + " does not match model (" +
                    std::to_string(params.dims.context()) + ")");
  }
  const Batch projection = gru_input_projection(params.decoder, context);
  Batch h = Batch::Zero(params.dims.hidden, 1);
  ResidualOutput out;
  out.steps.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    h = gru_step(params.decoder, projection, h, nullptr);
    const Vector y = params.out_W * h + params.out_b;
    out.steps.push_back({y(0), y(1), y(2), y(3)});
  }
  return out;
}

Forecast forecast(const StedModel & model, const ObservationWindow & window)
{
  return residuals_to_boxes(window, decode(encode(window, model), model.params));
}

Sample make_sample(const ObservationWindow & window, const FeatureStats & stats, const ModelDims & dims)
{
  Sample s;
  const auto features = standardize(box_features(window), stats);
  s.features.resize(kFeatureDim, static_cast<Eigen::Index>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) {
    for (int c = 0; c < kFeatureDim; ++c) s.features(c, static_cast<Eigen::Index>(j)) = features[j][c];
  }
  if (uses_flow(dims.variant)) {
    if (!window.flow_feature) {
      throw DataError(missing_flow_message(dims.variant, window.source));
    }
    if (static_cast<Eigen::Index>(window.flow_feature->size()) != dims.flow) {
      throw DataError("flow feature length " + std::to_string(window.flow_feature->size()) +
                      " does not match model F = " + std::to_string(dims.flow));
    }
    s.flow = Eigen::Map<const Eigen::VectorXf>(window.flow_feature->data(), dims.flow).cast<double>();
  }
  const auto targets = residual_targets(window);
  s.target.resize(kResidualDim, static_cast<Eigen::Index>(targets.steps.size()));
  for (std::size_t k = 0; k < targets.steps.size(); ++k) {
    for (int c = 0; c < kResidualDim; ++c) s.target(c, static_cast<Eigen::Index>(k)) = targets.steps[k][c];
  }
  return s;
}

BatchData gather_batch(const std::vector<Sample> & samples, std::span<const std::size_t> indices)
{
  BatchData batch;
  batch.size = static_cast<Eigen::Index>(indices.size());
  if (indices.empty()) return batch;
  const Sample & first = samples[indices.front()];
  const Eigen::Index B = batch.size;
  batch.steps.assign(static_cast<std::size_t>(first.features.cols()), Batch(kFeatureDim, B));
  batch.targets.assign(static_cast<std::size_t>(first.target.cols()), Batch(kResidualDim, B));
  if (first.flow.size() > 0) batch.flow.resize(first.flow.size(), B);
  for (Eigen::Index b = 0; b < B; ++b) {
    const Sample & s = samples[indices[static_cast<std::size_t>(b)]];
    for (std::size_t j = 0; j < batch.steps.size(); ++j) {
      batch.steps[j].col(b) = s.features.col(static_cast<Eigen::Index>(j));
    }
    for (std::size_t k = 0; k < batch.targets.size(); ++k) {
      batch.targets[k].col(b) = s.target.col(static_cast<Eigen::Index>(k));
    }
    if (batch.flow.size() > 0) batch.flow.col(b) = s.flow;
  }
  return batch;
}

ForwardPass forward(const ModelParams & params, const BatchData & batch, bool keep_cache)
{
  const ModelDims & dims = params.dims;
  const Eigen::Index B = batch.size;
  ForwardPass pass;

  Batch phi_b;
  if (uses_box_encoder(dims.variant)) {
    Batch h = Batch::Zero(dims.hidden, B);
    if (keep_cache) pass.encoder.resize(batch.steps.size());
    for (std::size_t j = 0; j < batch.steps.size(); ++j) {
      const Batch projection = gru_input_projection(params.encoder, batch.steps[j]);
      h = gru_step(params.encoder, projection, h, keep_cache ? &pass.encoder[j] : nullptr);
    }
    pass.fc_pre = params.fc_W * h;
    pass.fc_pre.colwise() += params.fc_b;
    pass.encoder_state = std::move(h);
    phi_b = dims.fc_relu ? relu(pass.fc_pre) : pass.fc_pre;
  }

  switch (dims.variant) {
    case Variant::bb_only:
      pass.context = std::move(phi_b);
      break;
    case Variant::of_only:
      pass.context = batch.flow;
      break;
    case Variant::both:
      pass.context.resize(dims.context(), B);
      pass.context << phi_b, batch.flow;
      break;
  }
  if (pass.context.rows() != dims.context()) {
    throw DataError("batch flow features do not match the model's flow dimension");
  }

  const Batch projection = gru_input_projection(params.decoder, pass.context);
  Batch h = Batch::Zero(dims.hidden, B);
  const std::size_t steps = batch.targets.empty() ? kForecastFrames : batch.targets.size();
  if (keep_cache) {
    pass.decoder.resize(steps);
    pass.decoder_states.reserve(steps);
  }
  pass.outputs.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    h = gru_step(params.decoder, projection, h, keep_cache ? &pass.decoder[k] : nullptr);
    Batch y = params.out_W * h;
    y.colwise() += params.out_b;
    pass.outputs.push_back(std::move(y));
    if (keep_cache) pass.decoder_states.push_back(h);
  }
  return pass;
}

double loss_sum(const ForwardPass & pass, const BatchData & batch, double beta)
{
  double total = 0.0;
  for (std::size_t k = 0; k < batch.targets.size(); ++k) {
    const Batch & y = pass.outputs[k];
    const Batch & t = batch.targets[k];
    for (Eigen::Index b = 0; b < y.cols(); ++b) {
      for (Eigen::Index c = 0; c < y.rows(); ++c) total += smooth_l1_element(y(c, b) - t(c, b), beta);
    }
  }
  return total;
}

double backward(const ModelParams & params, const BatchData & batch, const ForwardPass & pass, double beta,
                double scale, ModelParams & grad)
{
  const ModelDims & dims = params.dims;
  const Eigen::Index B = batch.size;
  const Eigen::Index H = dims.hidden;
  double total = 0.0;

  Batch dh = Batch::Zero(H, B);
  Batch d_projection_sum = Batch::Zero(3 * H, B);
  Batch d_projection;
  Batch d_out(kResidualDim, B);
  for (std::size_t k = batch.targets.size(); k-- > 0;) {
    const Batch & y = pass.outputs[k];
    const Batch & t = batch.targets[k];
    for (Eigen::Index b = 0; b < B; ++b) {
      for (Eigen::Index c = 0; c < kResidualDim; ++c) {
        const double d = y(c, b) - t(c, b);
        total += smooth_l1_element(d, beta);
        d_out(c, b) = scale * smooth_l1_derivative(d, beta);
      }
    }
    grad.out_W.noalias() += d_out * pass.decoder_states[k].transpose();
    grad.out_b += d_out.rowwise().sum();
    dh.noalias() += params.out_W.transpose() * d_out;
    dh = gru_step_backward(params.decoder, pass.decoder[k], dh, grad.decoder, d_projection);
    d_projection_sum += d_projection;
  }
  grad.decoder.W.noalias() += d_projection_sum * pass.context.transpose();
  grad.decoder.b += d_projection_sum.rowwise().sum();

  if (uses_box_encoder(dims.variant)) {
    const Batch d_context = params.decoder.W.transpose() * d_projection_sum;
    Batch d_pre = d_context.topRows(dims.embed);
    if (dims.fc_relu) {
      d_pre = (pass.fc_pre.array() > 0.0).select(d_pre, 0.0);
    }
    grad.fc_W.noalias() += d_pre * pass.encoder_state.transpose();
    grad.fc_b += d_pre.rowwise().sum();
    Batch dh_enc = params.fc_W.transpose() * d_pre;
    for (std::size_t j = batch.steps.size(); j-- > 0;) {
      dh_enc = gru_step_backward(params.encoder, pass.encoder[j], dh_enc, grad.encoder, d_projection);
      grad.encoder.W.noalias() += d_projection * batch.steps[j].transpose();
      grad.encoder.b += d_projection.rowwise().sum();
    }
  }
  return scale * total;
}

}  // namespace mof::sted
