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

#include "mof/sted/train.hpp"

#include "mof/error.hpp"
#include "mof/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace mof::sted
{

void TrainConfig::validate() const
{
  if (!(learning_rate > 0.0) || halving_period < 1 || batch_size < 1 || epochs < 1 || !(beta > 0.0) ||
      hidden < 1 || embed < 1) {
    throw DataError("training config values must all be positive (epochs >= 1)");
  }
}

nlohmann::json to_json(const TrainConfig & c)
{
  return {{"learning_rate", c.learning_rate}, {"halving_period", c.halving_period},
          {"batch_size", c.batch_size},       {"epochs", c.epochs},
          {"beta", c.beta},                   {"seed", c.seed},
          {"hidden", c.hidden},               {"embed", c.embed},
          {"variant", to_string(c.variant)},  {"fc_relu", c.fc_relu},
          {"deterministic", c.deterministic}};
}

TrainConfig train_config_from_json(const nlohmann::json & j)
{
  TrainConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.halving_period = j.value("halving_period", c.halving_period);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.beta = j.value("beta", c.beta);
    c.seed = j.value("seed", c.seed);
    c.hidden = j.value("hidden", c.hidden);
    c.embed = j.value("embed", c.embed);
    c.variant = parse_variant(j.value("variant", to_string(c.variant)));
    c.fc_relu = j.value("fc_relu", c.fc_relu);
    c.deterministic = j.value("deterministic", c.deterministic);
  } catch (const nlohmann::json::exception & e) {
    throw DataError(std::string("training config: ") + e.what());
  }
  c.validate();
  return c;
}

double learning_rate_at(const TrainConfig & config, int epoch)
{
  const int halvings = (std::max(epoch, 1) - 1) / config.halving_period;
  return std::ldexp(config.learning_rate, -halvings);
}

AdamOptimizer::AdamOptimizer(const ModelDims & dims)
: first_moment_(ModelParams::zeros(dims)), second_moment_(ModelParams::zeros(dims))
{
}

void AdamOptimizer::step(ModelParams & params, const ModelParams & gradient, double learning_rate)
{
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++step_;
  const double correction1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));

  auto theta = param_spans(params);
  const auto g = param_spans(gradient);
  auto m = param_spans(first_moment_);
  auto v = param_spans(second_moment_);
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t i = 0; i < theta[t].size(); ++i) {
      m[t][i] = kBeta1 * m[t][i] + (1.0 - kBeta1) * g[t][i];
      v[t][i] = kBeta2 * v[t][i] + (1.0 - kBeta2) * g[t][i] * g[t][i];
      const double m_hat = m[t][i] / correction1;
      const double v_hat = v[t][i] / correction2;
      theta[t][i] -= learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }
}

void check_finite_gradient(const ModelParams & gradient)
{
  const auto groups = param_spans(gradient);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double v : groups[g]) {
      if (!std::isfinite(v)) {
        throw NumericalError("non-finite gradient in parameter group " + std::string(kParamGroupNames[g]));
      }
    }
  }
}

Eigen::Index infer_flow_dim(const std::vector<ObservationWindow> & windows)
{
  for (const auto & w : windows) {
    if (w.flow_feature) return static_cast<Eigen::Index>(w.flow_feature->size());
  }
  return 0;
}

StedModel initial_model(const std::vector<ObservationWindow> & train_windows, const TrainConfig & config)
{
  config.validate();
  ModelDims dims;
  dims.hidden = config.hidden;
  dims.embed = config.embed;
  dims.variant = config.variant;
  dims.fc_relu = config.fc_relu;
  dims.flow = uses_flow(config.variant) ? infer_flow_dim(train_windows) : 0;
  if (uses_flow(config.variant) && dims.flow == 0) {
    throw DataError("variant " + to_string(config.variant) +
                    " needs flow features but the training windows carry none; use the bb_only variant");
  }
  return {ModelParams::initialize(dims, config.seed), FeatureStats::fit(train_windows)};
}

namespace
{

double validation_ade(const StedModel & model, const std::vector<ObservationWindow> & val)
{
  const auto forecasts = sted_forecast_windows(model, val);
  return aggregate(evaluate_forecasts(forecasts, val)).ade;
}

}  // namespace

TrainResult train(const std::vector<ObservationWindow> & train_windows,
                  const std::vector<ObservationWindow> & val_windows, const TrainConfig & config, std::ostream * log)
{
  if (train_windows.empty()) {
    throw DataError("training set is empty");
  }
  TrainResult result;
  result.model = initial_model(train_windows, config);
  StedModel & model = result.model;
  const auto samples = make_samples(train_windows, model.stats, model.params.dims);

  StedModel best = model;
  double best_ade = std::numeric_limits<double>::infinity();
  if (!val_windows.empty()) {
    best_ade = validation_ade(model, val_windows);
    result.log.push_back({0, 0.0, std::nan(""), best_ade});
    if (log) *log << "epoch 0 val_ade " << best_ade << '\n';
  }

  AdamOptimizer optimizer(model.params.dims);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const double lr = learning_rate_at(config, epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t n = std::min(static_cast<std::size_t>(config.batch_size), order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, n);
      const auto g = batch_gradient(model.params, samples, batch, config.beta);
      if (!std::isfinite(g.loss)) {
        if (log) *log << "epoch " << epoch << " diverged: non-finite loss\n";
        throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": non-finite loss");
      }
      check_finite_gradient(g.gradient);
      optimizer.step(model.params, g.gradient, lr);
      loss_total += g.loss * static_cast<double>(n);
    }
    EpochLog entry{epoch, lr, loss_total / static_cast<double>(samples.size()), std::nan("")};
    if (!val_windows.empty()) {
      entry.val_ade = validation_ade(model, val_windows);
      if (entry.val_ade < best_ade) {
        best_ade = entry.val_ade;
        best = model;
        result.best_epoch = epoch;
      }
    }
    result.log.push_back(entry);
    if (log) {
      *log << "epoch " << epoch << " lr " << lr << " train_loss " << entry.train_loss << " val_ade " << entry.val_ade
           << '\n';
    }
  }

  if (val_windows.empty()) {
    result.best_epoch = config.epochs;
  } else {
    model = std::move(best);
  }
  return result;
}

}  // namespace mof::sted
