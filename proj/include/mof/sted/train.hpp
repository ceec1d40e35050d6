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

#ifndef MOF__STED__TRAIN_HPP_
#define MOF__STED__TRAIN_HPP_

#include "mof/core.hpp"
#include "mof/sted/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mof::sted
{

struct TrainConfig
{
  double learning_rate = 1e-3;
  int halving_period = 5;
  int batch_size = 1024;
  int epochs = 20;
  double beta = 1.0;
  std::uint64_t seed = 0;
  int hidden = static_cast<int>(kDefaultHidden);
  int embed = static_cast<int>(kDefaultEmbed);
  Variant variant = Variant::bb_only;
  bool fc_relu = true;
  /// Forces a single worker; results are reproducible bit for bit either way.
  bool deterministic = false;

  void validate() const;
  friend bool operator==(const TrainConfig &, const TrainConfig &) = default;
};

nlohmann::json to_json(const TrainConfig & config);
TrainConfig train_config_from_json(const nlohmann::json & j);

/// Learning rate for a 1-based epoch: halved every halving_period epochs.
double learning_rate_at(const TrainConfig & config, int epoch);

/// Adam with beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
class AdamOptimizer
{
public:
  explicit AdamOptimizer(const ModelDims & dims);
  void step(ModelParams & params, const ModelParams & gradient, double learning_rate);
  long steps_taken() const { return step_; }

private:
  ModelParams first_moment_;
  ModelParams second_moment_;
  long step_ = 0;
};

struct EpochLog
{
  int epoch = 0;  // 0 is the untrained model
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_ade = 0.0;
};

struct TrainResult
{
  StedModel model;
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

/// Throws NumericalError naming the first tensor with a non-finite entry.
void check_finite_gradient(const ModelParams & gradient);

/// Flow feature length shared by the windows (0 when none carry one).
Eigen::Index infer_flow_dim(const std::vector<ObservationWindow> & windows);

/// Model with standardization fitted on train_windows and freshly initialized weights.
StedModel initial_model(const std::vector<ObservationWindow> & train_windows, const TrainConfig & config);

/**
 * @brief Mini-batch training on residual targets.
 *
 * Validation ADE is measured before training (epoch 0) and after every
 * epoch; the returned parameters are those of the best epoch, epoch 0
 * included. With an empty validation set the final epoch is returned.
 * Progress lines go to log when it is non-null.
 */
TrainResult train(const std::vector<ObservationWindow> & train_windows,
                  const std::vector<ObservationWindow> & val_windows, const TrainConfig & config,
                  std::ostream * log = nullptr);

}  // namespace mof::sted

#endif  // MOF__STED__TRAIN_HPP_
