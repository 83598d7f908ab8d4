/**
 * Copyright 2026 The fedprune Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDPRUNE_MODELS_H_
#define FEDPRUNE_MODELS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedprune/types.h"

namespace fedprune::models {

enum class ModelKind { kLinearSoftmax, kMlpOneHidden };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string &name);

// Parameter layout, per layer in order: weights (row-major, out x in) then biases.
//   linear_softmax: W[C x D], b[C]
//   mlp_one_hidden: W1[H x D], b1[H], W2[C x H], b2[C]   (tanh hidden activation)
struct ModelSpec {
  ModelKind kind = ModelKind::kLinearSoftmax;
  int input_dim = 1;
  int num_classes = 2;
  int hidden_dim = 16;  // mlp only
};

void validate(const ModelSpec &spec);
std::size_t parameter_count(const ModelSpec &spec);

struct Sample {
  std::vector<double> features;
  int label = 0;
};

/// Zeros for linear_softmax; for the MLP, first-layer and output weights are drawn
/// from N(0, 1/fan_in) and biases are zero.
ParamVector init_params(const ModelSpec &spec, std::uint64_t seed);

std::vector<double> logits(const ModelSpec &spec, std::span<const double> params,
                           std::span<const double> features);

std::vector<double> softmax(std::span<const double> logits);

// Cross-entropy of the softmax output against the label, via log-sum-exp.
double per_sample_loss(const ModelSpec &spec, std::span<const double> params, const Sample &sample);

// Top-1 class; ties resolve to the lowest index.
int predict(const ModelSpec &spec, std::span<const double> params, std::span<const double> features);

/// Adds scale * d(loss)/d(params) for one sample into grad.
void accumulate_gradient(const ModelSpec &spec, std::span<const double> params, const Sample &sample,
                         double scale, std::span<double> grad);

/// Mean gradient of per_sample_loss over the batch.
ParamVector batch_gradient(const ModelSpec &spec, std::span<const double> params,
                           std::span<const Sample> batch);

}  // namespace fedprune::models

#endif  // FEDPRUNE_MODELS_H_
