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

#include "fedprune/models.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fedprune::models {
namespace {

void check_shapes(const ModelSpec &spec, std::span<const double> params,
                  std::span<const double> features) {
  if (params.size() != parameter_count(spec)) {
    throw std::invalid_argument("parameter vector does not match model spec");
  }
  if (features.size() != static_cast<std::size_t>(spec.input_dim)) {
    throw std::invalid_argument("feature dimension does not match model spec");
  }
}

void check_label(const ModelSpec &spec, int label) {
  if (label < 0 || label >= spec.num_classes) {
    throw std::invalid_argument("label out of range");
  }
}

// out = W x + b, W row-major [rows x cols].
void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x,
            std::span<double> out) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < out.size(); ++r) {
    double acc = b[r];
    const double *row = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      acc += row[c] * x[c];
    }
    out[r] = acc;
  }
}

struct MlpView {
  std::span<const double> w1, b1, w2, b2;
};

MlpView mlp_view(const ModelSpec &spec, std::span<const double> p) {
  const std::size_t d = spec.input_dim, h = spec.hidden_dim, c = spec.num_classes;
  MlpView v;
  std::size_t off = 0;
  v.w1 = p.subspan(off, h * d);
  off += h * d;
  v.b1 = p.subspan(off, h);
  off += h;
  v.w2 = p.subspan(off, c * h);
  off += c * h;
  v.b2 = p.subspan(off, c);
  return v;
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) {
    s += std::exp(v - m);
  }
  return m + std::log(s);
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kLinearSoftmax ? "linear_softmax" : "mlp_one_hidden";
}

ModelKind parse_model_kind(const std::string &name) {
  if (name == "linear_softmax") return ModelKind::kLinearSoftmax;
  if (name == "mlp_one_hidden") return ModelKind::kMlpOneHidden;
  throw std::invalid_argument("unknown model kind: " + name);
}

void validate(const ModelSpec &spec) {
  if (spec.input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
  if (spec.num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (spec.kind == ModelKind::kMlpOneHidden && spec.hidden_dim < 1) {
    throw std::invalid_argument("hidden_dim must be >= 1");
  }
}

std::size_t parameter_count(const ModelSpec &spec) {
  const std::size_t d = spec.input_dim, c = spec.num_classes;
  if (spec.kind == ModelKind::kLinearSoftmax) {
    return c * d + c;
  }
  const std::size_t h = spec.hidden_dim;
  return h * d + h + c * h + c;
}

ParamVector init_params(const ModelSpec &spec, std::uint64_t seed) {
  validate(spec);
  ParamVector p(parameter_count(spec), 0.0);
  if (spec.kind == ModelKind::kLinearSoftmax) {
    return p;
  }
  std::mt19937_64 rng(seed);
  const std::size_t d = spec.input_dim, h = spec.hidden_dim, c = spec.num_classes;
  std::normal_distribution<double> first(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  std::normal_distribution<double> second(0.0, 1.0 / std::sqrt(static_cast<double>(h)));
  for (std::size_t i = 0; i < h * d; ++i) p[i] = first(rng);
  const std::size_t w2 = h * d + h;
  for (std::size_t i = 0; i < c * h; ++i) p[w2 + i] = second(rng);
  return p;
}

std::vector<double> logits(const ModelSpec &spec, std::span<const double> params,
                           std::span<const double> features) {
  check_shapes(spec, params, features);
  const std::size_t d = spec.input_dim, c = spec.num_classes;
  std::vector<double> z(c);
  if (spec.kind == ModelKind::kLinearSoftmax) {
    affine(params.subspan(0, c * d), params.subspan(c * d, c), features, z);
    return z;
  }
  const MlpView v = mlp_view(spec, params);
  std::vector<double> hidden(spec.hidden_dim);
  affine(v.w1, v.b1, features, hidden);
  for (double &a : hidden) a = std::tanh(a);
  affine(v.w2, v.b2, hidden, z);
  return z;
}

std::vector<double> softmax(std::span<const double> z) {
  const double lse = log_sum_exp(z);
  std::vector<double> p(z.size());
  std::transform(z.begin(), z.end(), p.begin(), [lse](double v) { return std::exp(v - lse); });
  return p;
}

double per_sample_loss(const ModelSpec &spec, std::span<const double> params, const Sample &sample) {
  check_label(spec, sample.label);
  const std::vector<double> z = logits(spec, params, sample.features);
  return std::max(0.0, log_sum_exp(z) - z[sample.label]);
}

int predict(const ModelSpec &spec, std::span<const double> params, std::span<const double> features) {
  const std::vector<double> z = logits(spec, params, features);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

void accumulate_gradient(const ModelSpec &spec, std::span<const double> params, const Sample &sample,
                         double scale, std::span<double> grad) {
  check_shapes(spec, params, sample.features);
  check_label(spec, sample.label);
  if (grad.size() != params.size()) {
    throw std::invalid_argument("gradient buffer does not match parameters");
  }
  const std::size_t d = spec.input_dim, c = spec.num_classes;
  const std::span<const double> x = sample.features;

  if (spec.kind == ModelKind::kLinearSoftmax) {
    std::vector<double> z(c);
    affine(params.subspan(0, c * d), params.subspan(c * d, c), x, z);
    std::vector<double> dz = softmax(z);
    dz[sample.label] -= 1.0;
    for (std::size_t k = 0; k < c; ++k) {
      const double g = scale * dz[k];
      double *row = grad.data() + k * d;
      for (std::size_t i = 0; i < d; ++i) row[i] += g * x[i];
      grad[c * d + k] += g;
    }
    return;
  }

  const std::size_t h = spec.hidden_dim;
  const MlpView v = mlp_view(spec, params);
  std::vector<double> hidden(h);
  affine(v.w1, v.b1, x, hidden);
  for (double &a : hidden) a = std::tanh(a);
  std::vector<double> z(c);
  affine(v.w2, v.b2, hidden, z);
  std::vector<double> dz = softmax(z);
  dz[sample.label] -= 1.0;

  const std::size_t off_b1 = h * d, off_w2 = off_b1 + h, off_b2 = off_w2 + c * h;
  std::vector<double> dhidden(h, 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    const double g = dz[k];
    const double *w2_row = v.w2.data() + k * h;
    double *gw2_row = grad.data() + off_w2 + k * h;
    for (std::size_t j = 0; j < h; ++j) {
      gw2_row[j] += scale * g * hidden[j];
      dhidden[j] += g * w2_row[j];
    }
    grad[off_b2 + k] += scale * g;
  }
  for (std::size_t j = 0; j < h; ++j) {
    const double da = scale * dhidden[j] * (1.0 - hidden[j] * hidden[j]);
    double *gw1_row = grad.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) gw1_row[i] += da * x[i];
    grad[off_b1 + j] += da;
  }
}

ParamVector batch_gradient(const ModelSpec &spec, std::span<const double> params,
                           std::span<const Sample> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("batch_gradient: empty batch");
  }
  ParamVector grad(params.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const Sample &s : batch) {
    accumulate_gradient(spec, params, s, scale, grad);
  }
  return grad;
}

}  // namespace fedprune::models
