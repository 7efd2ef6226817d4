//------------------------------------------------------------------------------
//
//   Copyright 2026 The GaborNet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "gabornet/error.hpp"
#include "gabornet/features.hpp"
#include "gabornet/image.hpp"
#include "gabornet/linalg.hpp"
#include "gabornet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gabornet {

enum class Activation : std::uint32_t
{
  ReLU     = 0,
  Logistic = 1,
};

inline constexpr std::string_view to_string(Activation a) noexcept
{
  return a == Activation::ReLU ? "relu" : "logistic";
}

/// Fully connected feed-forward classifier; hidden layers use `activation`,
/// the output layer is softmax. weights[l] has shape layer_sizes[l+1] x layer_sizes[l].
struct MlpModel
{
  std::vector<std::size_t>         layer_sizes;
  std::vector<Matrix>              weights;
  std::vector<std::vector<double>> biases;
  Activation                       activation{Activation::ReLU};
  std::uint64_t                    seed{0};

  std::size_t input_size() const noexcept
  {
    return layer_sizes.empty() ? 0 : layer_sizes.front();
  }
  std::size_t output_size() const noexcept
  {
    return layer_sizes.empty() ? 0 : layer_sizes.back();
  }
  std::size_t num_layers() const noexcept
  {
    return weights.size();
  }

  friend bool operator==(MlpModel const &, MlpModel const &) = default;
};

struct LabeledFeatures
{
  FeatureVector features;
  Label         label{0};
};

struct TrainStep
{
  double                       learning_rate{0.05};
  std::span<LabeledFeatures const> batch;
};

inline MlpModel mlp_init(std::vector<std::size_t> layer_sizes, Activation activation, std::uint64_t seed)
{
  if (layer_sizes.size() < 3)
  {
    throw Error(ErrorCode::BadArchitecture, "need an input layer, at least one hidden layer and an output layer");
  }
  if (std::find(layer_sizes.begin(), layer_sizes.end(), std::size_t{0}) != layer_sizes.end())
  {
    throw Error(ErrorCode::BadArchitecture, "layer sizes must be positive");
  }
  MlpModel model;
  model.layer_sizes = std::move(layer_sizes);
  model.activation  = activation;
  model.seed        = seed;

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l)
  {
    auto const   fan_in  = model.layer_sizes[l];
    auto const   fan_out = model.layer_sizes[l + 1];
    double const bound   = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Matrix       w(fan_out, fan_in);
    for (auto &v : w.data())
    {
      v = rng.uniform(-bound, bound);
    }
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(fan_out, 0.0);
  }
  return model;
}

namespace detail {

inline double activate(Activation a, double z) noexcept
{
  if (a == Activation::ReLU)
  {
    return z < 0.0 ? 0.0 : z;
  }
  return 1.0 / (1.0 + std::exp(-z));
}

// derivative expressed through the activation output
inline double activate_grad(Activation a, double out) noexcept
{
  if (a == Activation::ReLU)
  {
    return out > 0.0 ? 1.0 : 0.0;
  }
  return out * (1.0 - out);
}

inline void softmax_inplace(std::span<double> z) noexcept
{
  double const top = *std::max_element(z.begin(), z.end());
  double       sum = 0.0;
  for (auto &v : z)
  {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto &v : z)
  {
    v /= sum;
  }
}

/// Activations of every layer for one input; back() holds the output logits.
inline std::vector<std::vector<double>> forward_all(MlpModel const &model, std::span<double const> x)
{
  if (x.size() != model.input_size())
  {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " values, model expects " +
                                                  std::to_string(model.input_size()));
  }
  std::vector<std::vector<double>> acts;
  acts.reserve(model.num_layers() + 1);
  acts.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < model.num_layers(); ++l)
  {
    auto const         &w    = model.weights[l];
    auto const         &in   = acts.back();
    std::vector<double> out  = model.biases[l];
    bool const          last = l + 1 == model.num_layers();
    for (std::size_t r = 0; r < w.rows(); ++r)
    {
      auto const row = w.row(r);
      double     z   = out[r];
      for (std::size_t c = 0; c < w.cols(); ++c)
      {
        z += row[c] * in[c];
      }
      out[r] = last ? z : activate(model.activation, z);
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

}  // namespace detail

/// Class probabilities (softmax output).
inline std::vector<double> mlp_forward(MlpModel const &model, std::span<double const> x)
{
  auto acts = detail::forward_all(model, x);
  detail::softmax_inplace(acts.back());
  return std::move(acts.back());
}

/// Argmax of the output; ties go to the lowest label.
inline Label mlp_predict(MlpModel const &model, std::span<double const> x)
{
  auto const  probs = mlp_forward(model, x);
  std::size_t best  = 0;
  for (std::size_t k = 1; k < probs.size(); ++k)
  {
    if (probs[k] > probs[best])
    {
      best = k;
    }
  }
  return static_cast<Label>(best);
}

/// Gradient of the mean cross-entropy, same shapes as the model parameters.
struct MlpGradients
{
  std::vector<Matrix>              weights;
  std::vector<std::vector<double>> biases;
  double                           loss{0.0};
};

inline MlpGradients mlp_gradients(MlpModel const &model, std::span<LabeledFeatures const> batch)
{
  if (batch.empty())
  {
    throw Error(ErrorCode::EmptyBatch, "training batch is empty");
  }
  MlpGradients g;
  for (std::size_t l = 0; l < model.num_layers(); ++l)
  {
    g.weights.emplace_back(model.weights[l].rows(), model.weights[l].cols());
    g.biases.emplace_back(model.biases[l].size(), 0.0);
  }

  double const inv_n = 1.0 / static_cast<double>(batch.size());
  for (auto const &sample : batch)
  {
    if (sample.label >= model.output_size())
    {
      throw Error(ErrorCode::LabelOutOfRange, "label exceeds output layer");
    }
    auto acts = detail::forward_all(model, sample.features.values);

    // loss = logsumexp(z) - z_y; dL/dz = softmax(z) - onehot(y)
    auto        &logits = acts.back();
    double const top    = *std::max_element(logits.begin(), logits.end());
    double       sum    = 0.0;
    for (double z : logits)
    {
      sum += std::exp(z - top);
    }
    g.loss += (top + std::log(sum) - logits[sample.label]) * inv_n;
    std::vector<double> delta(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k)
    {
      delta[k] = std::exp(logits[k] - top) / sum;
    }
    delta[sample.label] -= 1.0;

    for (std::size_t l = model.num_layers(); l-- > 0;)
    {
      auto const &in = acts[l];
      auto       &gw = g.weights[l];
      for (std::size_t r = 0; r < gw.rows(); ++r)
      {
        double const d   = delta[r] * inv_n;
        auto         row = gw.row(r);
        for (std::size_t c = 0; c < gw.cols(); ++c)
        {
          row[c] += d * in[c];
        }
        g.biases[l][r] += d;
      }
      if (l == 0)
      {
        break;
      }
      std::vector<double> prev(in.size(), 0.0);
      auto const         &w = model.weights[l];
      for (std::size_t r = 0; r < w.rows(); ++r)
      {
        auto const row = w.row(r);
        for (std::size_t c = 0; c < w.cols(); ++c)
        {
          prev[c] += row[c] * delta[r];
        }
      }
      for (std::size_t c = 0; c < prev.size(); ++c)
      {
        prev[c] *= detail::activate_grad(model.activation, in[c]);
      }
      delta = std::move(prev);
    }
  }
  return g;
}

/// Mean cross-entropy of the model on `batch`.
inline double mlp_loss(MlpModel const &model, std::span<LabeledFeatures const> batch)
{
  if (batch.empty())
  {
    throw Error(ErrorCode::EmptyBatch, "loss of an empty batch");
  }
  double loss = 0.0;
  for (auto const &sample : batch)
  {
    auto const   acts   = detail::forward_all(model, sample.features.values);
    auto const  &logits = acts.back();
    double const top    = *std::max_element(logits.begin(), logits.end());
    double       sum    = 0.0;
    for (double z : logits)
    {
      sum += std::exp(z - top);
    }
    loss += top + std::log(sum) - logits[sample.label];
  }
  return loss / static_cast<double>(batch.size());
}

/// One full-batch gradient-descent step on the mean cross-entropy. Returns the
/// loss measured before the step.
inline double mlp_train_batch(MlpModel &model, TrainStep const &step)
{
  if (!(step.learning_rate >= 0.0) || !std::isfinite(step.learning_rate))
  {
    throw Error(ErrorCode::InvalidParams, "learning rate must be finite and non-negative");
  }
  auto const g = mlp_gradients(model, step.batch);
  if (!std::isfinite(g.loss))
  {
    throw Error(ErrorCode::NonFiniteLoss, "loss diverged");
  }
  if (step.learning_rate == 0.0)
  {
    return g.loss;
  }
  for (std::size_t l = 0; l < model.num_layers(); ++l)
  {
    auto       w  = model.weights[l].data();
    auto const gw = g.weights[l].data();
    for (std::size_t i = 0; i < w.size(); ++i)
    {
      w[i] -= step.learning_rate * gw[i];
    }
    for (std::size_t i = 0; i < model.biases[l].size(); ++i)
    {
      model.biases[l][i] -= step.learning_rate * g.biases[l][i];
    }
  }
  return g.loss;
}

}  // namespace gabornet
