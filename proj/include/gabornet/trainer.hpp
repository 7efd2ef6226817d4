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
#include "gabornet/gabor.hpp"
#include "gabornet/image.hpp"
#include "gabornet/mlp.hpp"
#include "gabornet/model_digits.hpp"
#include "gabornet/parallel.hpp"
#include "gabornet/rng.hpp"
#include "gabornet/stats.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gabornet {

struct TrainConfig
{
  std::size_t              batch_size{256};
  double                   drift_factor{1.1};
  std::size_t              n_model_per_class{kDefaultModelPerClass};
  std::uint64_t            seed{1};
  double                   learning_rate{0.05};
  std::size_t              max_batches{std::numeric_limits<std::size_t>::max()};
  double                   minkowski_p{2.0};
  std::size_t              entropy_levels{kDefaultEntropyLevels};
  std::vector<std::size_t> hidden{100};
  Activation               activation{Activation::ReLU};
  std::size_t              init_epochs{50};    ///< GD steps on the model-digit features
  std::size_t              update_steps{50};   ///< GD steps per opened gate
  std::size_t              eval_every{1};      ///< 0 evaluates only after the last batch
  bool                     standardize{true};
  bool                     freeze_references{false};  ///< keep the batch-0 references for the whole run

  void validate() const
  {
    if (batch_size < kNumClasses)
    {
      throw Error(ErrorCode::BadConfig, "batch_size must be at least 10");
    }
    if (max_batches < 1)
    {
      throw Error(ErrorCode::BadConfig, "max_batches must be at least 1");
    }
    if (!(drift_factor >= 0.0))
    {
      throw Error(ErrorCode::BadConfig, "drift_factor must be non-negative");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    {
      throw Error(ErrorCode::BadConfig, "learning_rate must be finite and non-negative");
    }
    if (!(minkowski_p >= 1.0))
    {
      throw Error(ErrorCode::BadConfig, "minkowski_p must be >= 1");
    }
    if (entropy_levels < 2)
    {
      throw Error(ErrorCode::BadConfig, "entropy_levels must be >= 2");
    }
    if (n_model_per_class < 1)
    {
      throw Error(ErrorCode::BadConfig, "n_model_per_class must be >= 1");
    }
    if (hidden.empty())
    {
      throw Error(ErrorCode::BadConfig, "at least one hidden layer is required");
    }
  }
};

/// Per-batch record behind the accuracy and distance time series.
struct BatchReport
{
  std::size_t                        batch_index{0};
  std::size_t                        batch_size{0};
  std::array<double, kNumClasses>    class_std{};      ///< NaN when the class has < 2 samples
  std::array<bool, kNumClasses>      class_drifted{};
  bool                               drifted{false};
  bool                               weights_updated{false};
  std::optional<double>              test_accuracy;
  double                             mean_principal_std{0.0};
  std::vector<DistanceRecord>        distances;        ///< between reference centroids after this batch
};

/// Seeds for the independent random streams of one run.
struct RunSeeds
{
  std::uint64_t model_digits;
  std::uint64_t shuffle;
  std::uint64_t mlp;

  static RunSeeds derive(std::uint64_t seed)
  {
    Rng rng(seed);
    return {rng.next(), rng.next(), rng.next()};
  }
};

/// Seeded shuffle once, then contiguous batches; the final short batch is kept.
inline std::vector<std::vector<std::size_t>> batch_iter(std::size_t n_items, std::size_t batch_size,
                                                        std::uint64_t seed)
{
  if (batch_size == 0)
  {
    throw Error(ErrorCode::InvalidParams, "batch_size must be at least 1");
  }
  std::vector<std::size_t> order(n_items);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n_items; start += batch_size)
  {
    auto const stop = std::min(n_items, start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return batches;
}

inline std::vector<std::vector<std::size_t>> batch_iter(Dataset const &train, std::size_t batch_size,
                                                        std::uint64_t seed)
{
  return batch_iter(train.size(), batch_size, seed);
}

/// Features of a whole dataset, index-aligned with its items.
struct FeatureSet
{
  std::vector<FeatureVector> features;
  std::vector<Label>         labels;

  std::size_t size() const noexcept
  {
    return features.size();
  }
};

inline FeatureSet extract_set(Dataset const &data, FilterBank const &bank, std::size_t n_levels)
{
  FeatureSet set;
  set.features = extract_all(data, bank, n_levels);
  set.labels.reserve(data.size());
  for (auto const &item : data)
  {
    set.labels.push_back(item.label);
  }
  return set;
}

/// Fraction of items whose prediction equals the label. Features are passed
/// through `standardizer` first (a no-op when it is empty).
inline double evaluate(MlpModel const &model, Standardizer const &standardizer, FeatureSet const &test)
{
  if (test.size() == 0)
  {
    throw Error(ErrorCode::EmptyDataset, "cannot evaluate on an empty test set");
  }
  std::vector<unsigned char> hit(test.size(), 0);
  parallel_for(test.size(), [&](std::size_t i) {
    auto const x = standardizer.apply(test.features[i]);
    hit[i]       = mlp_predict(model, x.values) == test.labels[i] ? 1 : 0;
  });
  auto const correct = std::accumulate(hit.begin(), hit.end(), std::size_t{0});
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

inline double evaluate(MlpModel const &model, Standardizer const &standardizer, Dataset const &test,
                       FilterBank const &bank, std::size_t entropy_levels)
{
  if (test.empty())
  {
    throw Error(ErrorCode::EmptyDataset, "cannot evaluate on an empty test set");
  }
  if (model.input_size() != 2 * bank.size())
  {
    throw Error(ErrorCode::DimensionMismatch, "model input size does not match the filter bank");
  }
  return evaluate(model, standardizer, extract_set(test, bank, entropy_levels));
}

inline double evaluate(MlpModel const &model, Dataset const &test, FilterBank const &bank,
                       TrainConfig const &config)
{
  return evaluate(model, Standardizer{}, test, bank, config.entropy_levels);
}

struct TrainingResult
{
  MlpModel                 model;
  MlpModel                 initial_model;  ///< state right after model-digit initialization
  Standardizer             standardizer;
  std::vector<BatchReport> reports;
  std::size_t              updates_used{0};
  std::size_t              total_batches{0};
  double                   final_accuracy{0.0};

  double update_ratio() const noexcept
  {
    return total_batches == 0 ? 0.0 : static_cast<double>(updates_used) / static_cast<double>(total_batches);
  }
};

namespace detail {

template <typename BatchFeatures>
TrainingResult run_training_impl(Dataset const &train, BatchFeatures &&batch_features,
                                 FeatureSet const &test, FilterBank const &bank,
                                 TrainConfig const &config)
{
  config.validate();
  if (train.empty())
  {
    throw Error(ErrorCode::EmptyDataset, "training set is empty");
  }
  auto const seeds = RunSeeds::derive(config.seed);
  auto const dim   = 2 * bank.size();

  // (1) model digits and their features
  auto const                 models = build_model_digits(train, config.n_model_per_class, seeds.model_digits);
  std::vector<FeatureVector> model_features(models.size());
  parallel_for(models.size(), [&](std::size_t d) {
    model_features[d] = extract_features(models[d].image, bank, config.entropy_levels);
  });

  auto batches = batch_iter(train.size(), config.batch_size, seeds.shuffle);
  if (batches.size() > config.max_batches)
  {
    batches.resize(config.max_batches);
  }
  std::vector<FeatureVector> current = batch_features(batches.front());

  TrainingResult result;
  if (config.standardize)
  {
    std::vector<FeatureVector> fit_set = model_features;
    fit_set.insert(fit_set.end(), current.begin(), current.end());
    result.standardizer = Standardizer::fit(fit_set);
  }
  for (auto &f : model_features)
  {
    f = result.standardizer.apply(f);
  }

  std::vector<std::size_t> layers{dim};
  layers.insert(layers.end(), config.hidden.begin(), config.hidden.end());
  layers.push_back(kNumClasses);
  result.model = mlp_init(layers, config.activation, seeds.mlp);

  std::vector<LabeledFeatures> init_batch;
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    init_batch.push_back({model_features[d], static_cast<Label>(d)});
  }
  for (std::size_t e = 0; e < config.init_epochs; ++e)
  {
    mlp_train_batch(result.model, {config.learning_rate, init_batch});
  }
  result.initial_model = result.model;

  // (2) the model digits alone form the starting reference (n = 1, zero spread),
  // so the first batch opens the gate for any finite factor and its stats
  // (together with the model digit) become the reference.
  std::array<ClassStats, kNumClasses> reference;
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    reference[d].label         = static_cast<Label>(d);
    reference[d].centroid      = model_features[d].values;
    reference[d].covariance    = Matrix(dim, dim);
    reference[d].principal_std = 0.0;
    reference[d].n             = 1;
  }

  // (3) drift-gated pass over the batches
  for (std::size_t b = 0; b < batches.size(); ++b)
  {
    if (b > 0)
    {
      current = batch_features(batches[b]);
    }
    if (current.empty())
    {
      throw Error(ErrorCode::EmptyBatch, "batch " + std::to_string(b) + " is empty");
    }
    std::array<std::vector<FeatureVector>, kNumClasses> by_class;
    std::vector<LabeledFeatures>                        update_set;
    update_set.reserve(current.size() + kNumClasses);
    for (std::size_t i = 0; i < current.size(); ++i)
    {
      auto const label = train[batches[b][i]].label;
      auto       x     = result.standardizer.apply(current[i]);
      by_class[label].push_back(x);
      update_set.push_back({std::move(x), label});
    }

    BatchReport report;
    report.batch_index = b;
    report.batch_size  = current.size();
    report.class_std.fill(std::numeric_limits<double>::quiet_NaN());
    std::array<std::optional<ClassStats>, kNumClasses> fresh;
    double                                             std_sum = 0.0;
    std::size_t                                        std_n   = 0;
    for (std::size_t d = 0; d < kNumClasses; ++d)
    {
      auto const &samples = by_class[d];
      if (samples.size() < 2)
      {
        continue;
      }
      if (b == 0)
      {
        std::vector<FeatureVector> with_model{model_features[d]};
        with_model.insert(with_model.end(), samples.begin(), samples.end());
        fresh[d] = class_stats(static_cast<Label>(d), with_model);
      }
      else
      {
        fresh[d] = class_stats(static_cast<Label>(d), samples);
      }
      double const spread = b == 0 ? principal_std_of_samples(samples) : fresh[d]->principal_std;
      report.class_std[d] = spread;
      std_sum += spread;
      ++std_n;
      report.class_drifted[d] = drift_exceeded(spread, reference[d].principal_std, config.drift_factor);
      report.drifted          = report.drifted || report.class_drifted[d];
    }
    report.mean_principal_std = std_n == 0 ? 0.0 : std_sum / static_cast<double>(std_n);

    if (report.drifted)
    {
      for (std::size_t d = 0; d < kNumClasses; ++d)
      {
        if (report.class_drifted[d])
        {
          FeatureVector c{fresh[d]->centroid};
          update_set.push_back({std::move(c), static_cast<Label>(d)});
          if (b == 0 || !config.freeze_references)
          {
            reference[d] = std::move(*fresh[d]);
          }
        }
      }
      for (std::size_t s = 0; s < config.update_steps; ++s)
      {
        mlp_train_batch(result.model, {config.learning_rate, update_set});
      }
      report.weights_updated = config.update_steps > 0;
      if (report.weights_updated)
      {
        ++result.updates_used;
      }
    }

    std::vector<std::vector<double>> centroids;
    for (auto const &r : reference)
    {
      centroids.push_back(r.centroid);
    }
    report.distances = pairwise_centroid_distances(centroids, config.minkowski_p);

    bool const last = b + 1 == batches.size();
    if (last || (config.eval_every > 0 && b % config.eval_every == 0))
    {
      report.test_accuracy = evaluate(result.model, result.standardizer, test);
    }
    result.reports.push_back(std::move(report));
  }

  result.total_batches  = batches.size();
  result.final_accuracy = *result.reports.back().test_accuracy;
  return result;
}

}  // namespace detail

/// Drift-gated training on precomputed train/test features.
inline TrainingResult run_training(Dataset const &train, FeatureSet const &train_features,
                                   FeatureSet const &test, FilterBank const &bank,
                                   TrainConfig const &config)
{
  if (train_features.size() != train.size())
  {
    throw Error(ErrorCode::LengthMismatch, "train features are not aligned with the training set");
  }
  auto lookup = [&](std::vector<std::size_t> const &idx) {
    std::vector<FeatureVector> out;
    out.reserve(idx.size());
    for (auto i : idx)
    {
      out.push_back(train_features.features[i]);
    }
    return out;
  };
  return detail::run_training_impl(train, lookup, test, bank, config);
}

/// Drift-gated training that extracts each batch's features as it arrives.
inline TrainingResult run_training(Dataset const &train, Dataset const &test, FilterBank const &bank,
                                   TrainConfig const &config)
{
  config.validate();
  if (test.empty())
  {
    throw Error(ErrorCode::EmptyDataset, "test set is empty");
  }
  auto const test_features = extract_set(test, bank, config.entropy_levels);
  auto       extract_batch = [&](std::vector<std::size_t> const &idx) {
    std::vector<FeatureVector> out(idx.size());
    parallel_for(idx.size(), [&](std::size_t i) {
      out[i] = extract_features(train[idx[i]].image, bank, config.entropy_levels);
    });
    return out;
  };
  return detail::run_training_impl(train, extract_batch, test_features, bank, config);
}

}  // namespace gabornet
