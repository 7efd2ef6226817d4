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
#include "gabornet/image.hpp"
#include "gabornet/rng.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gabornet {

inline constexpr std::size_t kDefaultModelPerClass = 100;

/// Averages `n_per_class` randomly chosen images (without replacement) of every
/// digit into one "model digit" per class. Output is ordered 0..9.
inline std::vector<LabeledImage> build_model_digits(Dataset const &train, std::size_t n_per_class,
                                                    std::uint64_t seed)
{
  if (n_per_class == 0)
  {
    throw Error(ErrorCode::InvalidParams, "n_per_class must be at least 1");
  }
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < train.size(); ++i)
  {
    by_class[train[i].label].push_back(i);
  }
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    if (by_class[d].size() < n_per_class)
    {
      throw Error(ErrorCode::InsufficientSamples,
                  "class " + std::to_string(d) + " has " + std::to_string(by_class[d].size()) +
                      " images, need " + std::to_string(n_per_class));
    }
  }

  Rng                       rng(seed);
  std::vector<LabeledImage> models;
  models.reserve(kNumClasses);
  auto const width  = train[0].image.width();
  auto const height = train[0].image.height();
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    auto &pool = by_class[d];
    // partial Fisher-Yates: the first n_per_class slots become the sample
    for (std::size_t k = 0; k < n_per_class; ++k)
    {
      std::swap(pool[k], pool[k + rng.index(pool.size() - k)]);
    }
    std::vector<double> sum(width * height, 0.0);
    for (std::size_t k = 0; k < n_per_class; ++k)
    {
      auto const px = train[pool[k]].image.pixels();
      for (std::size_t j = 0; j < sum.size(); ++j)
      {
        sum[j] += px[j];
      }
    }
    for (auto &v : sum)
    {
      v /= static_cast<double>(n_per_class);
      v = std::min(1.0, std::max(0.0, v));
    }
    models.push_back({Image(width, height, std::move(sum)), static_cast<Label>(d)});
  }
  return models;
}

}  // namespace gabornet
