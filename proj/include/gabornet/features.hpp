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
#include "gabornet/gabor.hpp"
#include "gabornet/image.hpp"
#include "gabornet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gabornet {

inline constexpr std::size_t kDefaultEntropyLevels = 256;

/// Per-image feature vector. Layout is fixed:
///   values[2 * i]     = energy of filter i
///   values[2 * i + 1] = entropy of filter i
struct FeatureVector
{
  std::vector<double> values;

  std::size_t size() const noexcept
  {
    return values.size();
  }
  std::size_t num_filters() const noexcept
  {
    return values.size() / 2;
  }
  double energy(std::size_t filter) const noexcept
  {
    return values[2 * filter];
  }
  double entropy(std::size_t filter) const noexcept
  {
    return values[2 * filter + 1];
  }
  operator std::span<double const>() const noexcept
  {
    return values;
  }

  friend bool operator==(FeatureVector const &, FeatureVector const &) = default;
};

/// Mean squared magnitude over all cells.
inline double response_energy(ResponseMatrix const &resp)
{
  if (resp.magnitude.empty())
  {
    throw Error(ErrorCode::EmptyResponse, "response has no cells");
  }
  double sum = 0.0;
  for (double m : resp.magnitude)
  {
    sum += m * m;
  }
  return sum / static_cast<double>(resp.magnitude.size());
}

/// Shannon entropy (bits) of the magnitudes quantized into `n_levels` equal-width
/// bins over [min, max] of this response. A constant response has entropy 0.
inline double response_entropy(ResponseMatrix const &resp, std::size_t n_levels = kDefaultEntropyLevels)
{
  if (resp.magnitude.empty())
  {
    throw Error(ErrorCode::EmptyResponse, "response has no cells");
  }
  if (n_levels < 2)
  {
    throw Error(ErrorCode::InvalidLevels, "entropy needs at least 2 levels");
  }
  auto const [lo_it, hi_it] = std::minmax_element(resp.magnitude.begin(), resp.magnitude.end());
  double const lo           = *lo_it;
  double const hi           = *hi_it;
  if (!(hi > lo))
  {
    return 0.0;
  }

  std::vector<std::size_t> counts(n_levels, 0);
  double const             levels = static_cast<double>(n_levels);
  for (double m : resp.magnitude)
  {
    auto bin = static_cast<std::size_t>((m - lo) / (hi - lo) * levels);
    ++counts[std::min(bin, n_levels - 1)];
  }

  double const total = static_cast<double>(resp.magnitude.size());
  double       h     = 0.0;
  for (std::size_t c : counts)
  {
    if (c != 0)
    {
      double const p = static_cast<double>(c) / total;
      h -= p * std::log2(p);
    }
  }
  return std::max(0.0, h);
}

inline FeatureVector extract_features(Image const &image, FilterBank const &bank,
                                      std::size_t n_levels = kDefaultEntropyLevels)
{
  if (image.empty())
  {
    throw Error(ErrorCode::EmptyResponse, "cannot extract features from an empty image");
  }
  FeatureVector out;
  out.values.resize(2 * bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i)
  {
    auto const resp      = convolve(image, bank.kernels[i]);
    out.values[2 * i]     = response_energy(resp);
    out.values[2 * i + 1] = response_entropy(resp, n_levels);
  }
  return out;
}

/// Extracts every image independently across the worker pool; results are in
/// input order and do not depend on scheduling.
inline std::vector<FeatureVector> extract_all(std::span<Image const> images, FilterBank const &bank,
                                              std::size_t n_levels = kDefaultEntropyLevels)
{
  std::vector<FeatureVector> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) { out[i] = extract_features(images[i], bank, n_levels); });
  return out;
}

inline std::vector<FeatureVector> extract_all(Dataset const &data, FilterBank const &bank,
                                              std::size_t n_levels = kDefaultEntropyLevels)
{
  std::vector<FeatureVector> out(data.size());
  parallel_for(data.size(), [&](std::size_t i) { out[i] = extract_features(data[i].image, bank, n_levels); });
  return out;
}

/// Optional per-dimension z-scoring. Dimensions with zero spread are centered only.
struct Standardizer
{
  std::vector<double> mean;
  std::vector<double> scale;

  bool empty() const noexcept
  {
    return mean.empty();
  }

  static Standardizer fit(std::span<FeatureVector const> samples)
  {
    if (samples.empty())
    {
      throw Error(ErrorCode::EmptyInput, "cannot fit a standardizer on no samples");
    }
    auto const   dim = samples.front().size();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    for (auto const &f : samples)
    {
      if (f.size() != dim)
      {
        throw Error(ErrorCode::LengthMismatch, "feature vectors differ in length");
      }
      for (std::size_t j = 0; j < dim; ++j)
      {
        s.mean[j] += f.values[j];
      }
    }
    auto const n = static_cast<double>(samples.size());
    for (auto &m : s.mean)
    {
      m /= n;
    }
    std::vector<double> var(dim, 0.0);
    for (auto const &f : samples)
    {
      for (std::size_t j = 0; j < dim; ++j)
      {
        double const d = f.values[j] - s.mean[j];
        var[j] += d * d;
      }
    }
    for (std::size_t j = 0; j < dim; ++j)
    {
      double const sd = std::sqrt(var[j] / n);
      s.scale[j]      = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }

  FeatureVector apply(FeatureVector const &f) const
  {
    if (empty())
    {
      return f;
    }
    if (f.size() != mean.size())
    {
      throw Error(ErrorCode::DimensionMismatch, "feature length does not match standardizer");
    }
    FeatureVector out;
    out.values.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
    {
      out.values[j] = (f.values[j] - mean[j]) / scale[j];
    }
    return out;
  }
};

}  // namespace gabornet
