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

#include "gabornet/idx.hpp"
#include "gabornet/image.hpp"
#include "gabornet/rng.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace gabornet::fixtures {

/// Small synthetic "digits": class d is a bar at angle d * pi / 10 with a
/// class-dependent thickness, jittered in position and sprinkled with noise.
inline Image synthetic_digit(Label d, Rng &rng, std::size_t size = 16)
{
  Image        img(size, size);
  double const angle = static_cast<double>(d) * std::numbers::pi / 10.0;
  double const c = std::cos(angle), s = std::sin(angle);
  double const half  = static_cast<double>(size) / 2.0;
  double const dx    = rng.uniform(-1.5, 1.5);
  double const dy    = rng.uniform(-1.5, 1.5);
  double const width = 0.8 + 0.25 * static_cast<double>(d % 4);
  for (std::size_t y = 0; y < size; ++y)
  {
    for (std::size_t x = 0; x < size; ++x)
    {
      double const px   = static_cast<double>(x) - half - dx;
      double const py   = static_cast<double>(y) - half - dy;
      double const dist = std::abs(-px * s + py * c);
      double const len  = std::abs(px * c + py * s);
      double       v    = (dist < width && len < half * 0.7) ? 0.9 : 0.0;
      v += rng.uniform(0.0, 0.1);
      img(x, y) = std::min(1.0, v);
    }
  }
  return img;
}

inline Dataset synthetic_dataset(std::size_t per_class, std::uint64_t seed, Split split = Split::Train,
                                 std::size_t size = 16)
{
  Rng     rng(seed);
  Dataset ds(split);
  for (std::size_t i = 0; i < per_class; ++i)
  {
    for (std::size_t d = 0; d < kNumClasses; ++d)
    {
      ds.push_back({synthetic_digit(static_cast<Label>(d), rng, size), static_cast<Label>(d)});
    }
  }
  return ds;
}

/// Writes `data` as an MNIST-style IDX pair (pixels quantized to bytes).
inline void write_dataset_idx(Dataset const &data, std::filesystem::path const &images,
                              std::filesystem::path const &labels)
{
  std::vector<unsigned char> bytes;
  std::vector<unsigned char> tags;
  for (auto const &item : data)
  {
    for (double v : item.image.pixels())
    {
      bytes.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    tags.push_back(item.label);
  }
  auto const &first = data[0].image;
  write_idx_images(images, static_cast<std::uint32_t>(first.height()), static_cast<std::uint32_t>(first.width()), bytes);
  write_idx_labels(labels, tags);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(std::string const &name)
{
  auto dir = std::filesystem::temp_directory_path() / ("gabornet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gabornet::fixtures
