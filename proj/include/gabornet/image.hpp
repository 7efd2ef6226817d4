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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gabornet {

using Label = std::uint8_t;

inline constexpr std::size_t kNumClasses = 10;

/// Grayscale image, row-major, every pixel in [0, 1].
class Image
{
public:
  Image() = default;

  Image(std::size_t width, std::size_t height)
    : width_(width)
    , height_(height)
    , pixels_(width * height, 0.0)
  {}

  Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width)
    , height_(height)
    , pixels_(std::move(pixels))
  {
    if (pixels_.size() != width_ * height_)
    {
      throw Error(ErrorCode::DimensionMismatch, "pixel count does not match width x height");
    }
    for (double v : pixels_)
    {
      if (!(v >= 0.0 && v <= 1.0))
      {
        throw Error(ErrorCode::InvalidParams, "pixel value outside [0, 1]");
      }
    }
  }

  std::size_t width() const noexcept
  {
    return width_;
  }
  std::size_t height() const noexcept
  {
    return height_;
  }
  std::size_t size() const noexcept
  {
    return pixels_.size();
  }
  bool empty() const noexcept
  {
    return pixels_.empty();
  }

  double operator()(std::size_t x, std::size_t y) const noexcept
  {
    return pixels_[y * width_ + x];
  }
  double &operator()(std::size_t x, std::size_t y) noexcept
  {
    return pixels_[y * width_ + x];
  }

  std::span<double const> pixels() const noexcept
  {
    return pixels_;
  }
  std::span<double> pixels() noexcept
  {
    return pixels_;
  }

  friend bool operator==(Image const &, Image const &) = default;

private:
  std::size_t         width_{0};
  std::size_t         height_{0};
  std::vector<double> pixels_;
};

struct LabeledImage
{
  Image image;
  Label label{0};

  friend bool operator==(LabeledImage const &, LabeledImage const &) = default;
};

enum class Split
{
  Train,
  Test,
};

/// Ordered image/label pairs; all images share one geometry.
class Dataset
{
public:
  Dataset() = default;

  explicit Dataset(Split split)
    : split_(split)
  {}

  Dataset(Split split, std::vector<LabeledImage> items)
    : split_(split)
  {
    items_.reserve(items.size());
    for (auto &item : items)
    {
      push_back(std::move(item));
    }
  }

  void push_back(LabeledImage item)
  {
    if (item.label >= kNumClasses)
    {
      throw Error(ErrorCode::LabelOutOfRange, "label must be in 0..9");
    }
    if (!items_.empty() && (item.image.width() != items_.front().image.width() ||
                            item.image.height() != items_.front().image.height()))
    {
      throw Error(ErrorCode::DimensionMismatch, "dataset images must share width and height");
    }
    items_.push_back(std::move(item));
  }

  Split split() const noexcept
  {
    return split_;
  }
  std::size_t size() const noexcept
  {
    return items_.size();
  }
  bool empty() const noexcept
  {
    return items_.empty();
  }
  LabeledImage const &operator[](std::size_t i) const noexcept
  {
    return items_[i];
  }
  std::vector<LabeledImage> const &items() const noexcept
  {
    return items_;
  }
  auto begin() const noexcept
  {
    return items_.begin();
  }
  auto end() const noexcept
  {
    return items_.end();
  }

  /// First `n` items (or all of them); keeps the split tag.
  Dataset head(std::size_t n) const
  {
    Dataset out(split_);
    n = std::min(n, items_.size());
    out.items_.assign(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }

private:
  Split                     split_{Split::Train};
  std::vector<LabeledImage> items_;
};

}  // namespace gabornet
