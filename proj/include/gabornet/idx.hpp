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

// IDX container as used by MNIST:
//
//   [offset] [type]              [value]
//   0000     32 bit BE unsigned  0x00000803 (images) / 0x00000801 (labels)
//   0004     32 bit BE unsigned  number of items
//   0008     32 bit BE unsigned  rows            (images only)
//   0012     32 bit BE unsigned  cols            (images only)
//   ....     unsigned byte       payload, row-major
//
// Image bytes are mapped to b / 255.

#include "gabornet/error.hpp"
#include "gabornet/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace gabornet {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

namespace detail {

inline std::uint32_t read_be32(std::istream &in, std::filesystem::path const &path)
{
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char *>(b.data()), 4))
  {
    throw Error(ErrorCode::Truncated, "header too short in " + path.string());
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

inline void write_be32(std::ostream &out, std::uint32_t v)
{
  std::array<char, 4> b{static_cast<char>((v >> 24) & 0xff), static_cast<char>((v >> 16) & 0xff),
                        static_cast<char>((v >> 8) & 0xff), static_cast<char>(v & 0xff)};
  out.write(b.data(), 4);
}

inline std::ifstream open_idx(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  return in;
}

inline void expect_magic(std::uint32_t got, std::uint32_t want, std::filesystem::path const &path)
{
  if (got != want)
  {
    throw Error(ErrorCode::MagicMismatch, "magic " + std::to_string(got) + " (expected " +
                                              std::to_string(want) + ") in " + path.string());
  }
}

inline std::vector<unsigned char> read_payload(std::istream &in, std::size_t n,
                                               std::filesystem::path const &path)
{
  std::vector<unsigned char> bytes(n);
  in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
  {
    throw Error(ErrorCode::Truncated, "payload shorter than header promises in " + path.string());
  }
  return bytes;
}

}  // namespace detail

/// Raw IDX3 contents before normalization.
struct IdxImages
{
  std::uint32_t              count{0};
  std::uint32_t              rows{0};
  std::uint32_t              cols{0};
  std::vector<unsigned char> bytes;
};

inline IdxImages read_idx_images_raw(std::filesystem::path const &path)
{
  auto in = detail::open_idx(path);
  detail::expect_magic(detail::read_be32(in, path), kIdxImageMagic, path);
  IdxImages raw;
  raw.count = detail::read_be32(in, path);
  raw.rows  = detail::read_be32(in, path);
  raw.cols  = detail::read_be32(in, path);
  raw.bytes = detail::read_payload(
      in, std::size_t{raw.count} * std::size_t{raw.rows} * std::size_t{raw.cols}, path);
  return raw;
}

inline std::vector<Image> load_idx_images(std::filesystem::path const &path)
{
  auto const         raw = read_idx_images_raw(path);
  std::size_t const  px  = std::size_t{raw.rows} * raw.cols;
  std::vector<Image> images;
  images.reserve(raw.count);
  for (std::size_t i = 0; i < raw.count; ++i)
  {
    Image img(raw.cols, raw.rows);
    auto  dst = img.pixels();
    for (std::size_t k = 0; k < px; ++k)
    {
      dst[k] = static_cast<double>(raw.bytes[i * px + k]) / 255.0;
    }
    images.push_back(std::move(img));
  }
  return images;
}

inline std::vector<Label> load_idx_labels(std::filesystem::path const &path, bool strict = true)
{
  auto in = detail::open_idx(path);
  detail::expect_magic(detail::read_be32(in, path), kIdxLabelMagic, path);
  std::uint32_t const count = detail::read_be32(in, path);
  auto const          bytes = detail::read_payload(in, count, path);
  std::vector<Label>  labels(bytes.begin(), bytes.end());
  if (strict)
  {
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
      if (labels[i] >= kNumClasses)
      {
        throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(labels[i]) +
                                                    " at index " + std::to_string(i) + " in " +
                                                    path.string());
      }
    }
  }
  return labels;
}

inline void write_idx_images(std::filesystem::path const &path, std::uint32_t rows,
                             std::uint32_t cols, std::span<unsigned char const> bytes)
{
  std::size_t const px = std::size_t{rows} * cols;
  if (px == 0 || bytes.size() % px != 0)
  {
    throw Error(ErrorCode::DimensionMismatch, "payload is not a whole number of images");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::Io, "cannot create " + path.string());
  }
  detail::write_be32(out, kIdxImageMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(bytes.size() / px));
  detail::write_be32(out, rows);
  detail::write_be32(out, cols);
  out.write(reinterpret_cast<char const *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
  {
    throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
}

inline void write_idx_labels(std::filesystem::path const &path, std::span<unsigned char const> labels)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::Io, "cannot create " + path.string());
  }
  detail::write_be32(out, kIdxLabelMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<char const *>(labels.data()), static_cast<std::streamsize>(labels.size()));
  if (!out)
  {
    throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
}

/// Pairs an image file with its label file.
inline Dataset load_idx_dataset(std::filesystem::path const &images_path,
                                std::filesystem::path const &labels_path, Split split,
                                bool strict = true)
{
  auto images = load_idx_images(images_path);
  auto labels = load_idx_labels(labels_path, strict);
  if (images.size() != labels.size())
  {
    throw Error(ErrorCode::LengthMismatch, images_path.string() + " and " + labels_path.string() +
                                               " hold different item counts");
  }
  Dataset ds(split);
  for (std::size_t i = 0; i < images.size(); ++i)
  {
    ds.push_back({std::move(images[i]), labels[i]});
  }
  return ds;
}

struct MnistPaths
{
  std::filesystem::path images;
  std::filesystem::path labels;
};

/// Canonical MNIST file names inside `dir`.
inline MnistPaths mnist_paths(std::filesystem::path const &dir, Split split)
{
  if (split == Split::Train)
  {
    return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte"};
  }
  return {dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte"};
}

inline Dataset load_mnist(std::filesystem::path const &dir, Split split, bool strict = true)
{
  auto const paths = mnist_paths(dir, split);
  return load_idx_dataset(paths.images, paths.labels, split, strict);
}

}  // namespace gabornet
