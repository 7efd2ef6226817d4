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

#include "gabornet/idx.hpp"
#include "gabornet/model_digits.hpp"

#include "fixtures.hpp"

#include "gtest/gtest.h"

#include <fstream>

namespace {

using namespace gabornet;
namespace gt = gabornet::fixtures;

template <typename Fn>
ErrorCode error_of(Fn &&fn)
{
  try
  {
    fn();
  }
  catch (Error const &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "expected a gabornet::Error";
  return ErrorCode::Io;
}

void write_raw(std::filesystem::path const &p, std::vector<unsigned char> const &bytes)
{
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<char const *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

TEST(IdxImages, SyntheticFileNormalizesBytes)
{
  auto const dir = gt::scratch_dir("idx_small");
  write_raw(dir / "img", {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 51, 102});
  auto const images = load_idx_images(dir / "img");
  ASSERT_EQ(images.size(), 1u);
  EXPECT_EQ(images[0].width(), 2u);
  EXPECT_EQ(images[0].height(), 2u);
  std::vector<double> const want{0.0, 1.0, 0.2, 0.4};
  EXPECT_EQ(std::vector<double>(images[0].pixels().begin(), images[0].pixels().end()), want);
}

TEST(IdxImages, LabelMagicIsRejected)
{
  auto const dir = gt::scratch_dir("idx_magic");
  write_raw(dir / "img", {0, 0, 8, 1, 0, 0, 0, 1, 7});
  EXPECT_EQ(error_of([&] { load_idx_images(dir / "img"); }), ErrorCode::MagicMismatch);
}

TEST(IdxImages, ShortPayloadIsTruncated)
{
  auto const                 dir = gt::scratch_dir("idx_trunc");
  std::vector<unsigned char> bytes{0, 0, 8, 3, 0, 0, 0, 10, 0, 0, 0, 2, 0, 0, 0, 2};
  bytes.resize(bytes.size() + 5 * 4, 17);
  write_raw(dir / "img", bytes);
  EXPECT_EQ(error_of([&] { load_idx_images(dir / "img"); }), ErrorCode::Truncated);

  write_raw(dir / "hdr", {0, 0, 8, 3, 0, 0});
  EXPECT_EQ(error_of([&] { load_idx_images(dir / "hdr"); }), ErrorCode::Truncated);
}

TEST(IdxImages, MissingFileIsIo)
{
  EXPECT_EQ(error_of([] { load_idx_images("/nonexistent/gabornet/file"); }), ErrorCode::Io);
}

TEST(IdxLabels, DirectRead)
{
  auto const dir = gt::scratch_dir("idx_labels");
  write_raw(dir / "lab", {0, 0, 8, 1, 0, 0, 0, 3, 7, 0, 9});
  EXPECT_EQ(load_idx_labels(dir / "lab"), (std::vector<Label>{7, 0, 9}));
}

TEST(IdxLabels, ImageMagicIsRejected)
{
  auto const dir = gt::scratch_dir("idx_labels_magic");
  write_raw(dir / "lab", {0, 0, 8, 3, 0, 0, 0, 1, 1});
  EXPECT_EQ(error_of([&] { load_idx_labels(dir / "lab"); }), ErrorCode::MagicMismatch);
}

TEST(IdxLabels, StrictModeRejectsNonDigits)
{
  auto const dir = gt::scratch_dir("idx_labels_range");
  write_raw(dir / "lab", {0, 0, 8, 1, 0, 0, 0, 2, 3, 12});
  EXPECT_EQ(error_of([&] { load_idx_labels(dir / "lab", true); }), ErrorCode::LabelOutOfRange);
  EXPECT_EQ(load_idx_labels(dir / "lab", false), (std::vector<Label>{3, 12}));
}

TEST(IdxLabels, ShortPayloadIsTruncated)
{
  auto const dir = gt::scratch_dir("idx_labels_trunc");
  write_raw(dir / "lab", {0, 0, 8, 1, 0, 0, 0, 5, 1, 2});
  EXPECT_EQ(error_of([&] { load_idx_labels(dir / "lab"); }), ErrorCode::Truncated);
}

// Property: random payloads survive a write/read cycle byte for byte, and every
// normalized pixel is in [0, 1] with 255 -> 1.0 exactly.
TEST(IdxImages, RoundTripIsBitExact)
{
  auto const dir = gt::scratch_dir("idx_roundtrip");
  Rng        rng(7);
  for (int trial = 0; trial < 20; ++trial)
  {
    auto const                 rows  = static_cast<std::uint32_t>(1 + rng.index(9));
    auto const                 cols  = static_cast<std::uint32_t>(1 + rng.index(9));
    auto const                 count = 1 + rng.index(6);
    std::vector<unsigned char> bytes(count * rows * cols);
    for (auto &b : bytes)
    {
      b = static_cast<unsigned char>(rng.index(256));
    }
    bytes.front() = 255;
    write_idx_images(dir / "img", rows, cols, bytes);
    auto const raw = read_idx_images_raw(dir / "img");
    EXPECT_EQ(raw.bytes, bytes);
    EXPECT_EQ(raw.rows, rows);
    EXPECT_EQ(raw.cols, cols);

    auto const images = load_idx_images(dir / "img");
    ASSERT_EQ(images.size(), count);
    EXPECT_EQ(images[0].pixels()[0], 1.0);
    for (auto const &img : images)
    {
      for (double v : img.pixels())
      {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Dataset, RejectsMixedGeometry)
{
  Dataset ds;
  ds.push_back({Image(2, 2), 1});
  EXPECT_EQ(error_of([&] { ds.push_back({Image(3, 2), 1}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_of([&] { ds.push_back({Image(2, 2), 10}); }), ErrorCode::LabelOutOfRange);
}

Dataset two_per_class()
{
  Dataset ds;
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    ds.push_back({Image(2, 2, {0.0, 0.0, 0.0, 0.0}), static_cast<Label>(d)});
    ds.push_back({Image(2, 2, {1.0, 1.0, 1.0, 1.0}), static_cast<Label>(d)});
  }
  return ds;
}

TEST(ModelDigits, SingleSampleIsTheImageItself)
{
  auto const data   = gt::synthetic_dataset(3, 11);
  auto const models = build_model_digits(data, 1, 5);
  ASSERT_EQ(models.size(), kNumClasses);
  for (std::size_t d = 0; d < kNumClasses; ++d)
  {
    EXPECT_EQ(models[d].label, d);
    bool found = false;
    for (auto const &item : data)
    {
      found = found || (item.label == d && item.image == models[d].image);
    }
    EXPECT_TRUE(found) << "model digit " << d << " is not one of its class images";
  }
}

TEST(ModelDigits, PixelwiseMean)
{
  auto const models = build_model_digits(two_per_class(), 2, 1);
  for (double v : models[3].image.pixels())
  {
    EXPECT_EQ(v, 0.5);
  }
}

TEST(ModelDigits, MissingClassIsInsufficient)
{
  Dataset ds;
  auto    full = gt::synthetic_dataset(12, 3);
  for (auto const &item : full)
  {
    if (item.label != 8)
    {
      ds.push_back(item);
    }
  }
  EXPECT_EQ(error_of([&] { build_model_digits(ds, 10, 1); }), ErrorCode::InsufficientSamples);
  EXPECT_EQ(error_of([&] { build_model_digits(full, 0, 1); }), ErrorCode::InvalidParams);
}

TEST(ModelDigits, DeterministicPerSeedAndBounded)
{
  auto const data = gt::synthetic_dataset(20, 4);
  auto const a    = build_model_digits(data, 5, 99);
  auto const b    = build_model_digits(data, 5, 99);
  auto const c    = build_model_digits(data, 5, 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (auto const &m : a)
  {
    for (double v : m.image.pixels())
    {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
