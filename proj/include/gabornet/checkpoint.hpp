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

// Binary checkpoint, all integers and IEEE-754 doubles little-endian:
//
//   char[8]   "GBNTCKPT"
//   u32       format version (1)
//   u32       activation (0 = relu, 1 = logistic)
//   u64       seed
//   u64       L, then u64[L] layer sizes
//   u64       entropy levels
//   u64       S, then f64[S] sigmas
//   u64       K, then f64[K] lambdas
//   u64       theta count
//   f64       psi
//   f64       gamma
//   u64       max kernel size
//   u64       D (0 = no standardizer), then f64[D] mean, f64[D] scale
//   per layer l: f64[rows * cols] weights (row-major), f64[rows] biases
//
// Everything needed to rebuild the feature pipeline and the classifier.

#include "gabornet/error.hpp"
#include "gabornet/features.hpp"
#include "gabornet/gabor.hpp"
#include "gabornet/mlp.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace gabornet {

inline constexpr std::array<char, 8> kCheckpointMagic{'G', 'B', 'N', 'T', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t       kCheckpointVersion = 1;

struct Checkpoint
{
  MlpModel     model;
  Standardizer standardizer;
  BankConfig   bank;
  std::size_t  entropy_levels{kDefaultEntropyLevels};
};

namespace detail {

inline void put_u64(std::ostream &out, std::uint64_t v)
{
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i)
  {
    b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  out.write(b.data(), 8);
}

inline void put_u32(std::ostream &out, std::uint32_t v)
{
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i)
  {
    b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  out.write(b.data(), 4);
}

inline void put_f64(std::ostream &out, double v)
{
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void put_f64s(std::ostream &out, std::span<double const> vs)
{
  for (double v : vs)
  {
    put_f64(out, v);
  }
}

class Reader
{
public:
  explicit Reader(std::istream &in)
    : in_(in)
  {}

  std::uint64_t u64()
  {
    std::array<unsigned char, 8> b{};
    read(b.data(), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
    {
      v = (v << 8) | b[static_cast<std::size_t>(i)];
    }
    return v;
  }

  std::uint32_t u32()
  {
    std::array<unsigned char, 4> b{};
    read(b.data(), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
    {
      v = (v << 8) | b[static_cast<std::size_t>(i)];
    }
    return v;
  }

  double f64()
  {
    return std::bit_cast<double>(u64());
  }

  std::size_t count(std::uint64_t limit = std::uint64_t{1} << 32)
  {
    auto const n = u64();
    if (n > limit)
    {
      throw Error(ErrorCode::BadCheckpoint, "implausible element count in checkpoint");
    }
    return static_cast<std::size_t>(n);
  }

  std::vector<double> f64s(std::size_t n)
  {
    std::vector<double> v(n);
    for (auto &x : v)
    {
      x = f64();
    }
    return v;
  }

  void read(unsigned char *dst, std::size_t n)
  {
    if (!in_.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n)))
    {
      throw Error(ErrorCode::BadCheckpoint, "checkpoint is truncated");
    }
  }

private:
  std::istream &in_;
};

}  // namespace detail

inline void write_checkpoint(std::ostream &out, Checkpoint const &ckpt)
{
  auto const &m = ckpt.model;
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put_u32(out, kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(m.activation));
  detail::put_u64(out, m.seed);
  detail::put_u64(out, m.layer_sizes.size());
  for (auto s : m.layer_sizes)
  {
    detail::put_u64(out, s);
  }
  detail::put_u64(out, ckpt.entropy_levels);
  detail::put_u64(out, ckpt.bank.sigmas.size());
  detail::put_f64s(out, ckpt.bank.sigmas);
  detail::put_u64(out, ckpt.bank.lambdas.size());
  detail::put_f64s(out, ckpt.bank.lambdas);
  detail::put_u64(out, ckpt.bank.n_thetas);
  detail::put_f64(out, ckpt.bank.psi);
  detail::put_f64(out, ckpt.bank.gamma);
  detail::put_u64(out, ckpt.bank.max_kernel_size);
  detail::put_u64(out, ckpt.standardizer.mean.size());
  detail::put_f64s(out, ckpt.standardizer.mean);
  detail::put_f64s(out, ckpt.standardizer.scale);
  for (std::size_t l = 0; l < m.num_layers(); ++l)
  {
    detail::put_f64s(out, m.weights[l].data());
    detail::put_f64s(out, m.biases[l]);
  }
  if (!out)
  {
    throw Error(ErrorCode::Io, "checkpoint write failed");
  }
}

inline Checkpoint read_checkpoint(std::istream &in)
{
  detail::Reader      r(in);
  std::array<char, 8> magic{};
  r.read(reinterpret_cast<unsigned char *>(magic.data()), magic.size());
  if (magic != kCheckpointMagic)
  {
    throw Error(ErrorCode::BadCheckpoint, "not a gabornet checkpoint");
  }
  if (auto const version = r.u32(); version != kCheckpointVersion)
  {
    throw Error(ErrorCode::BadCheckpoint, "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  auto const act = r.u32();
  if (act > 1)
  {
    throw Error(ErrorCode::BadCheckpoint, "unknown activation tag");
  }
  ckpt.model.activation = static_cast<Activation>(act);
  ckpt.model.seed       = r.u64();
  auto const n_layers   = r.count(64);
  for (std::size_t i = 0; i < n_layers; ++i)
  {
    ckpt.model.layer_sizes.push_back(r.count());
  }
  if (n_layers < 2)
  {
    throw Error(ErrorCode::BadCheckpoint, "checkpoint holds fewer than two layers");
  }
  ckpt.entropy_levels       = r.count();
  ckpt.bank.sigmas          = r.f64s(r.count(1024));
  ckpt.bank.lambdas         = r.f64s(r.count(1024));
  ckpt.bank.n_thetas        = r.count(1024);
  ckpt.bank.psi             = r.f64();
  ckpt.bank.gamma           = r.f64();
  ckpt.bank.max_kernel_size = r.count(4096);
  auto const dim            = r.count(1u << 20);
  ckpt.standardizer.mean    = r.f64s(dim);
  ckpt.standardizer.scale   = r.f64s(dim);
  for (std::size_t l = 0; l + 1 < n_layers; ++l)
  {
    auto const rows = ckpt.model.layer_sizes[l + 1];
    auto const cols = ckpt.model.layer_sizes[l];
    Matrix     w(rows, cols);
    for (auto &v : w.data())
    {
      v = r.f64();
    }
    ckpt.model.weights.push_back(std::move(w));
    ckpt.model.biases.push_back(r.f64s(rows));
  }
  return ckpt;
}

inline void save_checkpoint(std::filesystem::path const &path, Checkpoint const &ckpt)
{
  if (path.has_parent_path())
  {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::Io, "cannot create " + path.string());
  }
  write_checkpoint(out, ckpt);
}

inline Checkpoint load_checkpoint(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  return read_checkpoint(in);
}

}  // namespace gabornet
