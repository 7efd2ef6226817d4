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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace gabornet {

/// Seeded generator whose derived draws do not depend on the standard library's
/// distribution implementations, so sequences match across toolchains.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}

  std::uint64_t next() noexcept
  {
    return engine_();
  }

  /// Uniform integer in [0, n), n > 0, by rejection.
  std::size_t index(std::size_t n) noexcept
  {
    auto const bound = static_cast<std::uint64_t>(n);
    auto const limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t v  = next();
    while (v >= limit)
    {
      v = next();
    }
    return static_cast<std::size_t>(v % bound);
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double unit() noexcept
  {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept
  {
    return lo + (hi - lo) * unit();
  }

  template <typename T>
  void shuffle(std::span<T> values) noexcept
  {
    for (std::size_t i = values.size(); i > 1; --i)
    {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace gabornet
