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
#include "gabornet/linalg.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gabornet {

inline constexpr std::size_t kNumPairs = kNumClasses * (kNumClasses - 1) / 2;

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPsdTolerance      = 1e-7;

/// Order-p Minkowski distance, p >= 1.
inline double minkowski(std::span<double const> x1, std::span<double const> x2, double p = 2.0)
{
  if (x1.size() != x2.size())
  {
    throw Error(ErrorCode::LengthMismatch, "minkowski operands differ in length");
  }
  if (!(p >= 1.0))
  {
    throw Error(ErrorCode::InvalidOrder, "minkowski order must be >= 1");
  }
  double sum = 0.0;
  if (p == 1.0)
  {
    for (std::size_t i = 0; i < x1.size(); ++i)
    {
      sum += std::abs(x1[i] - x2[i]);
    }
    return sum;
  }
  if (p == 2.0)
  {
    for (std::size_t i = 0; i < x1.size(); ++i)
    {
      double const d = x1[i] - x2[i];
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  if (std::isinf(p))
  {
    for (std::size_t i = 0; i < x1.size(); ++i)
    {
      sum = std::max(sum, std::abs(x1[i] - x2[i]));
    }
    return sum;
  }
  for (std::size_t i = 0; i < x1.size(); ++i)
  {
    sum += std::pow(std::abs(x1[i] - x2[i]), p);
  }
  return std::pow(sum, 1.0 / p);
}

namespace detail {

template <typename Sample>
std::span<double const> as_values(Sample const &s) noexcept
{
  return std::span<double const>(s);
}

template <typename Sample>
std::size_t common_dim(std::span<Sample const> samples)
{
  auto const dim = as_values(samples.front()).size();
  for (auto const &s : samples)
  {
    if (as_values(s).size() != dim)
    {
      throw Error(ErrorCode::LengthMismatch, "samples differ in dimension");
    }
  }
  return dim;
}

}  // namespace detail

/// Component-wise mean.
template <typename Sample>
std::vector<double> centroid(std::span<Sample const> samples)
{
  if (samples.empty())
  {
    throw Error(ErrorCode::EmptyInput, "centroid of no samples");
  }
  auto const          dim = detail::common_dim(samples);
  std::vector<double> mean(dim, 0.0);
  for (auto const &s : samples)
  {
    auto const v = detail::as_values(s);
    for (std::size_t j = 0; j < dim; ++j)
    {
      mean[j] += v[j];
    }
  }
  for (auto &m : mean)
  {
    m /= static_cast<double>(samples.size());
  }
  return mean;
}

template <typename Sample>
std::vector<double> centroid(std::vector<Sample> const &samples)
{
  return centroid(std::span<Sample const>(samples));
}

/// Unbiased sample covariance S = 1/(n-1) sum (X_i - mean)(X_i - mean)'.
/// Accumulated with Welford's co-moment update in one pass.
template <typename Sample>
Matrix covariance(std::span<Sample const> samples)
{
  if (samples.size() < 2)
  {
    throw Error(ErrorCode::InsufficientSamples, "covariance needs at least 2 samples");
  }
  auto const          dim = detail::common_dim(samples);
  std::vector<double> mean(dim, 0.0);
  std::vector<double> delta(dim, 0.0);
  Matrix              comoment(dim, dim);
  double              count = 0.0;
  for (auto const &s : samples)
  {
    auto const v = detail::as_values(s);
    count += 1.0;
    for (std::size_t j = 0; j < dim; ++j)
    {
      delta[j] = v[j] - mean[j];
      mean[j] += delta[j] / count;
    }
    // comoment += (x - old_mean)(x - new_mean)'
    for (std::size_t i = 0; i < dim; ++i)
    {
      double const di  = delta[i];
      auto         row = comoment.row(i);
      for (std::size_t j = i; j < dim; ++j)
      {
        row[j] += di * (v[j] - mean[j]);
      }
    }
  }
  double const denom = count - 1.0;
  for (std::size_t i = 0; i < dim; ++i)
  {
    for (std::size_t j = i; j < dim; ++j)
    {
      double const c = comoment(i, j) / denom;
      comoment(i, j) = c;
      comoment(j, i) = c;
    }
  }
  return comoment;
}

template <typename Sample>
Matrix covariance(std::vector<Sample> const &samples)
{
  return covariance(std::span<Sample const>(samples));
}

namespace detail {

inline double checked_principal(std::vector<double> const &eigenvalues)
{
  double const top   = eigenvalues.empty() ? 0.0 : eigenvalues.front();
  double const floor = -kPsdTolerance * std::max(1.0, std::abs(top));
  for (double ev : eigenvalues)
  {
    if (ev < floor)
    {
      throw Error(ErrorCode::NotPSD, "matrix has a negative eigenvalue " + std::to_string(ev));
    }
  }
  return std::sqrt(std::max(0.0, top));
}

}  // namespace detail

/// sqrt of the largest eigenvalue of a symmetric PSD matrix.
inline double principal_std(Matrix const &s)
{
  double const tol = kSymmetryTolerance * std::max(1.0, s.max_abs());
  if (!is_symmetric(s, tol))
  {
    throw Error(ErrorCode::NotSymmetric, "covariance matrix is not symmetric");
  }
  return detail::checked_principal(jacobi_eigen(s).values);
}

/// Principal standard deviation straight from the samples. When there are
/// fewer samples than dimensions the nonzero spectrum of S equals that of the
/// n x n Gram matrix of centered samples, which is far cheaper to diagonalize.
template <typename Sample>
double principal_std_of_samples(std::span<Sample const> samples)
{
  if (samples.size() < 2)
  {
    throw Error(ErrorCode::InsufficientSamples, "spread needs at least 2 samples");
  }
  auto const dim = detail::common_dim(samples);
  auto const n   = samples.size();
  if (n > dim)
  {
    return principal_std(covariance(samples));
  }
  auto const mean = centroid(samples);
  Matrix     centered(n, dim);
  for (std::size_t i = 0; i < n; ++i)
  {
    auto const v = detail::as_values(samples[i]);
    for (std::size_t j = 0; j < dim; ++j)
    {
      centered(i, j) = v[j] - mean[j];
    }
  }
  Matrix       gram(n, n);
  double const denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < n; ++a)
  {
    for (std::size_t b = a; b < n; ++b)
    {
      double dot = 0.0;
      auto   ra  = centered.row(a);
      auto   rb  = centered.row(b);
      for (std::size_t j = 0; j < dim; ++j)
      {
        dot += ra[j] * rb[j];
      }
      gram(a, b) = dot / denom;
      gram(b, a) = dot / denom;
    }
  }
  return detail::checked_principal(jacobi_eigen(gram).values);
}

template <typename Sample>
double principal_std_of_samples(std::vector<Sample> const &samples)
{
  return principal_std_of_samples(std::span<Sample const>(samples));
}

/// Per-class drift reference: centroid, covariance and principal spread.
struct ClassStats
{
  Label               label{0};
  std::vector<double> centroid;
  Matrix              covariance;
  double              principal_std{0.0};
  std::size_t         n{0};
};

template <typename Sample>
ClassStats class_stats(Label label, std::span<Sample const> samples)
{
  ClassStats s;
  s.label         = label;
  s.n             = samples.size();
  s.centroid      = centroid(samples);
  s.covariance    = covariance(samples);
  s.principal_std = principal_std_of_samples(samples);
  return s;
}

template <typename Sample>
ClassStats class_stats(Label label, std::vector<Sample> const &samples)
{
  return class_stats(label, std::span<Sample const>(samples));
}

struct DigitPair
{
  Label a;
  Label b;
};

/// d_0 = (0,1), d_1 = (0,2), ..., d_8 = (0,9), d_9 = (1,2), ..., d_44 = (8,9).
inline constexpr std::array<DigitPair, kNumPairs> digit_pairs() noexcept
{
  std::array<DigitPair, kNumPairs> pairs{};
  std::size_t                      k = 0;
  for (std::size_t a = 0; a < kNumClasses; ++a)
  {
    for (std::size_t b = a + 1; b < kNumClasses; ++b)
    {
      pairs[k++] = {static_cast<Label>(a), static_cast<Label>(b)};
    }
  }
  return pairs;
}

struct DistanceRecord
{
  std::size_t pair_index{0};
  Label       digit_a{0};
  Label       digit_b{0};
  double      distance{0.0};

  friend bool operator==(DistanceRecord const &, DistanceRecord const &) = default;
};

template <typename Sample>
std::vector<DistanceRecord> pairwise_centroid_distances(std::span<Sample const> centroids, double p = 2.0)
{
  if (centroids.size() != kNumClasses)
  {
    throw Error(ErrorCode::WrongCount, "expected 10 centroids, got " + std::to_string(centroids.size()));
  }
  std::vector<DistanceRecord> out;
  out.reserve(kNumPairs);
  auto const pairs = digit_pairs();
  for (std::size_t k = 0; k < kNumPairs; ++k)
  {
    auto const [a, b] = pairs[k];
    out.push_back({k, a, b,
                   minkowski(detail::as_values(centroids[a]), detail::as_values(centroids[b]), p)});
  }
  return out;
}

template <typename Sample>
std::vector<DistanceRecord> pairwise_centroid_distances(std::vector<Sample> const &centroids, double p = 2.0)
{
  return pairwise_centroid_distances(std::span<Sample const>(centroids), p);
}

/// True iff the current spread exceeds `factor` times the reference spread.
/// factor = +inf never fires; factor = 0 fires on any positive spread.
inline bool drift_exceeded(double current_std, double reference_std, double factor)
{
  if (!(factor >= 0.0) || !(current_std >= 0.0) || !(reference_std >= 0.0))
  {
    throw Error(ErrorCode::InvalidParams, "drift inputs must be non-negative");
  }
  if (std::isinf(factor))
  {
    return false;
  }
  if (reference_std == 0.0)
  {
    return current_std > 0.0;
  }
  return current_std > factor * reference_std;
}

}  // namespace gabornet
