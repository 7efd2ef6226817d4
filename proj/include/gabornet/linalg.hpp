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
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gabornet {

/// Dense row-major matrix of doubles.
class Matrix
{
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols, fill)
  {}

  static Matrix identity(std::size_t n)
  {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
      m(i, i) = 1.0;
    }
    return m;
  }

  std::size_t rows() const noexcept
  {
    return rows_;
  }
  std::size_t cols() const noexcept
  {
    return cols_;
  }
  bool square() const noexcept
  {
    return rows_ == cols_;
  }

  double operator()(std::size_t r, std::size_t c) const noexcept
  {
    return data_[r * cols_ + c];
  }
  double &operator()(std::size_t r, std::size_t c) noexcept
  {
    return data_[r * cols_ + c];
  }

  std::span<double const> row(std::size_t r) const noexcept
  {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept
  {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double const> data() const noexcept
  {
    return data_;
  }
  std::span<double> data() noexcept
  {
    return data_;
  }

  double trace() const noexcept
  {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    {
      t += (*this)(i, i);
    }
    return t;
  }

  double max_abs() const noexcept
  {
    double m = 0.0;
    for (double v : data_)
    {
      m = std::max(m, std::abs(v));
    }
    return m;
  }

  friend bool operator==(Matrix const &, Matrix const &) = default;

private:
  std::size_t         rows_{0};
  std::size_t         cols_{0};
  std::vector<double> data_;
};

inline bool is_symmetric(Matrix const &m, double tol) noexcept
{
  if (!m.square())
  {
    return false;
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
  {
    for (std::size_t j = i + 1; j < m.cols(); ++j)
    {
      if (std::abs(m(i, j) - m(j, i)) > tol)
      {
        return false;
      }
    }
  }
  return true;
}

struct EigenResult
{
  std::vector<double> values;   ///< descending
  Matrix              vectors;  ///< column k pairs with values[k]; empty unless requested
  std::size_t         sweeps{0};
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Only the upper
/// triangle is read. Rotations use the Rutishauser update formulas.
inline EigenResult jacobi_eigen(Matrix a, bool want_vectors = false, std::size_t max_sweeps = 100)
{
  if (!a.square())
  {
    throw Error(ErrorCode::NotSymmetric, "eigen-decomposition needs a square matrix");
  }
  auto const n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < i; ++j)
    {
      a(i, j) = a(j, i);
    }
  }

  Matrix      v = want_vectors ? Matrix::identity(n) : Matrix{};
  EigenResult result;

  for (; result.sweeps < max_sweeps; ++result.sweeps)
  {
    double off  = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j)
      {
        off += a(i, j) * a(i, j);
      }
    }
    if (off == 0.0 || off <= 1e-30 * diag)
    {
      break;
    }

    for (std::size_t p = 0; p + 1 < n; ++p)
    {
      for (std::size_t q = p + 1; q < n; ++q)
      {
        double const apq = a(p, q);
        if (apq == 0.0)
        {
          continue;
        }
        double const app   = a(p, p);
        double const aqq   = a(q, q);
        double const theta = (aqq - app) / (2.0 * apq);
        double const t     = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double const c   = 1.0 / std::sqrt(t * t + 1.0);
        double const s   = t * c;
        double const tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
          if (k == p || k == q)
          {
            continue;
          }
          double const akp = a(k, p);
          double const akq = a(k, q);
          double const nkp = akp - s * (akq + tau * akp);
          double const nkq = akq + s * (akp - tau * akq);
          a(k, p)          = nkp;
          a(p, k)          = nkp;
          a(k, q)          = nkq;
          a(q, k)          = nkq;
        }
        if (want_vectors)
        {
          for (std::size_t k = 0; k < n; ++k)
          {
            double const vkp = v(k, p);
            double const vkq = v(k, q);
            v(k, p)          = vkp - s * (vkq + tau * vkp);
            v(k, q)          = vkq + s * (vkp - tau * vkq);
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  result.values.resize(n);
  for (std::size_t k = 0; k < n; ++k)
  {
    result.values[k] = a(order[k], order[k]);
  }
  if (want_vectors)
  {
    result.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
    {
      for (std::size_t r = 0; r < n; ++r)
      {
        result.vectors(r, k) = v(r, order[k]);
      }
    }
  }
  return result;
}

}  // namespace gabornet
