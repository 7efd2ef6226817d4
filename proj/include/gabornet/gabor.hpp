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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace gabornet {

struct GaborParams
{
  double lambda{4.0};  ///< wavelength, pixels
  double theta{0.0};   ///< orientation, radians in [0, pi)
  double psi{0.0};     ///< phase offset, radians
  double sigma{1.0};   ///< Gaussian envelope standard deviation, pixels
  double gamma{1.0};   ///< spatial aspect ratio

  void validate() const
  {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(gamma > 0.0))
    {
      throw Error(ErrorCode::InvalidParams, "lambda, sigma and gamma must be positive");
    }
    if (!(theta >= 0.0 && theta < std::numbers::pi))
    {
      throw Error(ErrorCode::InvalidParams, "theta must lie in [0, pi)");
    }
    if (!std::isfinite(psi))
    {
      throw Error(ErrorCode::InvalidParams, "psi must be finite");
    }
  }

  friend bool operator==(GaborParams const &, GaborParams const &) = default;
};

inline constexpr std::size_t kDefaultMaxKernelSize = 31;

struct RotatedCoords
{
  double x_prime;
  double y_prime;
};

inline RotatedCoords rotate_coords(double x, double y, double theta) noexcept
{
  double const c = std::cos(theta);
  double const s = std::sin(theta);
  return {x * c + y * s, -x * s + y * c};
}

/// Odd-sized complex kernel sampled on integer offsets around its center.
/// Storage is row-major with row index v + half and column index u + half,
/// where (u, v) is the (x, y) offset.
struct GaborKernel
{
  std::size_t         size{1};
  std::vector<double> real;
  std::vector<double> imag;
  GaborParams         params;

  // When the kernel factors as col(v) * row(u) these hold the two factors;
  // empty otherwise.
  std::vector<std::complex<double>> row_factor;
  std::vector<std::complex<double>> col_factor;

  std::ptrdiff_t half() const noexcept
  {
    return static_cast<std::ptrdiff_t>(size / 2);
  }

  bool separable() const noexcept
  {
    return !row_factor.empty();
  }

  std::complex<double> at(std::ptrdiff_t u, std::ptrdiff_t v) const noexcept
  {
    auto const idx = static_cast<std::size_t>((v + half()) * static_cast<std::ptrdiff_t>(size) +
                                              (u + half()));
    return {real[idx], imag[idx]};
  }

  /// Plain real/imag grid without Gabor parameters; used for custom filters.
  static GaborKernel from_grid(std::size_t size, std::vector<double> real, std::vector<double> imag)
  {
    if (size % 2 == 0 || real.size() != size * size || imag.size() != size * size)
    {
      throw Error(ErrorCode::InvalidParams, "kernel must be odd-sized with size^2 values per part");
    }
    GaborKernel k;
    k.size = size;
    k.real = std::move(real);
    k.imag = std::move(imag);
    return k;
  }
};

inline std::size_t kernel_size_for(double sigma, std::size_t max_size = kDefaultMaxKernelSize)
{
  auto const full = 2 * static_cast<std::size_t>(std::ceil(3.0 * sigma)) + 1;
  std::size_t cap = max_size % 2 == 1 ? max_size : max_size - 1;
  return std::max<std::size_t>(1, std::min(full, cap));
}

inline GaborKernel gabor_kernel(GaborParams const &params,
                                std::size_t        max_size = kDefaultMaxKernelSize)
{
  params.validate();
  if (max_size == 0)
  {
    throw Error(ErrorCode::InvalidParams, "max kernel size must be positive");
  }

  GaborKernel k;
  k.params = params;
  k.size   = kernel_size_for(params.sigma, max_size);
  k.real.resize(k.size * k.size);
  k.imag.resize(k.size * k.size);

  double const two_sigma_sq = 2.0 * params.sigma * params.sigma;
  double const gamma_sq     = params.gamma * params.gamma;
  double const omega        = 2.0 * std::numbers::pi / params.lambda;
  auto const   h            = k.half();
  for (std::ptrdiff_t v = -h; v <= h; ++v)
  {
    for (std::ptrdiff_t u = -h; u <= h; ++u)
    {
      auto const [xp, yp] =
          rotate_coords(static_cast<double>(u), static_cast<double>(v), params.theta);
      double const envelope = std::exp(-(xp * xp + gamma_sq * yp * yp) / two_sigma_sq);
      double const phase    = omega * xp + params.psi;
      auto const   idx      = static_cast<std::size_t>((v + h) * static_cast<std::ptrdiff_t>(k.size) + u + h);
      k.real[idx]           = envelope * std::cos(phase);
      k.imag[idx]           = envelope * std::sin(phase);
    }
  }

  // With an isotropic envelope the carrier exp(i(w(u cos t + v sin t) + psi))
  // splits into a u-factor and a v-factor as well.
  if (params.gamma == 1.0)
  {
    double const c = std::cos(params.theta);
    double const s = std::sin(params.theta);
    k.row_factor.resize(k.size);
    k.col_factor.resize(k.size);
    for (std::ptrdiff_t t = -h; t <= h; ++t)
    {
      double const td  = static_cast<double>(t);
      double const env = std::exp(-(td * td) / two_sigma_sq);
      k.row_factor[static_cast<std::size_t>(t + h)] = std::polar(env, omega * td * c + params.psi);
      k.col_factor[static_cast<std::size_t>(t + h)] = std::polar(env, omega * td * s);
    }
  }
  return k;
}

struct BankConfig
{
  std::vector<double> sigmas{1.0, 2.0, 3.0};
  std::vector<double> lambdas{4.0, 8.0, 12.0};
  std::size_t         n_thetas{8};
  double              psi{0.0};
  double              gamma{1.0};
  std::size_t         max_kernel_size{kDefaultMaxKernelSize};

  friend bool operator==(BankConfig const &, BankConfig const &) = default;
};

/// Kernels ordered lexicographically by (sigma index, lambda index, theta index).
struct FilterBank
{
  BankConfig               config;
  std::vector<GaborKernel> kernels;
  std::vector<double>      sigmas;
  std::vector<double>      lambdas;
  std::vector<double>      thetas;

  std::size_t size() const noexcept
  {
    return kernels.size();
  }

  std::size_t index_of(std::size_t sigma_idx, std::size_t lambda_idx, std::size_t theta_idx) const noexcept
  {
    return (sigma_idx * lambdas.size() + lambda_idx) * thetas.size() + theta_idx;
  }
};

inline FilterBank make_filter_bank(BankConfig const &config)
{
  if (config.sigmas.empty() || config.lambdas.empty() || config.n_thetas == 0)
  {
    throw Error(ErrorCode::InvalidParams, "filter bank needs at least one sigma, lambda and theta");
  }
  FilterBank bank;
  bank.config  = config;
  bank.sigmas  = config.sigmas;
  bank.lambdas = config.lambdas;
  for (std::size_t k = 0; k < config.n_thetas; ++k)
  {
    bank.thetas.push_back(static_cast<double>(k) * std::numbers::pi / static_cast<double>(config.n_thetas));
  }
  bank.kernels.reserve(bank.sigmas.size() * bank.lambdas.size() * bank.thetas.size());
  for (double sigma : bank.sigmas)
  {
    for (double lambda : bank.lambdas)
    {
      for (double theta : bank.thetas)
      {
        bank.kernels.push_back(gabor_kernel(
            GaborParams{lambda, theta, config.psi, sigma, config.gamma}, config.max_kernel_size));
      }
    }
  }
  return bank;
}

inline FilterBank make_filter_bank(std::vector<double> sigmas, std::vector<double> lambdas,
                                   std::size_t n_thetas)
{
  BankConfig config;
  config.sigmas   = std::move(sigmas);
  config.lambdas  = std::move(lambdas);
  config.n_thetas = n_thetas;
  return make_filter_bank(config);
}

/// Complex "same"-size response before the magnitude reduction.
struct ComplexResponse
{
  std::size_t         width{0};
  std::size_t         height{0};
  std::vector<double> real;
  std::vector<double> imag;
};

struct ResponseMatrix
{
  std::size_t         width{0};
  std::size_t         height{0};
  std::vector<double> magnitude;

  double operator()(std::size_t x, std::size_t y) const noexcept
  {
    return magnitude[y * width + x];
  }
};

namespace detail {

// dst[x] += w * src[x - shift] for every x with 0 <= x - shift < n.
inline void shifted_axpy(double *dst, double const *src, std::size_t n, std::ptrdiff_t shift, double w) noexcept
{
  auto const     len = static_cast<std::ptrdiff_t>(n);
  std::ptrdiff_t lo  = std::max<std::ptrdiff_t>(0, shift);
  std::ptrdiff_t hi  = std::min<std::ptrdiff_t>(len, len + shift);
  for (std::ptrdiff_t x = lo; x < hi; ++x)
  {
    dst[x] += w * src[x - shift];
  }
}

inline void convolve_direct(std::span<double const> image, std::size_t width, std::size_t height,
                            GaborKernel const &kernel, ComplexResponse &out)
{
  auto const h = kernel.half();
  auto const H = static_cast<std::ptrdiff_t>(height);
  for (std::ptrdiff_t y = 0; y < H; ++y)
  {
    double *re = out.real.data() + y * static_cast<std::ptrdiff_t>(width);
    double *im = out.imag.data() + y * static_cast<std::ptrdiff_t>(width);
    for (std::ptrdiff_t v = -h; v <= h; ++v)
    {
      auto const r = y - v;
      if (r < 0 || r >= H)
      {
        continue;
      }
      double const *src = image.data() + r * static_cast<std::ptrdiff_t>(width);
      for (std::ptrdiff_t u = -h; u <= h; ++u)
      {
        auto const kv = kernel.at(u, v);
        if (kv.real() != 0.0)
        {
          shifted_axpy(re, src, width, u, kv.real());
        }
        if (kv.imag() != 0.0)
        {
          shifted_axpy(im, src, width, u, kv.imag());
        }
      }
    }
  }
}

// Row pass with row_factor into a complex temporary, then column pass with
// col_factor. Exact for kernels of the form col(v) * row(u).
inline void convolve_separable(std::span<double const> image, std::size_t width, std::size_t height,
                               GaborKernel const &kernel, ComplexResponse &out)
{
  auto const          h = kernel.half();
  auto const          n = width * height;
  std::vector<double> tmp_re(n, 0.0);
  std::vector<double> tmp_im(n, 0.0);
  for (std::size_t y = 0; y < height; ++y)
  {
    double const *src = image.data() + y * width;
    for (std::ptrdiff_t u = -h; u <= h; ++u)
    {
      auto const w = kernel.row_factor[static_cast<std::size_t>(u + h)];
      shifted_axpy(tmp_re.data() + y * width, src, width, u, w.real());
      shifted_axpy(tmp_im.data() + y * width, src, width, u, w.imag());
    }
  }
  auto const H = static_cast<std::ptrdiff_t>(height);
  for (std::ptrdiff_t y = 0; y < H; ++y)
  {
    double *re = out.real.data() + y * static_cast<std::ptrdiff_t>(width);
    double *im = out.imag.data() + y * static_cast<std::ptrdiff_t>(width);
    for (std::ptrdiff_t v = -h; v <= h; ++v)
    {
      auto const r = y - v;
      if (r < 0 || r >= H)
      {
        continue;
      }
      auto const    w   = kernel.col_factor[static_cast<std::size_t>(v + h)];
      double const *tre = tmp_re.data() + r * static_cast<std::ptrdiff_t>(width);
      double const *tim = tmp_im.data() + r * static_cast<std::ptrdiff_t>(width);
      double const  wr  = w.real();
      double const  wi  = w.imag();
      for (std::size_t x = 0; x < width; ++x)
      {
        re[x] += wr * tre[x] - wi * tim[x];
        im[x] += wr * tim[x] + wi * tre[x];
      }
    }
  }
}

}  // namespace detail

/// Zero-padded, same-size convolution:
///   response(x, y) = sum_{u,v} image(x - u, y - v) * kernel(u, v).
inline ComplexResponse convolve_complex(Image const &image, GaborKernel const &kernel)
{
  ComplexResponse out;
  out.width  = image.width();
  out.height = image.height();
  out.real.assign(image.size(), 0.0);
  out.imag.assign(image.size(), 0.0);
  if (kernel.separable())
  {
    detail::convolve_separable(image.pixels(), image.width(), image.height(), kernel, out);
  }
  else
  {
    detail::convolve_direct(image.pixels(), image.width(), image.height(), kernel, out);
  }
  return out;
}

inline ResponseMatrix magnitude(ComplexResponse const &resp)
{
  ResponseMatrix out;
  out.width  = resp.width;
  out.height = resp.height;
  out.magnitude.resize(resp.real.size());
  for (std::size_t i = 0; i < resp.real.size(); ++i)
  {
    out.magnitude[i] = std::sqrt(resp.real[i] * resp.real[i] + resp.imag[i] * resp.imag[i]);
  }
  return out;
}

inline ResponseMatrix convolve(Image const &image, GaborKernel const &kernel)
{
  return magnitude(convolve_complex(image, kernel));
}

}  // namespace gabornet
