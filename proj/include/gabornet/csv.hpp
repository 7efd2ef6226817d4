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

// CSV emitters. Every file starts with a schema comment line
// "# gabornet <table> v<version>" followed by the column header. Reals use the
// shortest representation that round-trips to the same double.

#include "gabornet/error.hpp"
#include "gabornet/features.hpp"
#include "gabornet/gabor.hpp"
#include "gabornet/stats.hpp"
#include "gabornet/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gabornet {

inline constexpr int kCsvSchemaVersion = 1;

inline std::string format_double(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s)
{
  if (s == "nan")
  {
    return std::nan("");
  }
  if (s == "inf")
  {
    return HUGE_VAL;
  }
  if (s == "-inf")
  {
    return -HUGE_VAL;
  }
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
  {
    throw Error(ErrorCode::BadConfig, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline void write_schema(std::ostream &out, std::string_view table, std::string_view columns)
{
  out << "# gabornet " << table << " v" << kCsvSchemaVersion << '\n' << columns << '\n';
}

inline std::ofstream open_output(std::filesystem::path const &path)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::Io, "cannot create " + path.string());
  }
  return out;
}

/// One row per kernel cell.
inline void write_filters_csv(std::ostream &out, FilterBank const &bank)
{
  write_schema(out, "filters", "kernel_index,sigma,lambda,theta,x,y,real,imag");
  for (std::size_t k = 0; k < bank.size(); ++k)
  {
    auto const &kern = bank.kernels[k];
    auto const  h    = kern.half();
    for (std::ptrdiff_t y = -h; y <= h; ++y)
    {
      for (std::ptrdiff_t x = -h; x <= h; ++x)
      {
        auto const v = kern.at(x, y);
        out << k << ',' << format_double(kern.params.sigma) << ',' << format_double(kern.params.lambda)
            << ',' << format_double(kern.params.theta) << ',' << x << ',' << y << ','
            << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
      }
    }
  }
}

inline void write_features_csv(std::ostream &out, FeatureSet const &set)
{
  std::string header = "label";
  auto const  dim    = set.features.empty() ? 0 : set.features.front().size();
  for (std::size_t j = 0; j < dim; ++j)
  {
    header += ",f" + std::to_string(j);
  }
  write_schema(out, "features", header);
  for (std::size_t i = 0; i < set.size(); ++i)
  {
    out << static_cast<int>(set.labels[i]);
    for (double v : set.features[i].values)
    {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

/// Reads a features CSV back (schema line and header are validated).
inline FeatureSet read_features_csv(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line) || line.rfind("# gabornet features", 0) != 0)
  {
    throw Error(ErrorCode::BadConfig, "missing features schema line");
  }
  if (!std::getline(in, line) || line.rfind("label", 0) != 0)
  {
    throw Error(ErrorCode::BadConfig, "missing features header");
  }
  FeatureSet  set;
  std::size_t dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  while (std::getline(in, line))
  {
    if (line.empty())
    {
      continue;
    }
    std::stringstream ss(line);
    std::string       cell;
    std::getline(ss, cell, ',');
    auto const label = static_cast<long>(parse_double(cell));
    if (label < 0 || label >= static_cast<long>(kNumClasses))
    {
      throw Error(ErrorCode::LabelOutOfRange, "label " + cell + " in features CSV");
    }
    FeatureVector f;
    while (std::getline(ss, cell, ','))
    {
      f.values.push_back(parse_double(cell));
    }
    if (f.size() != dim)
    {
      throw Error(ErrorCode::LengthMismatch, "features row has " + std::to_string(f.size()) +
                                                 " values, header names " + std::to_string(dim));
    }
    set.labels.push_back(static_cast<Label>(label));
    set.features.push_back(std::move(f));
  }
  return set;
}

inline void write_distances_header(std::ostream &out)
{
  write_schema(out, "distances", "batch,pair_index,digit_a,digit_b,distance");
}

inline void write_distance_rows(std::ostream &out, std::size_t batch, std::vector<DistanceRecord> const &records)
{
  for (auto const &r : records)
  {
    out << batch << ',' << r.pair_index << ',' << static_cast<int>(r.digit_a) << ','
        << static_cast<int>(r.digit_b) << ',' << format_double(r.distance) << '\n';
  }
}

inline void write_distances_csv(std::ostream &out, std::vector<BatchReport> const &reports)
{
  write_distances_header(out);
  for (auto const &r : reports)
  {
    write_distance_rows(out, r.batch_index, r.distances);
  }
}

/// accuracy is left empty for batches that were not evaluated.
inline void write_accuracy_csv(std::ostream &out, std::vector<BatchReport> const &reports)
{
  write_schema(out, "accuracy", "batch,accuracy,drifted,weights_updated,mean_principal_std");
  for (auto const &r : reports)
  {
    out << r.batch_index << ',' << (r.test_accuracy ? format_double(*r.test_accuracy) : std::string{})
        << ',' << (r.drifted ? 1 : 0) << ',' << (r.weights_updated ? 1 : 0) << ','
        << format_double(r.mean_principal_std) << '\n';
  }
}

}  // namespace gabornet
