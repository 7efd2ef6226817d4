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

#include <stdexcept>
#include <string>
#include <string_view>

namespace gabornet {

enum class ErrorCode
{
  Io,
  MagicMismatch,
  Truncated,
  LabelOutOfRange,
  InsufficientSamples,
  InvalidParams,
  EmptyResponse,
  InvalidLevels,
  LengthMismatch,
  InvalidOrder,
  EmptyInput,
  NotSymmetric,
  NotPSD,
  WrongCount,
  BadArchitecture,
  DimensionMismatch,
  NonFiniteLoss,
  EmptyBatch,
  EmptyDataset,
  BadCheckpoint,
  BadConfig,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
  switch (code)
  {
  case ErrorCode::Io: return "Io";
  case ErrorCode::MagicMismatch: return "MagicMismatch";
  case ErrorCode::Truncated: return "Truncated";
  case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
  case ErrorCode::InsufficientSamples: return "InsufficientSamples";
  case ErrorCode::InvalidParams: return "InvalidParams";
  case ErrorCode::EmptyResponse: return "EmptyResponse";
  case ErrorCode::InvalidLevels: return "InvalidLevels";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::InvalidOrder: return "InvalidOrder";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::NotSymmetric: return "NotSymmetric";
  case ErrorCode::NotPSD: return "NotPSD";
  case ErrorCode::WrongCount: return "WrongCount";
  case ErrorCode::BadArchitecture: return "BadArchitecture";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
  case ErrorCode::EmptyBatch: return "EmptyBatch";
  case ErrorCode::EmptyDataset: return "EmptyDataset";
  case ErrorCode::BadCheckpoint: return "BadCheckpoint";
  case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

/// Every library failure is reported as an Error carrying a machine-checkable code.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, std::string const &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , code_(code)
  {}

  ErrorCode code() const noexcept
  {
    return code_;
  }

private:
  ErrorCode code_;
};

}  // namespace gabornet
