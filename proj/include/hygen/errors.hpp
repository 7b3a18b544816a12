// Copyright (c) 2026 The HyGEN-cpp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hygen {

/// Process exit codes shared by the library and the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kIo = 2,
  kNumerical = 3,
  kThreshold = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kUsage; }
};

#define HYGEN_DEFINE_ERROR(Name, Code)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    using Error::Error;                                                 \
    ExitCode exit_code() const noexcept override { return Code; }       \
  }

/// Operand shapes are incompatible.
HYGEN_DEFINE_ERROR(ShapeError, ExitCode::kUsage);
/// An argument is outside its valid range.
HYGEN_DEFINE_ERROR(ParameterError, ExitCode::kUsage);
/// An input is well-typed but semantically empty or degenerate.
HYGEN_DEFINE_ERROR(DomainError, ExitCode::kUsage);
/// An object is used before it holds what the operation needs.
HYGEN_DEFINE_ERROR(StateError, ExitCode::kUsage);
/// A sampler ran out of retries without finding a valid set.
HYGEN_DEFINE_ERROR(SamplingExhausted, ExitCode::kUsage);
/// Malformed command line or configuration key.
HYGEN_DEFINE_ERROR(UsageError, ExitCode::kUsage);
/// A file is malformed.
HYGEN_DEFINE_ERROR(FormatError, ExitCode::kIo);
/// A file references an id that does not exist.
HYGEN_DEFINE_ERROR(ReferentialError, ExitCode::kIo);
/// A file could not be opened, read or written.
HYGEN_DEFINE_ERROR(IoError, ExitCode::kIo);
/// A checkpoint does not match this build or the dataset it is used with.
HYGEN_DEFINE_ERROR(VersionError, ExitCode::kIo);
/// A loss or gradient became NaN or infinite.
HYGEN_DEFINE_ERROR(NumericalError, ExitCode::kNumerical);

#undef HYGEN_DEFINE_ERROR

}  // namespace hygen
