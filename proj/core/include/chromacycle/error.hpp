// Copyright 2026 The ChromaCycle Authors.
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

namespace chromacycle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (bad count, out-of-range value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite or out-of-range pixel data.
class InvalidImage : public Error {
 public:
  using Error::Error;
};

/// Tensor or image dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Parameters do not belong to the network they are used with.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public IoError {
 public:
  using IoError::IoError;
};

/// File exists but its contents cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint regime is not usable for the requested purpose.
class RegimeMismatch : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss or weight.
class DivergenceError : public Error {
 public:
  DivergenceError(int iteration, std::string term)
      : Error("non-finite value in '" + term + "' at iteration " +
              std::to_string(iteration)),
        iteration_(iteration),
        term_(std::move(term)) {}

  int iteration() const noexcept { return iteration_; }
  const std::string& term() const noexcept { return term_; }

 private:
  int iteration_;
  std::string term_;
};

}  // namespace chromacycle
