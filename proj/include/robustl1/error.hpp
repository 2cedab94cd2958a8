/*
 * Copyright 2026 The robustl1 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace robustl1 {

enum class ErrorCode {
  InvalidArgument,
  UnsupportedDimension,
  UnsupportedMethod,
  Io,
  Parse,
  Internal,
};

/// Base exception for everything the library throws. The C API maps `code()`
/// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw_invalid(what);
}

inline void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw_invalid(std::string(name) + " must be finite");
}

}  // namespace robustl1
