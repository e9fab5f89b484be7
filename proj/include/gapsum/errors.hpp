// Copyright 2026 The gapsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace gapsum {

// Base for every error the library raises. The CLI maps subclasses onto
// exit codes: validation-type errors exit 1, capacity/precision errors exit 2.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad tuple, odd d where even is required, non-prime modulus.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// A limit that leaves nothing to enumerate (X < 2, N < 1, ...).
class EmptyDomainError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// Exponent outside the supported weight family (alpha < -1).
class UnsupportedExponentError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// Limit beyond the declared 64-bit prime domain or a memory cap.
class CapacityError : public Error {
  public:
    using Error::Error;
};

// Requested certified precision cannot be reached with the numeric type.
class PrecisionError : public Error {
  public:
    using Error::Error;
};

}  // namespace gapsum
