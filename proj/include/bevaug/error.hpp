// Copyright 2026 The bevaug Authors. All Rights Reserved.
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

#ifndef BEVAUG_ERROR_HPP_
#define BEVAUG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bevaug {

// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Value is finite and well-formed but outside the configured range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Geometric degeneracy: zero-depth projection, singular or rank-deficient fit.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (JSON, PNM).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bevaug

#endif  // BEVAUG_ERROR_HPP_
