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

#ifndef BEVAUG_RNG_HPP_
#define BEVAUG_RNG_HPP_

#include <cstdint>
#include <random>

namespace bevaug {

// All randomness comes from mt19937_64 streams forked from one seed by a
// stream index (camera index, box index, ...). Draws are converted to doubles
// by bit manipulation so results do not depend on the standard library's
// distribution implementations.
using Rng = std::mt19937_64;

Rng ForkRng(std::uint64_t seed, std::uint64_t stream);

// Uniform in [0, 1) with 53 random bits.
double Uniform01(Rng& rng);
// Uniform in [-half_width, half_width].
double UniformSymmetric(Rng& rng, double half_width);
double UniformRange(Rng& rng, double lo, double hi);

}  // namespace bevaug

#endif  // BEVAUG_RNG_HPP_
