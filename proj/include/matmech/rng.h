//
// Copyright 2026 the matmech authors
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
//

#ifndef MATMECH_RNG_H_
#define MATMECH_RNG_H_

#include <array>
#include <cstdint>

namespace matmech {

// Philox 4x32-10 counter-based generator. Every output block is a pure
// function of (counter, key), so draws indexed by (seed, stream, index) are
// identical no matter how work is scheduled across threads.
std::array<std::uint32_t, 4> Philox4x32(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key);

// Uniform double in [0, 1) from block (seed; stream, index).
double UniformDraw(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t index);

// Standard normal via Box-Muller on one Philox block.
double NormalDraw(std::uint64_t seed, std::uint64_t stream,
                  std::uint64_t index);

}  // namespace matmech

#endif  // MATMECH_RNG_H_
