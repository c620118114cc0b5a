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

#include "matmech/rng.h"

#include <cmath>

namespace matmech {

namespace {

constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;

inline void PhiloxRound(std::array<std::uint32_t, 4>& c,
                        const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM4x32A) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM4x32B) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::array<std::uint32_t, 4> Block(std::uint64_t seed,
                                          std::uint64_t stream,
                                          std::uint64_t index) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32(counter, key);
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    PhiloxRound(c, k);
    k[0] += kPhiloxW32A;
    k[1] += kPhiloxW32B;
  }
  return c;
}

double UniformDraw(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t index) {
  const auto v = Block(seed, stream, index);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(v[0]) << 32) | v[1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double NormalDraw(std::uint64_t seed, std::uint64_t stream,
                  std::uint64_t index) {
  const auto v = Block(seed, stream, index);
  const std::uint64_t b1 = (static_cast<std::uint64_t>(v[0]) << 32) | v[1];
  const std::uint64_t b2 = (static_cast<std::uint64_t>(v[2]) << 32) | v[3];
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 = (static_cast<double>(b1 >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace matmech
