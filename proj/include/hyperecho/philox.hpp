// Copyright 2026 The hyperecho Authors
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

#ifndef HYPERECHO_PHILOX_HPP
#define HYPERECHO_PHILOX_HPP

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is
// a pure function of (counter, key), so any sample can be regenerated
// without replaying a sequence.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace hyperecho {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Two independent standard normals for draw `block` of sample `index`
/// under `seed` (Box-Muller on two 53-bit uniforms in (0, 1)).
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t index,
                                             std::uint32_t block) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), block, 0u};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  const std::uint64_t b0 = (std::uint64_t{out[0]} << 32) | out[1];
  const std::uint64_t b1 = (std::uint64_t{out[2]} << 32) | out[3];
  constexpr double kScale = 0x1.0p-53;
  const double u0 = (static_cast<double>(b0 >> 11) + 0.5) * kScale;
  const double u1 = (static_cast<double>(b1 >> 11) + 0.5) * kScale;
  const double radius = std::sqrt(-2.0 * std::log(u0));
  const double angle = 2.0 * std::numbers::pi * u1;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace hyperecho

#endif  // HYPERECHO_PHILOX_HPP
