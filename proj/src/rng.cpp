// Copyright 2026 The qtraj Authors
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

#include "qtraj/rng.hpp"

#include <cmath>

namespace qtraj {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;
constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, c[0], lo0, hi0);
    mulhilo(kMulB, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeylA;
    k[1] += kWeylB;
  }
  return c;
}

double uniform_open_closed(std::uint64_t bits) {
  // 53 high bits -> (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

PhiloxCounter CounterNormal::raw(std::uint64_t block, std::uint32_t lane) const {
  const PhiloxCounter counter{static_cast<std::uint32_t>(block),
                              static_cast<std::uint32_t>(block >> 32) ^ (lane << 16),
                              static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  return philox4x32_10(counter, key);
}

std::pair<double, double> CounterNormal::uniforms(std::uint64_t block, std::uint32_t lane) const {
  const auto r = raw(block, lane);
  const std::uint64_t w0 = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  const std::uint64_t w1 = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
  return {uniform_open_closed(w0), uniform_open_closed(w1)};
}

std::pair<double, double> CounterNormal::pair(std::uint64_t block, std::uint32_t lane) const {
  const auto [u1, u2] = uniforms(block, lane);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double wiener_increment(const CounterNormal& gen, std::uint64_t step, std::uint32_t channel,
                        double sqrt_dt) {
  const auto [a, b] = gen.pair(step >> 1, channel);
  return sqrt_dt * ((step & 1U) ? b : a);
}

}  // namespace qtraj
