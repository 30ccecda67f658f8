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

#ifndef QTRAJ_RNG_HPP
#define QTRAJ_RNG_HPP

#include <array>
#include <cstdint>
#include <utility>

namespace qtraj {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Maps 64 random bits to a double in (0, 1].
double uniform_open_closed(std::uint64_t bits);

/**
 * Stateless normal generator keyed by (seed, stream).
 *
 * Every draw is a pure function of (seed, stream, block, lane), so results
 * do not depend on evaluation order or on how work is split across threads.
 */
class CounterNormal {
 public:
  CounterNormal(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  /// Two independent standard normals for the given (block, lane).
  std::pair<double, double> pair(std::uint64_t block, std::uint32_t lane) const;

  /// Two uniforms in (0, 1] for the given (block, lane).
  std::pair<double, double> uniforms(std::uint64_t block, std::uint32_t lane) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  PhiloxCounter raw(std::uint64_t block, std::uint32_t lane) const;

  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// N(0, dt) increment of Wiener channel `channel` over grid step `step`.
///
/// Consecutive step pairs share one Philox block, one Box-Muller pair.
/// Valid for step < 2^49 and channel < 2^16.
double wiener_increment(const CounterNormal& gen, std::uint64_t step, std::uint32_t channel,
                        double sqrt_dt);

/// Sequential reader of one channel; same values as wiener_increment, half the Philox calls.
class WienerStream {
 public:
  WienerStream(const CounterNormal& gen, std::uint32_t channel, double sqrt_dt)
      : gen_(gen), channel_(channel), sqrt_dt_(sqrt_dt) {}

  double operator()(std::uint64_t step) {
    const std::uint64_t block = step >> 1;
    if (block != block_) {
      cached_ = gen_.pair(block, channel_);
      block_ = block;
    }
    return sqrt_dt_ * ((step & 1U) ? cached_.second : cached_.first);
  }

 private:
  CounterNormal gen_;
  std::uint32_t channel_;
  double sqrt_dt_;
  std::uint64_t block_ = ~std::uint64_t{0};
  std::pair<double, double> cached_{0.0, 0.0};
};

}  // namespace qtraj

#endif  // QTRAJ_RNG_HPP
