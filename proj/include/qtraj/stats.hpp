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

#ifndef QTRAJ_STATS_HPP
#define QTRAJ_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace qtraj {

/// Pairwise (cascade) summation in index order; independent of thread count.
double pairwise_sum(std::span<const double> values);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and its standard error.
Estimate mean_estimate(std::span<const double> values);

/// Self-normalized weighted mean with delta-method standard error.
Estimate weighted_estimate(std::span<const double> values, std::span<const double> weights);

/// Kish effective sample size (sum w)^2 / sum w^2.
double effective_sample_size(std::span<const double> weights);

/// Systematic resampling: returns N ancestor indices drawn proportionally to weights.
///
/// `offset` in [0, 1) is the single uniform that positions the comb.
std::vector<std::size_t> systematic_resample(std::span<const double> weights, double offset);

}  // namespace qtraj

#endif  // QTRAJ_STATS_HPP
