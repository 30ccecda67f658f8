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

#include "qtraj/stats.hpp"

#include <cmath>

#include "qtraj/errors.hpp"

namespace qtraj {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate mean_estimate(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean_estimate: empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  if (values.size() < 2) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

Estimate weighted_estimate(std::span<const double> values, std::span<const double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw ArgumentError("weighted_estimate: empty sample or size mismatch");
  }
  const double wsum = pairwise_sum(weights);
  if (!(wsum > 0.0)) throw DegenerateWeightError("weighted_estimate: total weight is not positive");
  std::vector<double> wv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) wv[i] = weights[i] * values[i];
  const double mean = pairwise_sum(wv) / wsum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = weights[i] * (values[i] - mean);
    wv[i] = d * d;
  }
  const double var = pairwise_sum(wv) / (wsum * wsum);
  return {mean, std::sqrt(var)};
}

double effective_sample_size(std::span<const double> weights) {
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  const double s = pairwise_sum(weights);
  const double s2 = pairwise_sum(sq);
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, double offset) {
  const std::size_t n = weights.size();
  if (n == 0) throw ArgumentError("systematic_resample: empty weights");
  const double total = pairwise_sum(weights);
  if (!(total > 0.0)) throw DegenerateWeightError("systematic_resample: total weight not positive");
  // rounding can leave u above the final cumulative sum; never step past the last live weight
  std::size_t last = n - 1;
  while (weights[last] <= 0.0) --last;
  std::vector<std::size_t> ancestors(n);
  double cumulative = weights[0] / total;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + offset) / static_cast<double>(n);
    while ((u > cumulative || weights[j] <= 0.0) && j < last) {
      ++j;
      cumulative += weights[j] / total;
    }
    ancestors[i] = j;
  }
  return ancestors;
}

}  // namespace qtraj
