/*
 * Copyright 2026 The fmpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "fmp/unigram.hpp"

#include <cmath>
#include <stdexcept>

namespace fmp {

namespace {

// Kahan summation; keeps the normalization check meaningful for large vectors.
double stable_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

UnigramDistribution::UnigramDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("unigram distribution must be non-empty");
  }
  for (double p : probs_) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument(
          "unigram distribution entries must be strictly positive");
    }
  }
  const double sum = stable_sum(probs_);
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("unigram distribution does not sum to 1");
  }
}

UnigramDistribution UnigramDistribution::uniform(std::size_t size) {
  if (size == 0) {
    throw std::invalid_argument("unigram distribution must be non-empty");
  }
  return UnigramDistribution(
      std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

UnigramDistribution UnigramDistribution::from_counts(
    std::span<const double> counts, double smoothing_k) {
  if (counts.empty()) {
    throw std::invalid_argument("count vector must be non-empty");
  }
  if (!(smoothing_k > 0.0)) {
    throw std::invalid_argument("smoothing_k must be positive");
  }
  std::vector<double> numerators(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0.0 || !std::isfinite(counts[i])) {
      throw std::invalid_argument("counts must be non-negative");
    }
    numerators[i] = counts[i] + smoothing_k;
  }
  const double denom = stable_sum(numerators);
  for (double& v : numerators) {
    v /= denom;
  }
  return UnigramDistribution(std::move(numerators));
}

UnigramDistribution estimate_background_unigram(const Corpus& corpus,
                                                const Vocabulary& vocab,
                                                double smoothing_k) {
  if (corpus.empty()) {
    throw std::invalid_argument("empty corpus");
  }
  std::vector<double> counts(vocab.size(), 0.0);
  for (const auto& utterance : corpus.utterances) {
    for (const std::string& token : utterance) {
      counts[vocab.id_of(token)] += 1.0;
    }
  }
  return UnigramDistribution::from_counts(counts, smoothing_k);
}

}  // namespace fmp
