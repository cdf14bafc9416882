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
#pragma once

#include <span>
#include <vector>

#include "fmp/vocab.hpp"

namespace fmp {

// Normalized probability vector over a shared vocabulary. Every entry is
// strictly positive and the entries sum to 1 within 1e-9; the constructor
// enforces both.
class UnigramDistribution {
 public:
  UnigramDistribution() = default;
  explicit UnigramDistribution(std::vector<double> probs);

  static UnigramDistribution uniform(std::size_t size);

  // Additive smoothing: p(w) proportional to count(w) + smoothing_k.
  // Counts must be non-negative, smoothing_k strictly positive.
  static UnigramDistribution from_counts(std::span<const double> counts,
                                         double smoothing_k);

  bool empty() const { return probs_.empty(); }
  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const UnigramDistribution& other) const = default;

 private:
  std::vector<double> probs_;
};

// u(w): unigram marginal of the background corpus over the given vocabulary,
// with OOV tokens folded into <unk>.
UnigramDistribution estimate_background_unigram(const Corpus& corpus,
                                                const Vocabulary& vocab,
                                                double smoothing_k);

}  // namespace fmp
