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

#include <vector>

#include "fmp/adapt.hpp"
#include "fmp/nbest.hpp"

namespace fmp {

struct RescoreConfig {
  double lm_weight = 0.5;  // weight of the LM score vs the first-pass score

  void validate() const;  // lm_weight in [0, 1]
};

// Sentence log score under the (possibly adapted) LM: sum of unnormalized
// per-event scores with bos padding and a final eos event. OOV tokens fold
// to unk.
double lm_sentence_score(const AdaptedLm& lm,
                         const std::vector<std::string>& tokens);
double lm_sentence_score_ids(const AdaptedLm& lm,
                             std::span<const TokenId> tokens);

// (1 - lm_weight) * first_pass + lm_weight * lm
double combine_scores(double first_pass, double lm, const RescoreConfig& cfg);

struct ScoredHypothesis {
  int original_index = 0;  // == rank - 1 in the input list
  double first_pass = 0.0;
  double lm = 0.0;
  double combined = 0.0;
};

struct RescoreResult {
  int selected_index = 0;          // original index of the winner
  std::vector<int> order;          // original indices, best first
  std::vector<ScoredHypothesis> scores;  // in original list order
};

// Deterministic total order: descending combined score, ties broken by the
// original rank (lower rank wins).
RescoreResult rescore_nbest(const NBestList& nbest, const AdaptedLm& lm,
                            const RescoreConfig& cfg);

}  // namespace fmp
