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
#include "fmp/rescore.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmp {

void RescoreConfig::validate() const {
  if (!(lm_weight >= 0.0 && lm_weight <= 1.0)) {
    throw std::invalid_argument("lm_weight must lie in [0, 1]");
  }
}

double lm_sentence_score_ids(const AdaptedLm& lm,
                             std::span<const TokenId> tokens) {
  if (tokens.empty()) {
    throw std::invalid_argument("cannot score an empty token sequence");
  }
  const Vocabulary& vocab = lm.base().vocab();
  const std::size_t context_len =
      static_cast<std::size_t>(lm.base().order()) - 1;
  std::vector<TokenId> window(context_len, vocab.bos_id());
  double total = 0.0;
  auto step = [&](TokenId w) {
    total += lm.log_prob_unnormalized(w, window);
    if (!window.empty()) {
      window.erase(window.begin());
      window.push_back(w);
    }
  };
  for (TokenId w : tokens) {
    step(w);
  }
  step(vocab.eos_id());
  return total;
}

double lm_sentence_score(const AdaptedLm& lm,
                         const std::vector<std::string>& tokens) {
  return lm_sentence_score_ids(lm, lm.base().vocab().ids_of(tokens));
}

double combine_scores(double first_pass, double lm, const RescoreConfig& cfg) {
  cfg.validate();
  return (1.0 - cfg.lm_weight) * first_pass + cfg.lm_weight * lm;
}

RescoreResult rescore_nbest(const NBestList& nbest, const AdaptedLm& lm,
                            const RescoreConfig& cfg) {
  cfg.validate();
  nbest.validate();

  RescoreResult result;
  result.scores.reserve(nbest.hypotheses.size());
  for (std::size_t i = 0; i < nbest.hypotheses.size(); ++i) {
    const Hypothesis& hyp = nbest.hypotheses[i];
    ScoredHypothesis scored;
    scored.original_index = static_cast<int>(i);
    scored.first_pass = hyp.first_pass_score;
    scored.lm = lm_sentence_score(lm, hyp.tokens);
    scored.combined = combine_scores(scored.first_pass, scored.lm, cfg);
    result.scores.push_back(scored);
  }

  result.order.resize(result.scores.size());
  for (std::size_t i = 0; i < result.order.size(); ++i) {
    result.order[i] = static_cast<int>(i);
  }
  std::sort(result.order.begin(), result.order.end(), [&](int a, int b) {
    const double sa = result.scores[a].combined;
    const double sb = result.scores[b].combined;
    if (sa != sb) return sa > sb;
    return a < b;  // lower original rank wins ties
  });
  result.selected_index = result.order.front();
  return result;
}

}  // namespace fmp
