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
#include "fmp/client.hpp"

#include <cmath>
#include <stdexcept>

namespace fmp {

double kernel_weight(int rank, double sigma) {
  if (rank < 1) {
    throw std::invalid_argument("rank must be at least 1");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  const double offset = static_cast<double>(rank) - 1.0;
  return std::exp(-(offset * offset) / (2.0 * sigma * sigma));
}

void accumulate_nbest(ClientCache& cache, const NBestList& nbest,
                      const Vocabulary& vocab, double sigma) {
  nbest.validate();
  if (cache.weighted_counts.size() != vocab.size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  for (const Hypothesis& hyp : nbest.hypotheses) {
    const double weight = kernel_weight(hyp.rank, sigma);
    for (const std::string& token : hyp.tokens) {
      cache.weighted_counts[vocab.id_of(token)] += weight;
      cache.total += weight;
    }
  }
}

std::pair<UnigramDistribution, double> estimate_personal_unigram(
    const ClientCache& cache, double smoothing_k) {
  return {UnigramDistribution::from_counts(cache.weighted_counts, smoothing_k),
          cache.total};
}

ClientRoundResult client_round(ClientState& state,
                               const UnigramDistribution* q_global,
                               const std::vector<const NBestList*>& utterances,
                               const AdaptationParams& params, double sigma,
                               double smoothing_k, const RescoreConfig& rescore,
                               const BackoffNgramLm& base,
                               const UnigramDistribution& u) {
  if (q_global == nullptr) {
    // Round 0: no global estimate yet, use the base LM unchanged.
    state.adapted_lm = AdaptedLm::identity(base);
  } else {
    const UnigramDistribution g =
        interpolate_marginals(u, *q_global, state.q_personal, params);
    state.adapted_lm = AdaptedLm::build(base, u, g, params.lambda);
  }

  ClientRoundResult result;
  result.selected.reserve(utterances.size());
  result.rescored.reserve(utterances.size());
  for (const NBestList* nbest : utterances) {
    RescoreResult rescored = rescore_nbest(*nbest, state.adapted_lm, rescore);
    result.selected.push_back(rescored.selected_index);
    result.rescored.push_back(std::move(rescored));

    accumulate_nbest(state.cache, *nbest, base.vocab(), sigma);
    auto [q, total] = estimate_personal_unigram(state.cache, smoothing_k);
    state.q_personal = std::move(q);
    (void)total;
  }

  result.q = state.q_personal;
  result.c = state.cache.total;
  return result;
}

}  // namespace fmp
