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

#include <string>
#include <vector>

#include "fmp/adapt.hpp"
#include "fmp/nbest.hpp"
#include "fmp/rescore.hpp"
#include "fmp/unigram.hpp"

namespace fmp {

// Running kernel-weighted word counts for one device. Cumulative over the
// device's whole history; never reset.
struct ClientCache {
  explicit ClientCache(std::size_t vocab_size)
      : weighted_counts(vocab_size, 0.0) {}

  std::vector<double> weighted_counts;
  double total = 0.0;
};

// Gaussian kernel over the hypothesis rank: exp(-(rank-1)^2 / (2 sigma^2)).
// Always in (0, 1]; rank 1 gets weight 1.
double kernel_weight(int rank, double sigma);

// Adds every hypothesis' word counts, weighted by the rank kernel. OOV
// tokens fold to unk.
void accumulate_nbest(ClientCache& cache, const NBestList& nbest,
                      const Vocabulary& vocab, double sigma);

// q_i(w) = (weighted_counts[w] + k) / (total + k |V|), plus the raw
// pseudo-count total c_i used as the aggregation weight. An empty cache
// yields the uniform distribution with c_i = 0.
std::pair<UnigramDistribution, double> estimate_personal_unigram(
    const ClientCache& cache, double smoothing_k);

// Per-device state across rounds. At round 0 the adapted LM equals the base
// LM (factor identically 1).
struct ClientState {
  ClientState(std::string id, const BackoffNgramLm& base)
      : client_id(std::move(id)),
        cache(base.vocab().size()),
        q_personal(UnigramDistribution::uniform(base.vocab().size())),
        adapted_lm(AdaptedLm::identity(base)) {}

  std::string client_id;
  ClientCache cache;
  UnigramDistribution q_personal;  // latest estimate
  AdaptedLm adapted_lm;            // LM in effect for the current round
};

struct ClientRoundResult {
  UnigramDistribution q;  // end-of-round personal unigram (upload payload)
  double c = 0.0;         // pseudo-count total (upload weight)
  std::vector<int> selected;             // winner index per utterance
  std::vector<RescoreResult> rescored;   // full per-utterance detail
};

// One client pass of the federated round loop:
//   1. rebuild the adapted LM from (u, q_global, previous q_personal), or
//      keep the base LM when q_global is absent (round 0);
//   2. rescore each utterance with that LM;
//   3. accumulate each utterance's N-best into the cache, refreshing the
//      personal estimate after every utterance (the LM stays fixed within
//      the round);
//   4. return the end-of-round (q_i, c_i) for upload.
ClientRoundResult client_round(ClientState& state,
                               const UnigramDistribution* q_global,
                               const std::vector<const NBestList*>& utterances,
                               const AdaptationParams& params, double sigma,
                               double smoothing_k, const RescoreConfig& rescore,
                               const BackoffNgramLm& base,
                               const UnigramDistribution& u);

}  // namespace fmp
