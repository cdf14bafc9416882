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

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fmp/nbest.hpp"
#include "fmp/rng.hpp"
#include "fmp/vocab.hpp"

namespace fmp {

// First-pass stand-in: per-token corruption rates plus the scoring knobs for
// the synthetic acoustic score.
struct SyntheticNoiseModel {
  double sub_rate = 0.10;
  double ins_rate = 0.02;
  double del_rate = 0.02;
  int nbest_size = 8;

  // Probability that a substitution uses the word's confusion set instead of
  // a uniform vocabulary draw.
  double confusion_bias = 0.85;
  std::unordered_map<std::string, std::vector<std::string>> confusions;

  // score = score_per_token * |hyp| - score_edit_penalty * dist + N(0, sd)
  double score_per_token = -2.0;
  double score_edit_penalty = 2.5;
  double score_noise_sd = 1.0;

  void validate() const;  // rates in [0,1), rates sum < 1, nbest_size >= 1
};

// N-best stand-in for first-pass decoding: the reference candidate plus
// nbest_size - 1 independently corrupted variants, scored decreasing in edit
// distance to the reference plus seeded noise. The reference is not
// guaranteed to end up at rank 1.
NBestList generate_synthetic_nbest(const std::string& utterance_id,
                                   const std::vector<std::string>& reference,
                                   const SyntheticNoiseModel& model,
                                   const Vocabulary& vocab, Rng& rng);

// Synthetic fleet shape. Each client over-samples a private topic lexicon
// (headroom for the personal marginal) and the whole fleet gradually adopts
// a shared trending lexicon (headroom for the global marginal); both lexicons
// are rare in the background corpus.
struct FleetSpec {
  int clients = 20;
  int utterances_per_client = 60;

  int common_words = 1200;
  int topic_words_per_client = 40;
  int trending_words = 30;
  double topic_prob = 0.28;
  double trending_prob = 0.12;
  int min_tokens = 6;
  int max_tokens = 14;
  double zipf_exponent = 1.07;

  int background_lines = 6000;
  int special_occurrences = 2;  // background occurrences per special word

  SyntheticNoiseModel noise;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GeneratedFleet {
  std::vector<std::string> background_lines;
  std::vector<UtteranceRecord> records;
};

GeneratedFleet generate_fleet(const FleetSpec& spec);

}  // namespace fmp
