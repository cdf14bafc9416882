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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fmp/unigram.hpp"
#include "fmp/vocab.hpp"

namespace fmp {

// Backoff n-gram language model with absolute discounting.
//
// The event space is the vocabulary plus the end-of-sentence symbol
// (vocab.eos_id()); the begin-of-sentence symbol appears only in contexts.
// For every context the probabilities over that event space sum to exactly 1
// and are strictly positive, because the recursion bottoms out at a uniform
// distribution over the event space.
class BackoffNgramLm {
 public:
  static constexpr double kDiscount = 0.75;

  // order must lie in [1, 5]; the corpus must be non-empty. Deterministic:
  // identical corpus, vocabulary and order give bit-identical models.
  static BackoffNgramLm train(const Corpus& corpus, const Vocabulary& vocab,
                              int order);

  // Context-free table lookup model used by tests and fixtures. probs must
  // have one entry per vocabulary word; eos_prob may be zero for fixtures
  // that never score sentence ends. Not serializable.
  static BackoffNgramLm from_unigram_table(const Vocabulary& vocab,
                                           std::vector<double> probs,
                                           double eos_prob);

  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::uint64_t vocab_hash() const { return vocab_.hash(); }

  // Natural-log probability of event w (a vocabulary id or eos_id) given the
  // history. Histories longer than order-1 are truncated on the left; ids in
  // the history may include bos_id.
  double log_prob(TokenId w, std::span<const TokenId> history) const;
  double prob(TokenId w, std::span<const TokenId> history) const;

  // Sum of per-event log probabilities with bos padding and a final eos event.
  double sentence_log_prob(std::span<const TokenId> tokens) const;

  // Perplexity over the corpus; the event count includes one eos per
  // utterance.
  double perplexity(const Corpus& corpus) const;

  bool is_table_model() const { return table_mode_; }

 private:
  friend struct LmArtifact;

  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<TokenId, std::uint64_t> words;
  };

  BackoffNgramLm() = default;

  void add_event(std::span<const TokenId> context, TokenId w);
  void finalize_counts();

  int order_ = 1;
  Vocabulary vocab_;

  // Level 0: flat counts over the event space (size |V| + 1, eos last).
  std::vector<std::uint64_t> unigram_counts_;
  std::uint64_t unigram_total_ = 0;
  std::uint64_t unigram_distinct_ = 0;

  // Levels 1..order-1, keyed by the packed id bytes of the context.
  std::vector<std::unordered_map<std::string, ContextCounts>> levels_;

  // Table mode (test fixtures).
  bool table_mode_ = false;
  std::vector<double> table_log_probs_;  // size |V| + 1, eos last
};

// On-disk bundle: the trained model plus the background unigram estimated
// from the same corpus. Text format versioned by the leading magic "FMPLM1";
// save/load round-trips byte-identically.
struct LmArtifact {
  BackoffNgramLm lm;
  UnigramDistribution background_unigram;
  double smoothing_k = 0.01;

  void save(const std::string& path) const;
  static LmArtifact load(const std::string& path);
};

}  // namespace fmp
