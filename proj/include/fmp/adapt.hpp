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

#include "fmp/ngram_lm.hpp"
#include "fmp/unigram.hpp"

namespace fmp {

struct AdaptationParams {
  double lambda = 0.2;  // scaling exponent of the marginal factor
  double alpha = 0.5;   // weight of the global unigram
  double beta = 0.25;   // weight of the personal unigram

  // lambda, alpha, beta >= 0 and alpha + beta <= 1, so the background
  // weight 1 - alpha - beta stays non-negative.
  void validate() const;
};

// g(w) = (1 - alpha - beta) * u(w) + alpha * q_global(w) + beta * q_personal(w)
UnigramDistribution interpolate_marginals(const UnigramDistribution& u,
                                          const UnigramDistribution& q_global,
                                          const UnigramDistribution& q_personal,
                                          const AdaptationParams& params);

// Word-marginal adapted view of a base LM. The per-word factor
// (g(w)/u(w))^lambda depends only on w, so its log is precomputed as a dense
// vector over the vocabulary; eos carries factor 1. Immutable after
// construction and safe for concurrent read-only use.
class AdaptedLm {
 public:
  AdaptedLm() = default;

  static AdaptedLm build(const BackoffNgramLm& base,
                         const UnigramDistribution& u,
                         const UnigramDistribution& g, double lambda);

  // Factor identically 1; scores equal the base LM's.
  static AdaptedLm identity(const BackoffNgramLm& base);

  // Direct construction from a per-word log-factor table (one entry per
  // vocabulary word).
  static AdaptedLm from_log_factors(const BackoffNgramLm& base,
                                    std::vector<double> log_factors);

  // log p_base(w|h) + lambda * (ln g(w) - ln u(w)). This is the unnormalized
  // form used during rescoring; the missing ln Z(h) is constant in w.
  double log_prob_unnormalized(TokenId w,
                               std::span<const TokenId> history) const;

  // ln Z(h) over the event space, via log-sum-exp.
  double log_normalization(std::span<const TokenId> history) const;

  double log_prob_normalized(TokenId w, std::span<const TokenId> history) const;

  double log_factor(TokenId w) const {
    return w < log_factor_.size() ? log_factor_[w] : 0.0;
  }
  const std::vector<double>& log_factors() const { return log_factor_; }
  const BackoffNgramLm& base() const { return *base_; }

 private:
  explicit AdaptedLm(const BackoffNgramLm& base)
      : base_(&base), log_factor_(base.vocab().size(), 0.0) {}

  const BackoffNgramLm* base_ = nullptr;
  std::vector<double> log_factor_;
};

}  // namespace fmp
