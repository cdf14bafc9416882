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
#include "fmp/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmp {

void AdaptationParams::validate() const {
  if (!(lambda >= 0.0) || !(alpha >= 0.0) || !(beta >= 0.0)) {
    throw std::invalid_argument("adaptation parameters must be non-negative");
  }
  if (alpha + beta > 1.0) {
    throw std::invalid_argument("alpha + beta must not exceed 1");
  }
}

UnigramDistribution interpolate_marginals(const UnigramDistribution& u,
                                          const UnigramDistribution& q_global,
                                          const UnigramDistribution& q_personal,
                                          const AdaptationParams& params) {
  params.validate();
  if (u.size() != q_global.size() || u.size() != q_personal.size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  const double background_weight = 1.0 - params.alpha - params.beta;
  std::vector<double> mixed(u.size());
  for (std::size_t w = 0; w < u.size(); ++w) {
    mixed[w] = background_weight * u.prob(w) +
               params.alpha * q_global.prob(w) +
               params.beta * q_personal.prob(w);
  }
  return UnigramDistribution(std::move(mixed));
}

AdaptedLm AdaptedLm::build(const BackoffNgramLm& base,
                           const UnigramDistribution& u,
                           const UnigramDistribution& g, double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("lambda must be non-negative");
  }
  if (u.size() != base.vocab().size() || g.size() != base.vocab().size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  AdaptedLm adapted(base);
  if (lambda == 0.0) {
    return adapted;  // factor identically 1
  }
  for (std::size_t w = 0; w < u.size(); ++w) {
    if (!(u.prob(w) > 0.0) || !(g.prob(w) > 0.0)) {
      throw std::invalid_argument("degenerate marginal");
    }
    adapted.log_factor_[w] = lambda * (std::log(g.prob(w)) - std::log(u.prob(w)));
  }
  return adapted;
}

AdaptedLm AdaptedLm::identity(const BackoffNgramLm& base) {
  return AdaptedLm(base);
}

AdaptedLm AdaptedLm::from_log_factors(const BackoffNgramLm& base,
                                      std::vector<double> log_factors) {
  if (log_factors.size() != base.vocab().size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  for (double f : log_factors) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("log factors must be finite");
    }
  }
  AdaptedLm adapted(base);
  adapted.log_factor_ = std::move(log_factors);
  return adapted;
}

double AdaptedLm::log_prob_unnormalized(
    TokenId w, std::span<const TokenId> history) const {
  return base_->log_prob(w, history) + log_factor(w);
}

double AdaptedLm::log_normalization(std::span<const TokenId> history) const {
  const std::size_t domain = base_->vocab().size() + 1;  // incl. eos
  std::vector<double> terms(domain);
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < domain; ++w) {
    terms[w] = log_prob_unnormalized(static_cast<TokenId>(w), history);
    max_term = std::max(max_term, terms[w]);
  }
  double sum = 0.0;
  for (double t : terms) {
    sum += std::exp(t - max_term);
  }
  return max_term + std::log(sum);
}

double AdaptedLm::log_prob_normalized(TokenId w,
                                      std::span<const TokenId> history) const {
  return log_prob_unnormalized(w, history) - log_normalization(history);
}

}  // namespace fmp
