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
#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "fmp/client.hpp"
#include "fmp/rng.hpp"

using namespace fmp;

namespace {

NBestList ranked_list(std::string id,
                      std::vector<std::vector<std::string>> hyps) {
  // Assigns strictly decreasing scores so ranks follow the input order.
  std::vector<std::pair<std::vector<std::string>, double>> scored;
  double score = 0.0;
  for (auto& tokens : hyps) {
    scored.emplace_back(std::move(tokens), score);
    score -= 1.0;
  }
  return NBestList::from_scored(std::move(id), std::move(scored));
}

Corpus small_corpus() {
  return make_corpus({"a b c a", "b c b", "c a", "a b", "c c a b a"});
}

}  // namespace

TEST_CASE("kernel_weight closed form") {
  CHECK(kernel_weight(1, 5.0) == 1.0);
  CHECK(kernel_weight(1, 0.1) == 1.0);
  CHECK(kernel_weight(2, 5.0) ==
        doctest::Approx(0.98019867330675525).epsilon(1e-12));
  CHECK(kernel_weight(2, 0.1) ==
        doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
  CHECK(kernel_weight(2, 0.1) < 1e-20);

  SUBCASE("errors") {
    CHECK_THROWS_AS(kernel_weight(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_weight(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_weight(1, -2.0), std::invalid_argument);
  }

  SUBCASE("bounds and monotonicity") {
    // Strict positivity and strict decrease hold until the kernel underflows
    // to zero (sigma = 0.1 reaches 0 at rank 5 in double precision).
    for (double sigma : {0.1, 1.0, 5.0, 10.0, 100.0}) {
      double previous = 2.0;
      for (int rank = 1; rank <= 10; ++rank) {
        const double w = kernel_weight(rank, sigma);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        if (previous > 0.0) {
          CHECK(w < previous);
        } else {
          CHECK(w == 0.0);
        }
        previous = w;
      }
    }
    for (double sigma : {1.0, 5.0, 10.0, 100.0}) {
      for (int rank = 1; rank <= 10; ++rank) {
        CHECK(kernel_weight(rank, sigma) > 0.0);
      }
    }
    // Increasing in sigma for fixed rank > 1.
    CHECK(kernel_weight(3, 1.0) < kernel_weight(3, 5.0));
    CHECK(kernel_weight(3, 5.0) < kernel_weight(3, 50.0));
  }

  SUBCASE("sigma 100 is near-uniform over 20 ranks") {
    const double ratio = kernel_weight(1, 100.0) / kernel_weight(20, 100.0);
    CHECK(ratio < 1.02);
  }
}

TEST_CASE("accumulate_nbest") {
  const Corpus corpus = small_corpus();
  const Vocabulary vocab = Vocabulary::build(corpus, 1);

  SUBCASE("single rank-1 hypothesis") {
    ClientCache cache(vocab.size());
    accumulate_nbest(cache, ranked_list("u1", {{"a", "a", "b"}}), vocab, 5.0);
    CHECK(cache.weighted_counts[vocab.id_of("a")] == 2.0);
    CHECK(cache.weighted_counts[vocab.id_of("b")] == 1.0);
    CHECK(cache.total == 3.0);
  }

  SUBCASE("kernel-weighted second hypothesis") {
    ClientCache cache(vocab.size());
    accumulate_nbest(cache, ranked_list("u1", {{"a"}, {"b"}}), vocab, 5.0);
    const double k2 = kernel_weight(2, 5.0);
    CHECK(cache.weighted_counts[vocab.id_of("a")] == 1.0);
    CHECK(cache.weighted_counts[vocab.id_of("b")] ==
          doctest::Approx(k2).epsilon(1e-12));
    CHECK(cache.total == doctest::Approx(1.0 + k2).epsilon(1e-12));
  }

  SUBCASE("sequential accumulation equals concatenated accumulation") {
    const NBestList first = ranked_list("u1", {{"a", "b"}, {"b"}});
    const NBestList second = ranked_list("u2", {{"c"}, {"a", "c"}});
    ClientCache sequential(vocab.size());
    accumulate_nbest(sequential, first, vocab, 2.0);
    accumulate_nbest(sequential, second, vocab, 2.0);

    ClientCache fresh(vocab.size());
    accumulate_nbest(fresh, first, vocab, 2.0);
    accumulate_nbest(fresh, second, vocab, 2.0);
    CHECK(sequential.weighted_counts == fresh.weighted_counts);
    CHECK(sequential.total == fresh.total);
  }

  SUBCASE("OOV tokens fold into unk") {
    ClientCache cache(vocab.size());
    accumulate_nbest(cache, ranked_list("u1", {{"zebra", "a"}}), vocab, 5.0);
    CHECK(cache.weighted_counts[vocab.unk_id()] == 1.0);
  }

  SUBCASE("monotonicity: accumulation never decreases entries") {
    ClientCache cache(vocab.size());
    Rng rng(3);
    double previous_total = 0.0;
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> tokens;
      for (int j = 0; j <= static_cast<int>(rng.uniform_int(4)); ++j) {
        tokens.push_back(vocab.word(
            static_cast<TokenId>(rng.uniform_int(vocab.size()))));
      }
      const std::vector<double> before = cache.weighted_counts;
      accumulate_nbest(cache, ranked_list("u", {tokens}), vocab, 1.0);
      for (std::size_t w = 0; w < before.size(); ++w) {
        CHECK(cache.weighted_counts[w] >= before[w]);
      }
      CHECK(cache.total >= previous_total);
      previous_total = cache.total;
    }
  }
}

TEST_CASE("estimate_personal_unigram") {
  SUBCASE("empty cache gives the uniform fallback with zero mass") {
    ClientCache cache(4);
    const auto [q, c] = estimate_personal_unigram(cache, 0.01);
    CHECK(c == 0.0);
    for (std::size_t w = 0; w < 4; ++w) {
      CHECK(q.prob(w) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }

  SUBCASE("hand arithmetic") {
    ClientCache cache(4);
    cache.weighted_counts = {3.0, 1.0, 0.0, 0.0};
    cache.total = 4.0;
    const auto [q, c] = estimate_personal_unigram(cache, 1.0);
    CHECK(c == 4.0);
    CHECK(q.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q.prob(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(q.prob(2) == doctest::Approx(0.125).epsilon(1e-15));
  }

  SUBCASE("normalization by construction") {
    Rng rng(4);
    ClientCache cache(32);
    for (double& v : cache.weighted_counts) {
      v = rng.uniform01() * 10.0;
      cache.total += v;
    }
    const auto [q, c] = estimate_personal_unigram(cache, 0.01);
    double sum = 0.0;
    for (std::size_t w = 0; w < q.size(); ++w) sum += q.prob(w);
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("sigma extremes shape the personal estimate") {
  const Corpus corpus = small_corpus();
  const Vocabulary vocab = Vocabulary::build(corpus, 1);

  // sigma = 0.1: indistinguishable from counting only the 1-best.
  ClientCache narrow(vocab.size());
  ClientCache one_best(vocab.size());
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    std::vector<std::vector<std::string>> hyps;
    for (int h = 0; h < 10; ++h) {
      std::vector<std::string> tokens;
      for (int j = 0; j <= static_cast<int>(rng.uniform_int(6)); ++j) {
        tokens.push_back(vocab.word(
            static_cast<TokenId>(rng.uniform_int(vocab.size()))));
      }
      hyps.push_back(tokens);
    }
    const NBestList list = ranked_list("u" + std::to_string(i), hyps);
    accumulate_nbest(narrow, list, vocab, 0.1);
    const NBestList top_only =
        ranked_list(list.utterance_id, {list.hypotheses.front().tokens});
    accumulate_nbest(one_best, top_only, vocab, 0.1);
  }
  const auto [q_narrow, c_narrow] = estimate_personal_unigram(narrow, 0.01);
  const auto [q_one, c_one] = estimate_personal_unigram(one_best, 0.01);
  double tv = 0.0;
  for (std::size_t w = 0; w < q_narrow.size(); ++w) {
    tv += std::fabs(q_narrow.prob(w) - q_one.prob(w));
  }
  CHECK(tv / 2.0 < 1e-15);
}

TEST_CASE("client_round") {
  const Corpus corpus = small_corpus();
  const Vocabulary vocab = Vocabulary::build(corpus, 1);
  const BackoffNgramLm base = BackoffNgramLm::train(corpus, vocab, 2);
  const UnigramDistribution u =
      estimate_background_unigram(corpus, vocab, 0.01);
  const RescoreConfig rescore_cfg{0.5};

  Rng rng(12);
  auto random_list = [&](int id) {
    std::vector<std::vector<std::string>> hyps;
    for (int h = 0; h < 4; ++h) {
      std::vector<std::string> tokens;
      for (int j = 0; j <= static_cast<int>(rng.uniform_int(5)); ++j) {
        tokens.push_back(vocab.word(
            static_cast<TokenId>(1 + rng.uniform_int(vocab.size() - 1))));
      }
      hyps.push_back(tokens);
    }
    return ranked_list("u" + std::to_string(id), hyps);
  };
  std::vector<NBestList> lists;
  for (int i = 0; i < 12; ++i) {
    lists.push_back(random_list(i));
  }
  auto list_ptrs = [&](int from, int to) {
    std::vector<const NBestList*> ptr;
    for (int i = from; i < to; ++i) ptr.push_back(&lists[i]);
    return ptr;
  };

  SUBCASE("round 0 equals baseline rescoring") {
    ClientState state("c0", base);
    // Freshly constructed state uses the identity factor.
    for (double f : state.adapted_lm.log_factors()) {
      CHECK(f == 0.0);
    }
    const AdaptationParams params{5.0, 0.5, 0.25};  // would distort if applied
    const ClientRoundResult result =
        client_round(state, nullptr, list_ptrs(0, 6), params, 5.0, 0.01,
                     rescore_cfg, base, u);
    const AdaptedLm baseline = AdaptedLm::identity(base);
    for (int i = 0; i < 6; ++i) {
      CHECK(result.selected[i] ==
            rescore_nbest(lists[i], baseline, rescore_cfg).selected_index);
    }
  }

  SUBCASE("lambda 0 equals baseline at later rounds") {
    ClientState state("c0", base);
    const AdaptationParams params{0.0, 0.5, 0.25};
    const UnigramDistribution q_global = UnigramDistribution::uniform(vocab.size());
    client_round(state, nullptr, list_ptrs(0, 6), params, 5.0, 0.01,
                 rescore_cfg, base, u);
    const ClientRoundResult result =
        client_round(state, &q_global, list_ptrs(6, 12), params, 5.0, 0.01,
                     rescore_cfg, base, u);
    const AdaptedLm baseline = AdaptedLm::identity(base);
    for (int i = 6; i < 12; ++i) {
      CHECK(result.selected[i - 6] ==
            rescore_nbest(lists[i], baseline, rescore_cfg).selected_index);
    }
  }

  SUBCASE("pseudo-count matches an independent recount oracle") {
    ClientState state("c0", base);
    const AdaptationParams params{0.2, 0.5, 0.25};
    const UnigramDistribution q_global =
        UnigramDistribution::uniform(vocab.size());
    const double sigma = 2.0;
    client_round(state, nullptr, list_ptrs(0, 5), params, sigma, 0.01,
                 rescore_cfg, base, u);
    const ClientRoundResult result =
        client_round(state, &q_global, list_ptrs(5, 12), params, sigma, 0.01,
                     rescore_cfg, base, u);

    double expected = 0.0;
    for (const NBestList& list : lists) {
      for (const Hypothesis& hyp : list.hypotheses) {
        expected += kernel_weight(hyp.rank, sigma) *
                    static_cast<double>(hyp.tokens.size());
      }
    }
    CHECK(result.c == doctest::Approx(expected).epsilon(1e-12));

    // Upload consistency: returned estimate equals re-estimating the cache.
    const auto [q_again, c_again] =
        estimate_personal_unigram(state.cache, 0.01);
    CHECK(result.q.probs() == q_again.probs());
    CHECK(result.c == c_again);
  }

  SUBCASE("cache grows monotonically across rounds") {
    ClientState state("c0", base);
    const AdaptationParams params{0.2, 0.5, 0.25};
    const UnigramDistribution q_global =
        UnigramDistribution::uniform(vocab.size());
    client_round(state, nullptr, list_ptrs(0, 4), params, 5.0, 0.01,
                 rescore_cfg, base, u);
    const double after_first = state.cache.total;
    client_round(state, &q_global, list_ptrs(4, 8), params, 5.0, 0.01,
                 rescore_cfg, base, u);
    CHECK(state.cache.total > after_first);
  }
}
