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
#include <algorithm>
#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "fmp/rescore.hpp"
#include "fmp/rng.hpp"

using namespace fmp;

namespace {

Vocabulary n_word_vocab(std::size_t real_words) {
  std::vector<std::string> words = {"<unk>"};
  for (std::size_t i = 1; i < real_words; ++i) {
    words.push_back("w" + std::to_string(i));
  }
  return Vocabulary::from_words(std::move(words));
}

NBestList scored_list(
    std::string id,
    std::vector<std::pair<std::vector<std::string>, double>> scored) {
  return NBestList::from_scored(std::move(id), std::move(scored));
}

}  // namespace

TEST_CASE("nbest list construction and validation") {
  const NBestList list = scored_list(
      "u0", {{{"b"}, -2.0}, {{"a"}, -1.0}, {{"c"}, -3.0}});
  CHECK(list.hypotheses[0].tokens == std::vector<std::string>{"a"});
  CHECK(list.hypotheses[0].rank == 1);
  CHECK(list.hypotheses[2].rank == 3);
  CHECK(list.hypotheses[0].first_pass_score >=
        list.hypotheses[1].first_pass_score);

  SUBCASE("ties keep input order") {
    const NBestList tied =
        scored_list("u1", {{{"x"}, -1.0}, {{"y"}, -1.0}});
    CHECK(tied.hypotheses[0].tokens == std::vector<std::string>{"x"});
  }

  SUBCASE("empty hypotheses are rejected") {
    CHECK_THROWS_AS(scored_list("u2", {{{}, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(scored_list("u3", {}), std::invalid_argument);
  }
}

TEST_CASE("combine_scores") {
  CHECK(combine_scores(-10.0, -20.0, {0.0}) == -10.0);
  CHECK(combine_scores(-10.0, -20.0, {0.5}) == -15.0);
  CHECK(combine_scores(-10.0, -20.0, {1.0}) == -20.0);
  CHECK_THROWS_AS(combine_scores(0.0, 0.0, {1.5}), std::invalid_argument);
  CHECK_THROWS_AS(combine_scores(0.0, 0.0, {-0.5}), std::invalid_argument);
}

TEST_CASE("lm_sentence_score") {
  SUBCASE("single token under a uniform base") {
    const Vocabulary vocab = n_word_vocab(4);
    const double eos_prob = 0.125;
    const BackoffNgramLm base = BackoffNgramLm::from_unigram_table(
        vocab, std::vector<double>(4, 0.25), eos_prob);
    const AdaptedLm lm = AdaptedLm::identity(base);
    const double score = lm_sentence_score(lm, {"w1"});
    CHECK(score == doctest::Approx(std::log(0.25) + std::log(eos_prob))
                       .epsilon(1e-12));
  }

  SUBCASE("word factors add in log space; eos factor is 1") {
    const Vocabulary vocab = n_word_vocab(2);
    const BackoffNgramLm base =
        BackoffNgramLm::from_unigram_table(vocab, {0.5, 0.5}, 0.25);
    // factor("w1") = g/u = 0.2/0.1 = 2 exactly.
    const UnigramDistribution u({0.9, 0.1});
    const UnigramDistribution g({0.8, 0.2});
    const AdaptedLm adapted = AdaptedLm::build(base, u, g, 1.0);
    CHECK(std::exp(adapted.log_factor(vocab.id_of("w1"))) ==
          doctest::Approx(2.0).epsilon(1e-12));
    const AdaptedLm identity = AdaptedLm::identity(base);
    const std::vector<std::string> tokens = {"w1", "w1", "w1"};
    const double base_score = lm_sentence_score(identity, tokens);
    const double adapted_score = lm_sentence_score(adapted, tokens);
    CHECK(adapted_score - base_score ==
          doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
  }

  SUBCASE("general additivity across random factors") {
    Rng rng(66);
    const Corpus corpus =
        make_corpus({"a b c", "b c a", "c a b", "a b", "b c"});
    const Vocabulary vocab = Vocabulary::build(corpus, 1);
    const BackoffNgramLm base = BackoffNgramLm::train(corpus, vocab, 2);
    std::vector<double> u_vals(vocab.size());
    std::vector<double> g_vals(vocab.size());
    double su = 0.0;
    double sg = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      u_vals[i] = 0.1 + rng.uniform01();
      g_vals[i] = 0.1 + rng.uniform01();
      su += u_vals[i];
      sg += g_vals[i];
    }
    for (auto& v : u_vals) v /= su;
    for (auto& v : g_vals) v /= sg;
    const AdaptedLm adapted = AdaptedLm::build(
        base, UnigramDistribution(u_vals), UnigramDistribution(g_vals), 0.7);
    const AdaptedLm identity = AdaptedLm::identity(base);

    const std::vector<std::string> tokens = {"a", "c", "b", "a"};
    double factor_sum = 0.0;
    for (const std::string& token : tokens) {
      factor_sum += adapted.log_factor(vocab.id_of(token));
    }
    CHECK(lm_sentence_score(adapted, tokens) ==
          doctest::Approx(lm_sentence_score(identity, tokens) + factor_sum)
              .epsilon(1e-12));
  }

  SUBCASE("order >= 2 scores are permutation-sensitive") {
    const Corpus corpus = make_corpus({"a b", "a b", "a b", "b a"});
    const Vocabulary vocab = Vocabulary::build(corpus, 1);
    const BackoffNgramLm base = BackoffNgramLm::train(corpus, vocab, 2);
    const AdaptedLm lm = AdaptedLm::identity(base);
    CHECK(lm_sentence_score(lm, {"a", "b"}) !=
          lm_sentence_score(lm, {"b", "a"}));
  }

  SUBCASE("empty sequences are rejected") {
    const Vocabulary vocab = n_word_vocab(2);
    const BackoffNgramLm base =
        BackoffNgramLm::from_unigram_table(vocab, {0.5, 0.5}, 0.1);
    const AdaptedLm lm = AdaptedLm::identity(base);
    CHECK_THROWS_AS(lm_sentence_score(lm, {}), std::invalid_argument);
  }
}

TEST_CASE("rescore_nbest") {
  const Corpus corpus =
      make_corpus({"a b c", "a b", "c b a", "b b c", "a c"});
  const Vocabulary vocab = Vocabulary::build(corpus, 1);
  const BackoffNgramLm base = BackoffNgramLm::train(corpus, vocab, 2);
  const AdaptedLm identity = AdaptedLm::identity(base);

  SUBCASE("lm_weight 0 keeps the first-pass winner") {
    const NBestList list = scored_list(
        "u0", {{{"c", "c", "c"}, -1.0}, {{"a", "b"}, -2.0}});
    const RescoreResult result = rescore_nbest(list, identity, {0.0});
    CHECK(result.selected_index == 0);
    CHECK(result.order == std::vector<int>{0, 1});
  }

  SUBCASE("deterministic order and stable ties") {
    const NBestList list = scored_list(
        "u1", {{{"a", "b"}, -1.0}, {{"a", "b"}, -1.0}, {{"a", "b"}, -1.0}});
    const RescoreResult first = rescore_nbest(list, identity, {0.5});
    const RescoreResult second = rescore_nbest(list, identity, {0.5});
    CHECK(first.order == second.order);
    CHECK(first.order == std::vector<int>{0, 1, 2});  // rank breaks ties
    CHECK(first.selected_index == 0);
  }

  SUBCASE("personalization flips a constructed list") {
    // Two hypotheses, identical except for one word. The client-frequent
    // word "a" carries factor 4 under FMP (lambda = 1, g/u = 4).
    const Vocabulary fixture_vocab = Vocabulary::from_words(
        {"<unk>", "a", "b"});
    const BackoffNgramLm fixture_base = BackoffNgramLm::from_unigram_table(
        fixture_vocab, {0.1, 0.2, 0.4}, 0.30);
    const UnigramDistribution u({0.27, 0.08, 0.65});
    const UnigramDistribution g({0.03, 0.32, 0.65});
    const AdaptedLm fmp = AdaptedLm::build(fixture_base, u, g, 1.0);
    CHECK(std::exp(fmp.log_factor(1)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::exp(fmp.log_factor(2)) == doctest::Approx(1.0).epsilon(1e-12));

    const AdaptedLm baseline = AdaptedLm::identity(fixture_base);
    // First-pass slightly prefers hypothesis B ("b"); the base LM also
    // prefers B, so the baseline keeps B. The factor-4 boost on "a"
    // (ln 4 ~ 1.386, halved by lm_weight) flips FMP to A.
    const NBestList list =
        scored_list("u2", {{{"b"}, -1.0}, {{"a"}, -1.4}});
    const RescoreConfig cfg{0.5};

    const RescoreResult base_result = rescore_nbest(list, baseline, cfg);
    const RescoreResult fmp_result = rescore_nbest(list, fmp, cfg);
    CHECK(base_result.selected_index == 0);  // keeps "b"
    CHECK(fmp_result.selected_index == 1);   // flips to "a"

    // Verify the combined scores by hand.
    const double lm_b = std::log(0.4) + std::log(0.30);
    const double lm_a = std::log(0.2) + std::log(0.30);
    CHECK(base_result.scores[0].combined ==
          doctest::Approx(0.5 * -1.0 + 0.5 * lm_b).epsilon(1e-12));
    CHECK(base_result.scores[1].combined ==
          doctest::Approx(0.5 * -1.4 + 0.5 * lm_a).epsilon(1e-12));
    CHECK(fmp_result.scores[1].combined ==
          doctest::Approx(0.5 * -1.4 + 0.5 * (lm_a + std::log(4.0)))
              .epsilon(1e-12));
  }

  SUBCASE("lambda 0 and alpha=beta=0 match the baseline selection") {
    Rng rng(77);
    const UnigramDistribution u =
        estimate_background_unigram(corpus, vocab, 0.01);
    std::vector<double> qg_vals(vocab.size());
    std::vector<double> qp_vals(vocab.size());
    double sg = 0.0;
    double sp = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      qg_vals[i] = 0.05 + rng.uniform01();
      qp_vals[i] = 0.05 + rng.uniform01();
      sg += qg_vals[i];
      sp += qp_vals[i];
    }
    for (auto& v : qg_vals) v /= sg;
    for (auto& v : qp_vals) v /= sp;
    const UnigramDistribution qg(qg_vals);
    const UnigramDistribution qp(qp_vals);

    const UnigramDistribution g_lambda0 =
        interpolate_marginals(u, qg, qp, {0.0, 0.5, 0.25});
    const AdaptedLm lambda0 = AdaptedLm::build(base, u, g_lambda0, 0.0);
    const UnigramDistribution g_zero_weights =
        interpolate_marginals(u, qg, qp, {1.7, 0.0, 0.0});
    const AdaptedLm zero_weights =
        AdaptedLm::build(base, u, g_zero_weights, 1.7);

    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::pair<std::vector<std::string>, double>> scored;
      const int n = 2 + static_cast<int>(rng.uniform_int(5));
      for (int h = 0; h < n; ++h) {
        std::vector<std::string> tokens;
        for (int j = 0; j <= static_cast<int>(rng.uniform_int(5)); ++j) {
          tokens.push_back(vocab.word(
              static_cast<TokenId>(rng.uniform_int(vocab.size()))));
        }
        scored.emplace_back(tokens, -rng.uniform01() * 10.0);
      }
      const NBestList list =
          scored_list("t" + std::to_string(trial), std::move(scored));
      const RescoreConfig cfg{0.5};
      const int baseline_pick = rescore_nbest(list, identity, cfg).selected_index;
      CHECK(rescore_nbest(list, lambda0, cfg).selected_index == baseline_pick);
      CHECK(rescore_nbest(list, zero_weights, cfg).selected_index ==
            baseline_pick);
    }
  }

  SUBCASE("boosting a word unique to a hypothesis never lowers it") {
    Rng rng(88);
    for (int trial = 0; trial < 30; ++trial) {
      // Exactly one hypothesis contains "a"; the rest draw from {b, c}.
      std::vector<std::pair<std::vector<std::string>, double>> scored;
      scored.emplace_back(std::vector<std::string>{"a", "b"},
                          -rng.uniform01() * 4.0);
      const int n = 2 + static_cast<int>(rng.uniform_int(4));
      for (int h = 1; h < n; ++h) {
        std::vector<std::string> tokens;
        for (int j = 0; j <= static_cast<int>(rng.uniform_int(4)); ++j) {
          tokens.push_back(rng.uniform01() < 0.5 ? "b" : "c");
        }
        scored.emplace_back(tokens, -rng.uniform01() * 4.0);
      }
      const NBestList list =
          scored_list("m" + std::to_string(trial), std::move(scored));
      int target = -1;
      for (std::size_t i = 0; i < list.hypotheses.size(); ++i) {
        const auto& tokens = list.hypotheses[i].tokens;
        if (std::find(tokens.begin(), tokens.end(), "a") != tokens.end()) {
          target = static_cast<int>(i);
          break;
        }
      }
      REQUIRE(target >= 0);

      const UnigramDistribution u =
          estimate_background_unigram(corpus, vocab, 0.01);
      auto position_of_target = [&](const AdaptedLm& lm) {
        const RescoreResult result = rescore_nbest(list, lm, {0.5});
        for (std::size_t pos = 0; pos < result.order.size(); ++pos) {
          if (result.order[pos] == target) return pos;
        }
        return result.order.size();
      };

      // Increasing weight on "a" through the personal marginal.
      std::vector<double> weak_vals(vocab.size(),
                                    1.0 / static_cast<double>(vocab.size()));
      const UnigramDistribution weak(weak_vals);
      std::vector<double> strong_vals = weak_vals;
      strong_vals[vocab.id_of("a")] *= 3.0;
      double sum = 0.0;
      for (double v : strong_vals) sum += v;
      for (double& v : strong_vals) v /= sum;
      const UnigramDistribution strong(strong_vals);

      const std::size_t weak_pos =
          position_of_target(AdaptedLm::build(base, u, weak, 1.0));
      const std::size_t strong_pos =
          position_of_target(AdaptedLm::build(base, u, strong, 1.0));
      CHECK(strong_pos <= weak_pos);
    }
  }
}
