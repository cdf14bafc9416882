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
#include <map>
#include <set>

#include "doctest.h"

#include "fmp/rng.hpp"
#include "fmp/simulation.hpp"
#include "fmp/synthetic.hpp"
#include "fmp/wer.hpp"

using namespace fmp;

namespace {

// Independent edit-distance oracle: plain cost-only DP, no traceback.
int edit_distance_oracle(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<int> previous(b.size() + 1);
  std::vector<int> current(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    previous[j] = static_cast<int>(j);
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    current[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int substitution =
          previous[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      current[j] =
          std::min({substitution, previous[j] + 1, current[j - 1] + 1});
    }
    std::swap(previous, current);
  }
  return previous[b.size()];
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len,
                                       std::size_t alphabet) {
  std::vector<std::string> tokens;
  const std::size_t len = 1 + rng.uniform_int(max_len);
  for (std::size_t i = 0; i < len; ++i) {
    tokens.push_back("w" + std::to_string(rng.uniform_int(alphabet)));
  }
  return tokens;
}

}  // namespace

TEST_CASE("wer hand cases") {
  CHECK(wer({"a", "b", "c"}, {"a", "b", "c"}).wer() == 0.0);

  const WerCounts sub = wer({"a", "b", "c"}, {"a", "x", "c"});
  CHECK(sub.substitutions == 1);
  CHECK(sub.insertions == 0);
  CHECK(sub.deletions == 0);
  CHECK(sub.wer() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const WerCounts ins = wer({"a", "b"}, {"a", "b", "c"});
  CHECK(ins.insertions == 1);
  CHECK(ins.wer() == doctest::Approx(0.5).epsilon(1e-15));

  const WerCounts del = wer({"a", "b"}, {"a"});
  CHECK(del.deletions == 1);

  const WerCounts empty_hyp = wer({"a", "b"}, {});
  CHECK(empty_hyp.deletions == 2);
  CHECK(empty_hyp.wer() == 1.0);

  CHECK_THROWS_WITH_AS(wer({}, {"a"}), "empty reference",
                       std::invalid_argument);
}

TEST_CASE("wer can exceed 1 with enough insertions") {
  const WerCounts counts = wer({"a"}, {"x", "y", "z"});
  CHECK(counts.errors() == 3);
  CHECK(counts.wer() == 3.0);
}

TEST_CASE("wer agrees with the independent DP oracle on random pairs") {
  Rng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<std::string> ref = random_tokens(rng, 20, 6);
    const std::vector<std::string> hyp = random_tokens(rng, 20, 6);
    const WerCounts counts = wer(ref, hyp);
    const int oracle = edit_distance_oracle(ref, hyp);
    CHECK(counts.errors() == oracle);
    CHECK(counts.wer() ==
          doctest::Approx(static_cast<double>(oracle) /
                          static_cast<double>(ref.size()))
              .epsilon(1e-15));
  }
}

TEST_CASE("wer alignment prefers substitutions on ties deterministically") {
  // "a b" vs "x": either {sub a->x, del b} or {del a, sub b->x}; both cost 2.
  // The traceback must always produce one substitution and one deletion.
  const WerCounts counts = wer({"a", "b"}, {"x"});
  CHECK(counts.substitutions == 1);
  CHECK(counts.deletions == 1);
  CHECK(counts.insertions == 0);
}

TEST_CASE("partition_round_ranges") {
  SUBCASE("even split") {
    const auto groups = partition_round_ranges(10, 1);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::pair<std::size_t, std::size_t>{0, 5});
    CHECK(groups[1] == std::pair<std::size_t, std::size_t>{5, 10});
  }

  SUBCASE("remainder goes to earlier groups") {
    const auto groups = partition_round_ranges(7, 2);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].second - groups[0].first == 3);
    CHECK(groups[1].second - groups[1].first == 2);
    CHECK(groups[2].second - groups[2].first == 2);
  }

  SUBCASE("contiguity: concatenation equals the input") {
    for (std::size_t n : {4, 9, 17, 100}) {
      for (int t : {1, 2, 3}) {
        const auto groups = partition_round_ranges(n, t);
        std::size_t expected_begin = 0;
        for (const auto& [begin, end] : groups) {
          CHECK(begin == expected_begin);
          CHECK(end >= begin + 1);
          expected_begin = end;
        }
        CHECK(expected_begin == n);
      }
    }
  }

  SUBCASE("too few utterances") {
    CHECK_THROWS_AS(partition_round_ranges(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(partition_round_ranges(0, 1), std::invalid_argument);
  }
}

TEST_CASE("partition_rounds preserves record order") {
  std::vector<UtteranceRecord> records(7);
  for (int i = 0; i < 7; ++i) {
    records[i].seq = i;
  }
  const auto groups = partition_rounds(records, 2);
  REQUIRE(groups.size() == 3);
  int expected = 0;
  for (const auto& group : groups) {
    for (const UtteranceRecord* record : group) {
      CHECK(record->seq == expected++);
    }
  }
}

TEST_CASE("generate_synthetic_nbest") {
  const Vocabulary vocab = Vocabulary::from_words(
      {"<unk>", "aa", "bb", "cc", "dd", "ee", "ff"});
  const std::vector<std::string> reference = {"aa", "bb", "cc"};

  SUBCASE("zero rates reproduce the reference everywhere") {
    SyntheticNoiseModel model;
    model.sub_rate = model.ins_rate = model.del_rate = 0.0;
    model.nbest_size = 6;
    Rng rng(5);
    const NBestList list =
        generate_synthetic_nbest("u0", reference, model, vocab, rng);
    REQUIRE(list.hypotheses.size() == 6);
    for (const Hypothesis& hyp : list.hypotheses) {
      CHECK(hyp.tokens == reference);
    }
    CHECK(wer(reference, list.hypotheses.front().tokens).wer() == 0.0);
  }

  SUBCASE("seeded determinism") {
    SyntheticNoiseModel model;
    Rng rng_a(9);
    Rng rng_b(9);
    const NBestList a =
        generate_synthetic_nbest("u0", reference, model, vocab, rng_a);
    const NBestList b =
        generate_synthetic_nbest("u0", reference, model, vocab, rng_b);
    REQUIRE(a.hypotheses.size() == b.hypotheses.size());
    for (std::size_t i = 0; i < a.hypotheses.size(); ++i) {
      CHECK(a.hypotheses[i].tokens == b.hypotheses[i].tokens);
      CHECK(a.hypotheses[i].first_pass_score ==
            b.hypotheses[i].first_pass_score);
    }
  }

  SUBCASE("realized substitution rate matches the configured rate") {
    SyntheticNoiseModel model;
    model.sub_rate = 0.2;
    model.ins_rate = 0.0;
    model.del_rate = 0.0;
    model.nbest_size = 2;  // one corrupted variant per call
    model.confusion_bias = 0.0;
    Rng rng(31);
    std::size_t tokens_seen = 0;
    std::size_t substituted = 0;
    std::vector<std::string> long_ref;
    for (int i = 0; i < 50; ++i) {
      long_ref.push_back(vocab.word(
          static_cast<TokenId>(1 + rng.uniform_int(vocab.size() - 1))));
    }
    while (tokens_seen < 10000) {
      const NBestList list =
          generate_synthetic_nbest("u", long_ref, model, vocab, rng);
      const std::vector<std::string>& corrupted =
          list.hypotheses[list.hypotheses[0].tokens == long_ref ? 1 : 0]
              .tokens;
      REQUIRE(corrupted.size() == long_ref.size());
      for (std::size_t i = 0; i < long_ref.size(); ++i) {
        ++tokens_seen;
        if (corrupted[i] != long_ref[i]) ++substituted;
      }
    }
    const double realized =
        static_cast<double>(substituted) / static_cast<double>(tokens_seen);
    CHECK(std::fabs(realized - 0.2) < 0.02);
  }

  SUBCASE("rates must sum below one") {
    SyntheticNoiseModel model;
    model.sub_rate = 0.6;
    model.del_rate = 0.5;
    Rng rng(1);
    CHECK_THROWS_AS(
        generate_synthetic_nbest("u", reference, model, vocab, rng),
        std::invalid_argument);
  }

  SUBCASE("empty reference is rejected") {
    SyntheticNoiseModel model;
    Rng rng(1);
    CHECK_THROWS_AS(generate_synthetic_nbest("u", {}, model, vocab, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("generate_fleet") {
  FleetSpec spec;
  spec.clients = 3;
  spec.utterances_per_client = 8;
  spec.common_words = 50;
  spec.topic_words_per_client = 6;
  spec.trending_words = 4;
  spec.background_lines = 120;
  spec.seed = 11;

  const GeneratedFleet fleet = generate_fleet(spec);

  SUBCASE("shape") {
    CHECK(fleet.records.size() == 24);
    std::map<std::string, int> per_client;
    for (const UtteranceRecord& record : fleet.records) {
      ++per_client[record.client_id];
      CHECK_FALSE(record.reference.empty());
      CHECK(record.nbest.hypotheses.size() ==
            static_cast<std::size_t>(spec.noise.nbest_size));
    }
    CHECK(per_client.size() == 3);
    for (const auto& [client, count] : per_client) {
      CHECK(count == 8);
    }
  }

  SUBCASE("background corpus covers every special word") {
    std::set<std::string> seen;
    for (const std::string& line : fleet.background_lines) {
      for (const std::string& token : tokenize(line)) {
        seen.insert(token);
      }
    }
    for (int c = 0; c < spec.clients; ++c) {
      for (int j = 0; j < spec.topic_words_per_client; ++j) {
        const std::string word =
            "t0" + std::to_string(c) + "x0" + std::to_string(j);
        CHECK(seen.contains(word));
      }
    }
    for (int j = 0; j < spec.trending_words; ++j) {
      CHECK(seen.contains("g00" + std::to_string(j)));
    }
  }

  SUBCASE("determinism") {
    const GeneratedFleet again = generate_fleet(spec);
    REQUIRE(again.records.size() == fleet.records.size());
    CHECK(again.background_lines == fleet.background_lines);
    for (std::size_t i = 0; i < fleet.records.size(); ++i) {
      CHECK(again.records[i].utterance_id == fleet.records[i].utterance_id);
      CHECK(again.records[i].reference == fleet.records[i].reference);
      REQUIRE(again.records[i].nbest.hypotheses.size() ==
              fleet.records[i].nbest.hypotheses.size());
      for (std::size_t h = 0; h < fleet.records[i].nbest.hypotheses.size();
           ++h) {
        CHECK(again.records[i].nbest.hypotheses[h].tokens ==
              fleet.records[i].nbest.hypotheses[h].tokens);
        CHECK(again.records[i].nbest.hypotheses[h].first_pass_score ==
              fleet.records[i].nbest.hypotheses[h].first_pass_score);
      }
    }
  }

  SUBCASE("spec validation") {
    FleetSpec bad = spec;
    bad.topic_prob = 0.9;
    bad.trending_prob = 0.3;
    CHECK_THROWS_AS(generate_fleet(bad), std::invalid_argument);
    bad = spec;
    bad.min_tokens = 5;
    bad.max_tokens = 3;
    CHECK_THROWS_AS(generate_fleet(bad), std::invalid_argument);
  }
}
