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
#include "fmp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fmp/wer.hpp"

namespace fmp {

namespace {

// Zipf sampler over ranks 0..n-1 via the cumulative weight table.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cumulative_(n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cumulative_[i] = sum;
    }
    for (double& c : cumulative_) {
      c /= sum;
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it =
        std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative_.begin()),
        cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

std::string zero_padded(int value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(digits.begin(), width - digits.size(), '0');
  }
  return digits;
}

std::vector<std::string> corrupt_reference(
    const std::vector<std::string>& reference, const SyntheticNoiseModel& model,
    const std::vector<std::string>& substitution_pool, Rng& rng) {
  auto random_word = [&]() -> const std::string& {
    return substitution_pool[rng.uniform_int(substitution_pool.size())];
  };
  auto substitute = [&](const std::string& word) -> const std::string& {
    const auto it = model.confusions.find(word);
    if (it != model.confusions.end() && !it->second.empty() &&
        rng.uniform01() < model.confusion_bias) {
      const std::string& picked =
          it->second[rng.uniform_int(it->second.size())];
      if (picked != word) {
        return picked;
      }
    }
    // A substitution must change the token; redraw a bounded number of
    // times (a one-word pool cannot).
    for (int attempt = 0; attempt < 8; ++attempt) {
      const std::string& picked = random_word();
      if (picked != word) {
        return picked;
      }
    }
    return random_word();
  };

  std::vector<std::string> tokens;
  tokens.reserve(reference.size() + 2);
  for (const std::string& word : reference) {
    const double u = rng.uniform01();
    if (u < model.del_rate) {
      // deleted
    } else if (u < model.del_rate + model.sub_rate) {
      tokens.push_back(substitute(word));
    } else {
      tokens.push_back(word);
    }
    if (rng.uniform01() < model.ins_rate) {
      tokens.push_back(random_word());
    }
  }
  if (tokens.empty()) {
    tokens.push_back(reference.front());
  }
  return tokens;
}

}  // namespace

void SyntheticNoiseModel::validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
  if (!rate_ok(sub_rate) || !rate_ok(ins_rate) || !rate_ok(del_rate)) {
    throw std::invalid_argument("noise rates must lie in [0, 1)");
  }
  if (sub_rate + ins_rate + del_rate >= 1.0) {
    throw std::invalid_argument("noise rates must sum to less than 1");
  }
  if (nbest_size < 1) {
    throw std::invalid_argument("nbest_size must be at least 1");
  }
  if (confusion_bias < 0.0 || confusion_bias > 1.0) {
    throw std::invalid_argument("confusion_bias must lie in [0, 1]");
  }
  if (!(score_noise_sd >= 0.0)) {
    throw std::invalid_argument("score_noise_sd must be non-negative");
  }
}

NBestList generate_synthetic_nbest(const std::string& utterance_id,
                                   const std::vector<std::string>& reference,
                                   const SyntheticNoiseModel& model,
                                   const Vocabulary& vocab, Rng& rng) {
  model.validate();
  if (reference.empty()) {
    throw std::invalid_argument("empty reference");
  }

  // Substitution pool: every real word (unk excluded).
  std::vector<std::string> pool(vocab.words().begin() + 1,
                                vocab.words().end());
  if (pool.empty()) {
    throw std::invalid_argument("vocabulary has no real words");
  }

  std::vector<std::pair<std::vector<std::string>, double>> scored;
  scored.reserve(model.nbest_size);
  for (int i = 0; i < model.nbest_size; ++i) {
    std::vector<std::string> tokens =
        i == 0 ? reference : corrupt_reference(reference, model, pool, rng);
    const double distance =
        static_cast<double>(wer(reference, tokens).errors());
    const double score =
        model.score_per_token * static_cast<double>(tokens.size()) -
        model.score_edit_penalty * distance +
        rng.normal(0.0, model.score_noise_sd);
    scored.emplace_back(std::move(tokens), score);
  }
  return NBestList::from_scored(utterance_id, std::move(scored));
}

void FleetSpec::validate() const {
  if (clients < 1) throw std::invalid_argument("clients must be at least 1");
  if (utterances_per_client < 1) {
    throw std::invalid_argument("utterances_per_client must be at least 1");
  }
  if (common_words < 8) {
    throw std::invalid_argument("common_words must be at least 8");
  }
  if (topic_words_per_client < 0 || trending_words < 0) {
    throw std::invalid_argument("lexicon sizes must be non-negative");
  }
  if (topic_prob < 0.0 || trending_prob < 0.0 ||
      topic_prob + trending_prob >= 1.0) {
    throw std::invalid_argument("lexicon probabilities must sum below 1");
  }
  if (min_tokens < 1 || max_tokens < min_tokens) {
    throw std::invalid_argument("invalid utterance length bounds");
  }
  if (background_lines < 1) {
    throw std::invalid_argument("background_lines must be at least 1");
  }
  if (special_occurrences < 1) {
    throw std::invalid_argument("special_occurrences must be at least 1");
  }
  if (!(zipf_exponent > 0.0)) {
    throw std::invalid_argument("zipf_exponent must be positive");
  }
  noise.validate();
}

GeneratedFleet generate_fleet(const FleetSpec& spec) {
  spec.validate();
  const Rng root(spec.seed);

  // Word inventory.
  std::vector<std::string> common(spec.common_words);
  for (int i = 0; i < spec.common_words; ++i) {
    common[i] = "w" + zero_padded(i, 4);
  }
  std::vector<std::vector<std::string>> topics(spec.clients);
  for (int c = 0; c < spec.clients; ++c) {
    topics[c].reserve(spec.topic_words_per_client);
    for (int j = 0; j < spec.topic_words_per_client; ++j) {
      topics[c].push_back("t" + zero_padded(c, 2) + "x" + zero_padded(j, 2));
    }
  }
  std::vector<std::string> trending(spec.trending_words);
  for (int j = 0; j < spec.trending_words; ++j) {
    trending[j] = "g" + zero_padded(j, 3);
  }

  // Confusion sets: special words confuse with mid-frequency common words;
  // common words confuse among themselves.
  SyntheticNoiseModel noise = spec.noise;
  {
    Rng rng = root.derive("confusions");
    const std::size_t band_lo = common.size() / 8;
    const std::size_t band_hi = (common.size() * 5) / 8;
    auto mid_band_word = [&]() {
      return common[band_lo + rng.uniform_int(band_hi - band_lo)];
    };
    for (const auto& lexicon : topics) {
      for (const std::string& word : lexicon) {
        noise.confusions[word] = {mid_band_word()};
      }
    }
    for (const std::string& word : trending) {
      noise.confusions[word] = {mid_band_word()};
    }
    for (const std::string& word : common) {
      noise.confusions[word] = {common[rng.uniform_int(common.size())],
                                common[rng.uniform_int(common.size())]};
    }
  }

  const ZipfSampler common_zipf(common.size(), spec.zipf_exponent);

  // Background corpus: Zipfian common text plus a few occurrences of every
  // special word, so the trained vocabulary covers them.
  GeneratedFleet fleet;
  {
    Rng rng = root.derive("background");
    fleet.background_lines.reserve(
        spec.background_lines +
        (spec.clients * spec.topic_words_per_client + spec.trending_words) *
            spec.special_occurrences);
    auto random_length = [&]() {
      return spec.min_tokens +
             static_cast<int>(rng.uniform_int(
                 static_cast<std::uint64_t>(spec.max_tokens - spec.min_tokens) +
                 1));
    };
    for (int i = 0; i < spec.background_lines; ++i) {
      std::string line;
      const int len = random_length();
      for (int j = 0; j < len; ++j) {
        if (j > 0) line += ' ';
        line += common[common_zipf.draw(rng)];
      }
      fleet.background_lines.push_back(std::move(line));
    }
    auto inject = [&](const std::string& word) {
      for (int occ = 0; occ < spec.special_occurrences; ++occ) {
        std::string line = common[common_zipf.draw(rng)];
        line += ' ';
        line += word;
        line += ' ';
        line += common[common_zipf.draw(rng)];
        fleet.background_lines.push_back(std::move(line));
      }
    };
    for (const auto& lexicon : topics) {
      for (const std::string& word : lexicon) {
        inject(word);
      }
    }
    for (const std::string& word : trending) {
      inject(word);
    }
  }

  // Generation-side vocabulary (substitution pool only); the LM vocabulary
  // is trained later from the background corpus.
  std::vector<std::string> all_words;
  all_words.emplace_back(Vocabulary::kUnkToken);
  all_words.insert(all_words.end(), common.begin(), common.end());
  for (const auto& lexicon : topics) {
    all_words.insert(all_words.end(), lexicon.begin(), lexicon.end());
  }
  all_words.insert(all_words.end(), trending.begin(), trending.end());
  const Vocabulary gen_vocab = Vocabulary::from_words(std::move(all_words));

  // Client utterance streams.
  for (int c = 0; c < spec.clients; ++c) {
    const std::string client_id = "client" + zero_padded(c, 3);
    Rng rng = root.derive("client-" + client_id);

    // Trending adoption: each trending word becomes active for this client
    // at a random point of its stream.
    std::vector<int> onset(trending.size(), 0);
    for (std::size_t j = 0; j < trending.size(); ++j) {
      onset[j] = static_cast<int>(
          rng.uniform_int(static_cast<std::uint64_t>(spec.utterances_per_client)));
    }
    const ZipfSampler topic_zipf(
        std::max<std::size_t>(topics[c].size(), 1), 1.0);

    for (int s = 0; s < spec.utterances_per_client; ++s) {
      std::vector<std::string> reference;
      const int len =
          spec.min_tokens +
          static_cast<int>(rng.uniform_int(
              static_cast<std::uint64_t>(spec.max_tokens - spec.min_tokens) +
              1));
      std::vector<std::size_t> active;
      for (std::size_t j = 0; j < trending.size(); ++j) {
        if (onset[j] <= s) active.push_back(j);
      }
      for (int i = 0; i < len; ++i) {
        const double u = rng.uniform01();
        if (u < spec.topic_prob && !topics[c].empty()) {
          reference.push_back(topics[c][topic_zipf.draw(rng)]);
        } else if (u < spec.topic_prob + spec.trending_prob &&
                   !active.empty()) {
          reference.push_back(trending[active[rng.uniform_int(active.size())]]);
        } else {
          reference.push_back(common[common_zipf.draw(rng)]);
        }
      }

      UtteranceRecord record;
      record.client_id = client_id;
      record.seq = s;
      record.utterance_id = client_id + "_u" + zero_padded(s, 4);
      record.reference = reference;
      record.nbest = generate_synthetic_nbest(record.utterance_id, reference,
                                              noise, gen_vocab, rng);
      fleet.records.push_back(std::move(record));
    }
  }
  return fleet;
}

}  // namespace fmp
