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
#include "fmp/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "fmp/hashing.hpp"

namespace fmp {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : line) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

Corpus make_corpus(const std::vector<std::string>& lines) {
  Corpus corpus;
  for (const std::string& line : lines) {
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) {
      continue;
    }
    corpus.token_count += tokens.size();
    corpus.utterances.push_back(std::move(tokens));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file: " + path);
  }
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) {
      continue;
    }
    corpus.token_count += tokens.size();
    corpus.utterances.push_back(std::move(tokens));
  }
  return corpus;
}

Vocabulary Vocabulary::build(const Corpus& corpus, std::size_t min_count) {
  if (corpus.empty()) {
    throw std::invalid_argument("empty corpus");
  }
  if (min_count < 1) {
    throw std::invalid_argument("min_count must be at least 1");
  }

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& utterance : corpus.utterances) {
    for (const std::string& token : utterance) {
      ++counts[token];
    }
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  kept.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_count && token != kUnkToken) {
      kept.emplace_back(token, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::string> words;
  words.reserve(kept.size() + 1);
  words.emplace_back(kUnkToken);
  for (auto& [token, count] : kept) {
    words.push_back(std::move(token));
  }
  return from_words(std::move(words));
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  if (words.empty() || words.front() != kUnkToken) {
    throw std::invalid_argument("word list must start with " +
                                std::string(kUnkToken));
  }
  Vocabulary vocab;
  vocab.words_ = std::move(words);
  vocab.index_.reserve(vocab.words_.size());
  for (std::size_t i = 0; i < vocab.words_.size(); ++i) {
    auto [it, inserted] =
        vocab.index_.emplace(vocab.words_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate word in vocabulary: " +
                                  vocab.words_[i]);
    }
  }
  return vocab;
}

TokenId Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_id() : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

const std::string& Vocabulary::word(TokenId id) const {
  if (id >= words_.size()) {
    throw std::out_of_range("token id out of range");
  }
  return words_[id];
}

std::vector<TokenId> Vocabulary::ids_of(
    const std::vector<std::string>& tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const std::string& token : tokens) {
    ids.push_back(id_of(token));
  }
  return ids;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t state = kFnvOffset;
  for (const std::string& w : words_) {
    state = fnv1a64(w, state);
    state = fnv1a64(std::string_view("\n", 1), state);
  }
  return state;
}

}  // namespace fmp
