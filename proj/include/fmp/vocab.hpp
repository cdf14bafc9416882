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
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fmp {

using TokenId = std::uint32_t;

// Whitespace tokenization with ASCII lowercase folding.
std::vector<std::string> tokenize(std::string_view line);

struct Corpus {
  std::vector<std::vector<std::string>> utterances;
  std::size_t token_count = 0;

  bool empty() const { return utterances.empty(); }
};

// Blank lines are skipped, so every utterance is non-empty.
Corpus make_corpus(const std::vector<std::string>& lines);
Corpus load_corpus(const std::string& path);

// Token inventory with a reserved unknown token at id 0. Remaining ids are
// dense and ordered by descending corpus count, ties broken lexicographically.
class Vocabulary {
 public:
  static constexpr std::string_view kUnkToken = "<unk>";

  // Keeps every token appearing at least min_count times; everything else
  // folds into <unk>.
  static Vocabulary build(const Corpus& corpus, std::size_t min_count);

  // Word list must be non-empty and start with <unk>; used by deserialization.
  static Vocabulary from_words(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  TokenId unk_id() const { return 0; }

  // Sentence-boundary ids for the LM event space. They are not vocabulary
  // entries: eos is a predictable event one past the vocabulary, bos appears
  // only in contexts.
  TokenId eos_id() const { return static_cast<TokenId>(size()); }
  TokenId bos_id() const { return static_cast<TokenId>(size() + 1); }

  TokenId id_of(std::string_view token) const;  // OOV folds to unk
  bool contains(std::string_view token) const;
  const std::string& word(TokenId id) const;
  const std::vector<std::string>& words() const { return words_; }
  std::vector<TokenId> ids_of(const std::vector<std::string>& tokens) const;

  // Stable fingerprint of the word list; artifacts and upload records carry
  // it to detect vocabulary drift.
  std::uint64_t hash() const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> index_;
};

}  // namespace fmp
