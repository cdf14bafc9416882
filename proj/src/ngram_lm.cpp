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
#include "fmp/ngram_lm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fmp/hashing.hpp"

namespace fmp {

namespace {

std::string pack_context(std::span<const TokenId> context) {
  return std::string(reinterpret_cast<const char*>(context.data()),
                     context.size() * sizeof(TokenId));
}

std::vector<TokenId> unpack_context(const std::string& key) {
  std::vector<TokenId> ids(key.size() / sizeof(TokenId));
  std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw std::runtime_error("failed to format double");
  }
  return std::string(buffer, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("malformed number in model artifact: '" +
                             std::string(text) + "'");
  }
  return value;
}

}  // namespace

void BackoffNgramLm::add_event(std::span<const TokenId> context, TokenId w) {
  ++unigram_counts_[w];
  ++unigram_total_;
  for (std::size_t k = 1; k <= context.size(); ++k) {
    ContextCounts& ctx = levels_[k - 1][pack_context(context.last(k))];
    ++ctx.total;
    ++ctx.words[w];
  }
}

void BackoffNgramLm::finalize_counts() {
  unigram_distinct_ = 0;
  for (std::uint64_t c : unigram_counts_) {
    if (c > 0) ++unigram_distinct_;
  }
}

BackoffNgramLm BackoffNgramLm::train(const Corpus& corpus,
                                     const Vocabulary& vocab, int order) {
  if (order < 1 || order > 5) {
    throw std::invalid_argument("order must lie in [1, 5]");
  }
  if (corpus.empty()) {
    throw std::invalid_argument("empty corpus");
  }

  BackoffNgramLm lm;
  lm.order_ = order;
  lm.vocab_ = vocab;
  lm.unigram_counts_.assign(vocab.size() + 1, 0);
  lm.levels_.resize(static_cast<std::size_t>(order) - 1);

  std::vector<TokenId> sequence;
  for (const auto& utterance : corpus.utterances) {
    sequence.assign(static_cast<std::size_t>(order) - 1, vocab.bos_id());
    for (const std::string& token : utterance) {
      sequence.push_back(vocab.id_of(token));
    }
    sequence.push_back(vocab.eos_id());
    for (std::size_t pos = static_cast<std::size_t>(order) - 1;
         pos < sequence.size(); ++pos) {
      const std::span<const TokenId> context(
          sequence.data() + pos - (order - 1),
          static_cast<std::size_t>(order) - 1);
      lm.add_event(context, sequence[pos]);
    }
  }
  lm.finalize_counts();
  return lm;
}

BackoffNgramLm BackoffNgramLm::from_unigram_table(const Vocabulary& vocab,
                                                  std::vector<double> probs,
                                                  double eos_prob) {
  if (probs.size() != vocab.size()) {
    throw std::invalid_argument("table size must match vocabulary size");
  }
  if (eos_prob < 0.0) {
    throw std::invalid_argument("eos probability must be non-negative");
  }
  BackoffNgramLm lm;
  lm.order_ = 1;
  lm.vocab_ = vocab;
  lm.table_mode_ = true;
  lm.table_log_probs_.reserve(probs.size() + 1);
  for (double p : probs) {
    if (p < 0.0) {
      throw std::invalid_argument("table probabilities must be non-negative");
    }
    lm.table_log_probs_.push_back(std::log(p));
  }
  lm.table_log_probs_.push_back(std::log(eos_prob));
  return lm;
}

double BackoffNgramLm::prob(TokenId w, std::span<const TokenId> history) const {
  const std::size_t domain = vocab_.size() + 1;  // vocabulary plus eos
  if (w >= domain) {
    throw std::out_of_range("event id outside the LM event space");
  }
  if (table_mode_) {
    return std::exp(table_log_probs_[w]);
  }

  // Bottom of the recursion: uniform over the event space.
  double p = 1.0 / static_cast<double>(domain);

  const double d = kDiscount;
  {
    const double total = static_cast<double>(unigram_total_);
    const double discounted =
        std::max(static_cast<double>(unigram_counts_[w]) - d, 0.0) / total;
    const double gamma = d * static_cast<double>(unigram_distinct_) / total;
    p = discounted + gamma * p;
  }

  const std::size_t max_k =
      std::min<std::size_t>(history.size(), static_cast<std::size_t>(order_) - 1);
  for (std::size_t k = 1; k <= max_k; ++k) {
    const auto& level = levels_[k - 1];
    const auto it = level.find(pack_context(history.last(k)));
    if (it == level.end()) {
      // Longer contexts cannot exist if this suffix was never observed.
      break;
    }
    const ContextCounts& ctx = it->second;
    const double total = static_cast<double>(ctx.total);
    const auto word_it = ctx.words.find(w);
    const double count =
        word_it == ctx.words.end() ? 0.0 : static_cast<double>(word_it->second);
    const double discounted = std::max(count - d, 0.0) / total;
    const double gamma =
        d * static_cast<double>(ctx.words.size()) / total;
    p = discounted + gamma * p;
  }
  return p;
}

double BackoffNgramLm::log_prob(TokenId w,
                                std::span<const TokenId> history) const {
  if (table_mode_) {
    if (w >= table_log_probs_.size()) {
      throw std::out_of_range("event id outside the LM event space");
    }
    return table_log_probs_[w];
  }
  return std::log(prob(w, history));
}

double BackoffNgramLm::sentence_log_prob(
    std::span<const TokenId> tokens) const {
  std::vector<TokenId> window(static_cast<std::size_t>(order_) - 1,
                              vocab_.bos_id());
  double total = 0.0;
  auto step = [&](TokenId w) {
    total += log_prob(w, window);
    if (!window.empty()) {
      window.erase(window.begin());
      window.push_back(w);
    }
  };
  for (TokenId w : tokens) {
    step(w);
  }
  step(vocab_.eos_id());
  return total;
}

double BackoffNgramLm::perplexity(const Corpus& corpus) const {
  if (corpus.empty()) {
    throw std::invalid_argument("empty corpus");
  }
  double log_sum = 0.0;
  std::size_t events = 0;
  for (const auto& utterance : corpus.utterances) {
    log_sum += sentence_log_prob(vocab_.ids_of(utterance));
    events += utterance.size() + 1;  // one eos per utterance
  }
  return std::exp(-log_sum / static_cast<double>(events));
}

void LmArtifact::save(const std::string& path) const {
  if (lm.table_mode_) {
    throw std::logic_error("table fixtures are not serializable");
  }
  std::ostringstream out;
  out << "FMPLM1\n";
  out << "version 1\n";
  out << "order " << lm.order_ << "\n";
  out << "discount " << format_double(BackoffNgramLm::kDiscount) << "\n";
  out << "vocab " << lm.vocab_.size() << " " << to_hex(lm.vocab_.hash())
      << "\n";
  for (const std::string& w : lm.vocab_.words()) {
    out << w << "\n";
  }
  out << "smoothing_k " << format_double(smoothing_k) << "\n";
  out << "background_unigram " << background_unigram.size() << "\n";
  for (double p : background_unigram.probs()) {
    out << format_double(p) << "\n";
  }

  out << "level 0 " << [&] {
    std::size_t nonzero = 0;
    for (std::uint64_t c : lm.unigram_counts_) {
      if (c > 0) ++nonzero;
    }
    return nonzero;
  }() << "\n";
  for (std::size_t w = 0; w < lm.unigram_counts_.size(); ++w) {
    if (lm.unigram_counts_[w] > 0) {
      out << w << " " << lm.unigram_counts_[w] << "\n";
    }
  }

  for (std::size_t k = 1; k < static_cast<std::size_t>(lm.order_); ++k) {
    // Flatten to (context ids..., word id, count) rows, sorted for
    // deterministic output.
    std::vector<std::pair<std::vector<TokenId>, std::uint64_t>> rows;
    for (const auto& [key, ctx] : lm.levels_[k - 1]) {
      std::vector<TokenId> ids = unpack_context(key);
      for (const auto& [w, count] : ctx.words) {
        std::vector<TokenId> row = ids;
        row.push_back(w);
        rows.emplace_back(std::move(row), count);
      }
    }
    std::sort(rows.begin(), rows.end());
    out << "level " << k << " " << rows.size() << "\n";
    for (const auto& [ids, count] : rows) {
      for (TokenId id : ids) {
        out << id << " ";
      }
      out << count << "\n";
    }
  }
  out << "end\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot write model artifact: " + path);
  }
  file << out.str();
  if (!file) {
    throw std::runtime_error("failed writing model artifact: " + path);
  }
}

namespace {

std::string next_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("truncated model artifact: " + path);
  }
  return line;
}

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> parts;
  std::istringstream ss(line);
  std::string part;
  while (ss >> part) {
    parts.push_back(part);
  }
  return parts;
}

std::uint64_t parse_u64(std::string_view text, const std::string& path) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("malformed integer in model artifact: " + path);
  }
  return value;
}

}  // namespace

LmArtifact LmArtifact::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open model artifact: " + path);
  }
  if (next_line(in, path) != "FMPLM1") {
    throw std::runtime_error("not an FMPLM1 artifact: " + path);
  }
  if (next_line(in, path) != "version 1") {
    throw std::runtime_error("unsupported artifact version: " + path);
  }

  auto expect_field = [&](const std::string& name) {
    std::vector<std::string> parts = split_words(next_line(in, path));
    if (parts.size() < 2 || parts[0] != name) {
      throw std::runtime_error("malformed artifact field '" + name +
                               "': " + path);
    }
    return parts;
  };

  LmArtifact artifact;
  BackoffNgramLm& lm = artifact.lm;
  lm.order_ = static_cast<int>(parse_u64(expect_field("order")[1], path));
  if (lm.order_ < 1 || lm.order_ > 5) {
    throw std::runtime_error("artifact order out of range: " + path);
  }
  const double discount = parse_double(expect_field("discount")[1]);
  if (discount != BackoffNgramLm::kDiscount) {
    throw std::runtime_error("unsupported discount in artifact: " + path);
  }

  const auto vocab_parts = expect_field("vocab");
  if (vocab_parts.size() != 3) {
    throw std::runtime_error("malformed vocab header: " + path);
  }
  const std::size_t vocab_size = parse_u64(vocab_parts[1], path);
  std::vector<std::string> words;
  words.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    words.push_back(next_line(in, path));
  }
  lm.vocab_ = Vocabulary::from_words(std::move(words));
  if (to_hex(lm.vocab_.hash()) != vocab_parts[2]) {
    throw std::runtime_error("vocab hash mismatch in artifact: " + path);
  }

  artifact.smoothing_k = parse_double(expect_field("smoothing_k")[1]);
  const std::size_t unigram_size =
      parse_u64(expect_field("background_unigram")[1], path);
  std::vector<double> probs;
  probs.reserve(unigram_size);
  for (std::size_t i = 0; i < unigram_size; ++i) {
    probs.push_back(parse_double(next_line(in, path)));
  }
  artifact.background_unigram = UnigramDistribution(std::move(probs));
  if (artifact.background_unigram.size() != lm.vocab_.size()) {
    throw std::runtime_error("background unigram size mismatch: " + path);
  }

  lm.unigram_counts_.assign(lm.vocab_.size() + 1, 0);
  lm.levels_.resize(static_cast<std::size_t>(lm.order_) - 1);
  for (std::size_t k = 0; k < static_cast<std::size_t>(lm.order_); ++k) {
    const auto header = split_words(next_line(in, path));
    if (header.size() != 3 || header[0] != "level" ||
        parse_u64(header[1], path) != k) {
      throw std::runtime_error("malformed level header: " + path);
    }
    const std::size_t entries = parse_u64(header[2], path);
    for (std::size_t i = 0; i < entries; ++i) {
      const auto parts = split_words(next_line(in, path));
      if (parts.size() != k + 2) {
        throw std::runtime_error("malformed ngram row: " + path);
      }
      const std::uint64_t count = parse_u64(parts.back(), path);
      if (k == 0) {
        const std::size_t w = parse_u64(parts[0], path);
        if (w >= lm.unigram_counts_.size()) {
          throw std::runtime_error("ngram id out of range: " + path);
        }
        lm.unigram_counts_[w] = count;
        lm.unigram_total_ += count;
      } else {
        std::vector<TokenId> ids(k);
        for (std::size_t j = 0; j < k; ++j) {
          ids[j] = static_cast<TokenId>(parse_u64(parts[j], path));
        }
        const TokenId w = static_cast<TokenId>(parse_u64(parts[k], path));
        BackoffNgramLm::ContextCounts& ctx =
            lm.levels_[k - 1][pack_context(ids)];
        ctx.total += count;
        ctx.words[w] = count;
      }
    }
  }
  if (next_line(in, path) != "end") {
    throw std::runtime_error("missing artifact terminator: " + path);
  }
  lm.finalize_counts();
  return artifact;
}

}  // namespace fmp
