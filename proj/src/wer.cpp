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
#include "fmp/wer.hpp"

#include <stdexcept>

namespace fmp {

WerCounts& WerCounts::operator+=(const WerCounts& other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  reference_words += other.reference_words;
  return *this;
}

WerCounts wer(const std::vector<std::string>& reference,
              const std::vector<std::string>& hypothesis) {
  if (reference.empty()) {
    throw std::invalid_argument("empty reference");
  }
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();

  enum Move : unsigned char { kMatch, kSubstitute, kDelete, kInsert };

  // cost[i][j]: edit distance between reference[0..i) and hypothesis[0..j).
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  std::vector<std::vector<Move>> move(n + 1, std::vector<Move>(m + 1, kMatch));
  for (std::size_t i = 1; i <= n; ++i) {
    cost[i][0] = static_cast<int>(i);
    move[i][0] = kDelete;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    cost[0][j] = static_cast<int>(j);
    move[0][j] = kInsert;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const bool match = reference[i - 1] == hypothesis[j - 1];
      const int diag = cost[i - 1][j - 1] + (match ? 0 : 1);
      const int del = cost[i - 1][j] + 1;
      const int ins = cost[i][j - 1] + 1;
      // Tie order: diagonal, deletion, insertion.
      if (diag <= del && diag <= ins) {
        cost[i][j] = diag;
        move[i][j] = match ? kMatch : kSubstitute;
      } else if (del <= ins) {
        cost[i][j] = del;
        move[i][j] = kDelete;
      } else {
        cost[i][j] = ins;
        move[i][j] = kInsert;
      }
    }
  }

  WerCounts counts;
  counts.reference_words = static_cast<int>(n);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    switch (move[i][j]) {
      case kMatch:
        --i;
        --j;
        break;
      case kSubstitute:
        ++counts.substitutions;
        --i;
        --j;
        break;
      case kDelete:
        ++counts.deletions;
        --i;
        break;
      case kInsert:
        ++counts.insertions;
        --j;
        break;
    }
  }
  return counts;
}

}  // namespace fmp
