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

#include <string>
#include <vector>

namespace fmp {

struct WerCounts {
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int reference_words = 0;

  int errors() const { return substitutions + insertions + deletions; }
  double wer() const {
    return static_cast<double>(errors()) /
           static_cast<double>(reference_words);
  }

  WerCounts& operator+=(const WerCounts& other);
};

// Levenshtein alignment with unit costs. Deterministic: on cost ties the
// traceback prefers substitution/match over deletion over insertion. The
// reference must be non-empty.
WerCounts wer(const std::vector<std::string>& reference,
              const std::vector<std::string>& hypothesis);

}  // namespace fmp
