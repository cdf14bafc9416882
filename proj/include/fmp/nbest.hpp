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

#include <map>
#include <string>
#include <vector>

namespace fmp {

struct Hypothesis {
  std::vector<std::string> tokens;
  int rank = 1;  // 1 = best
  double first_pass_score = 0.0;
};

// Ranked hypotheses for one utterance. Ranks are exactly 1..N; hypotheses are
// ordered by descending first-pass score with input order breaking ties.
struct NBestList {
  std::string utterance_id;
  std::vector<Hypothesis> hypotheses;

  // Sorts by descending score (stable) and assigns ranks.
  static NBestList from_scored(
      std::string utterance_id,
      std::vector<std::pair<std::vector<std::string>, double>> scored);

  void validate() const;  // throws std::invalid_argument on violation
};

// One line of the fleet JSONL format.
struct UtteranceRecord {
  std::string utterance_id;
  std::string client_id;
  int seq = 0;  // temporal order within the client
  std::vector<std::string> reference;
  NBestList nbest;
};

// client id -> records ordered by seq.
using Fleet = std::map<std::string, std::vector<UtteranceRecord>>;

std::vector<UtteranceRecord> read_fleet_jsonl(const std::string& path);
void write_fleet_jsonl(const std::string& path,
                       const std::vector<UtteranceRecord>& records);

// Groups by client and sorts by seq; duplicate (client, seq) pairs are an
// error.
Fleet group_by_client(std::vector<UtteranceRecord> records);

}  // namespace fmp
