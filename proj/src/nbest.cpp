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
#include "fmp/nbest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "fmp/vocab.hpp"

namespace fmp {

NBestList NBestList::from_scored(
    std::string utterance_id,
    std::vector<std::pair<std::vector<std::string>, double>> scored) {
  NBestList list;
  list.utterance_id = std::move(utterance_id);
  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scored[a].second > scored[b].second;
                   });
  list.hypotheses.reserve(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    Hypothesis hyp;
    hyp.tokens = std::move(scored[order[i]].first);
    hyp.first_pass_score = scored[order[i]].second;
    hyp.rank = static_cast<int>(i) + 1;
    list.hypotheses.push_back(std::move(hyp));
  }
  list.validate();
  return list;
}

void NBestList::validate() const {
  if (hypotheses.empty()) {
    throw std::invalid_argument("n-best list must be non-empty: " +
                                utterance_id);
  }
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const Hypothesis& hyp = hypotheses[i];
    if (hyp.rank != static_cast<int>(i) + 1) {
      throw std::invalid_argument("n-best ranks must be 1..N without gaps: " +
                                  utterance_id);
    }
    if (hyp.tokens.empty()) {
      throw std::invalid_argument("hypothesis tokens must be non-empty: " +
                                  utterance_id);
    }
    if (i > 0 &&
        hyp.first_pass_score > hypotheses[i - 1].first_pass_score) {
      throw std::invalid_argument(
          "hypotheses must be sorted by descending score: " + utterance_id);
    }
  }
}

std::vector<UtteranceRecord> read_fleet_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open fleet file: " + path);
  }
  std::vector<UtteranceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
    try {
      UtteranceRecord rec;
      rec.utterance_id = j.at("utterance_id").get<std::string>();
      rec.client_id = j.at("client_id").get<std::string>();
      rec.seq = j.at("seq").get<int>();
      rec.reference = tokenize(j.at("reference").get<std::string>());
      std::vector<std::pair<std::vector<std::string>, double>> scored;
      for (const auto& h : j.at("nbest")) {
        scored.emplace_back(tokenize(h.at("text").get<std::string>()),
                            h.at("score").get<double>());
      }
      rec.nbest = NBestList::from_scored(rec.utterance_id, std::move(scored));
      records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return records;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

void write_fleet_jsonl(const std::string& path,
                       const std::vector<UtteranceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write fleet file: " + path);
  }
  for (const UtteranceRecord& rec : records) {
    nlohmann::json j;
    j["utterance_id"] = rec.utterance_id;
    j["client_id"] = rec.client_id;
    j["seq"] = rec.seq;
    j["reference"] = join_tokens(rec.reference);
    nlohmann::json nbest = nlohmann::json::array();
    for (const Hypothesis& hyp : rec.nbest.hypotheses) {
      nbest.push_back({{"text", join_tokens(hyp.tokens)},
                       {"score", hyp.first_pass_score}});
    }
    j["nbest"] = std::move(nbest);
    out << j.dump() << "\n";
  }
  if (!out) {
    throw std::runtime_error("failed writing fleet file: " + path);
  }
}

Fleet group_by_client(std::vector<UtteranceRecord> records) {
  Fleet fleet;
  for (UtteranceRecord& rec : records) {
    fleet[rec.client_id].push_back(std::move(rec));
  }
  for (auto& [client_id, recs] : fleet) {
    std::sort(recs.begin(), recs.end(),
              [](const UtteranceRecord& a, const UtteranceRecord& b) {
                return a.seq < b.seq;
              });
    std::set<int> seen;
    for (const UtteranceRecord& rec : recs) {
      if (!seen.insert(rec.seq).second) {
        throw std::invalid_argument("duplicate seq " + std::to_string(rec.seq) +
                                    " for client " + client_id);
      }
    }
  }
  return fleet;
}

}  // namespace fmp
