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
#include "fmp/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "fmp/client.hpp"

namespace fmp {

void SimulationConfig::validate() const {
  if (rounds < 1) {
    throw std::invalid_argument("rounds must be at least 1");
  }
  params.validate();
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  rescore.validate();
  dp.validate();
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in (0, 1]");
  }
  if (!(smoothing_k > 0.0)) {
    throw std::invalid_argument("smoothing_k must be positive");
  }
  if (threads < 1) {
    throw std::invalid_argument("threads must be at least 1");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> partition_round_ranges(
    std::size_t n, int rounds) {
  if (rounds < 1) {
    throw std::invalid_argument("rounds must be at least 1");
  }
  const std::size_t groups = static_cast<std::size_t>(rounds) + 1;
  if (n < groups) {
    throw std::invalid_argument("too few utterances to partition into " +
                                std::to_string(groups) + " groups");
  }
  const std::size_t base = n / groups;
  const std::size_t remainder = n % groups;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(groups);
  std::size_t begin = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = base + (g < remainder ? 1 : 0);
    ranges.emplace_back(begin, begin + size);
    begin += size;
  }
  return ranges;
}

std::vector<std::vector<const UtteranceRecord*>> partition_rounds(
    const std::vector<UtteranceRecord>& utterances, int rounds) {
  std::vector<std::vector<const UtteranceRecord*>> groups;
  for (const auto& [begin, end] :
       partition_round_ranges(utterances.size(), rounds)) {
    std::vector<const UtteranceRecord*> group;
    group.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      group.push_back(&utterances[i]);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

namespace {

struct ClientRoundOutput {
  ClientRoundResult fmp;
  std::vector<RescoreResult> baseline;
  WerCounts fmp_counts;
  WerCounts baseline_counts;
  int utterances = 0;
};

void run_clients_parallel(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) break;
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_trace_line(std::ostream& out, int round, const std::string& client,
                      const UtteranceRecord& record, const RescoreResult& fmp,
                      const RescoreResult& baseline) {
  nlohmann::json j;
  j["round"] = round;
  j["client_id"] = client;
  j["utterance_id"] = record.utterance_id;
  auto arm = [](const RescoreResult& r) {
    nlohmann::json out;
    out["selected_rank"] = r.selected_index + 1;
    nlohmann::json scores = nlohmann::json::array();
    for (const ScoredHypothesis& s : r.scores) {
      scores.push_back({{"rank", s.original_index + 1},
                        {"first_pass", s.first_pass},
                        {"lm", s.lm},
                        {"combined", s.combined}});
    }
    out["scores"] = std::move(scores);
    return out;
  };
  j["fmp"] = arm(fmp);
  j["baseline"] = arm(baseline);
  out << j.dump() << "\n";
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config,
                                const Fleet& fleet, const BackoffNgramLm& base,
                                const UnigramDistribution& u,
                                std::ostream* trace_out) {
  config.validate();
  if (fleet.empty()) {
    throw std::invalid_argument("fleet has no clients");
  }
  if (u.size() != base.vocab().size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }

  const int T = config.rounds;
  std::vector<std::string> client_ids;
  std::vector<const std::vector<UtteranceRecord>*> streams;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (const auto& [client_id, records] : fleet) {
    if (records.size() < static_cast<std::size_t>(T) + 1) {
      throw std::invalid_argument("client " + client_id + " has " +
                                  std::to_string(records.size()) +
                                  " utterances; needs at least " +
                                  std::to_string(T + 1));
    }
    client_ids.push_back(client_id);
    streams.push_back(&records);
    groups.push_back(partition_round_ranges(records.size(), T));
  }
  const std::size_t n_clients = client_ids.size();

  std::vector<ClientState> states;
  states.reserve(n_clients);
  for (const std::string& client_id : client_ids) {
    states.emplace_back(client_id, base);
  }

  const AdaptedLm baseline_lm = AdaptedLm::identity(base);
  const std::uint64_t vocab_hash = base.vocab_hash();

  ServerState server;
  server.dp = config.dp;
  if (server.dp.enabled && server.dp.seed == 0) {
    server.dp.seed = Rng(config.seed).derive("dp-noise").seed();
  }
  Rng dp_rng(server.dp.seed);
  Rng sample_rng = Rng(config.seed).derive("client-sampling");

  SimulationResult result;
  for (int t = 0; t <= T; ++t) {
    std::vector<ClientRoundOutput> outputs(n_clients);
    const UnigramDistribution* q_global =
        t == 0 ? nullptr : &server.q_global;

    run_clients_parallel(n_clients, config.threads, [&](std::size_t i) {
      const auto [begin, end] = groups[i][static_cast<std::size_t>(t)];
      const std::vector<UtteranceRecord>& records = *streams[i];
      std::vector<const NBestList*> lists;
      lists.reserve(end - begin);
      for (std::size_t r = begin; r < end; ++r) {
        lists.push_back(&records[r].nbest);
      }

      ClientRoundOutput& out = outputs[i];
      out.fmp = client_round(states[i], q_global, lists, config.params,
                             config.sigma, config.smoothing_k, config.rescore,
                             base, u);
      out.utterances = static_cast<int>(lists.size());
      out.baseline.reserve(lists.size());
      for (std::size_t r = begin; r < end; ++r) {
        const UtteranceRecord& record = records[r];
        const RescoreResult baseline_res =
            rescore_nbest(record.nbest, baseline_lm, config.rescore);
        const std::size_t utt = r - begin;
        out.fmp_counts +=
            wer(record.reference,
                record.nbest.hypotheses[out.fmp.selected[utt]].tokens);
        out.baseline_counts +=
            wer(record.reference,
                record.nbest.hypotheses[baseline_res.selected_index].tokens);
        out.baseline.push_back(baseline_res);
      }
    });

    // Merge in client order so results are independent of thread count.
    RoundMetrics metrics;
    metrics.round = t;
    WerCounts fmp_counts;
    WerCounts baseline_counts;
    std::vector<UploadRecord> wire;
    wire.reserve(n_clients);
    const UnigramDistribution* q_global_prev =
        t == 0 ? nullptr : &server.q_global;
    for (std::size_t i = 0; i < n_clients; ++i) {
      const ClientRoundOutput& out = outputs[i];
      fmp_counts += out.fmp_counts;
      baseline_counts += out.baseline_counts;
      metrics.utterances += out.utterances;
      ClientUpload upload{client_ids[i], out.fmp.q, out.fmp.c};
      wire.push_back(encode_upload(
          upload, t, vocab_hash,
          config.upload_deltas ? q_global_prev : nullptr));
      if (trace_out != nullptr) {
        const auto [begin, end] = groups[i][static_cast<std::size_t>(t)];
        for (std::size_t r = begin; r < end; ++r) {
          write_trace_line(*trace_out, t, client_ids[i], (*streams[i])[r],
                           out.fmp.rescored[r - begin],
                           out.baseline[r - begin]);
        }
      }
    }

    const std::vector<std::string> sampled =
        sample_clients(client_ids, config.sample_fraction, sample_rng);
    const std::set<std::string> sampled_set(sampled.begin(), sampled.end());
    std::vector<ClientUpload> uploads;
    uploads.reserve(sampled.size());
    for (std::size_t i = 0; i < n_clients; ++i) {
      if (!sampled_set.contains(client_ids[i])) continue;
      ClientUpload upload =
          decode_upload(wire[i], vocab_hash, q_global_prev);
      if (upload.c > 0.0) {
        uploads.push_back(std::move(upload));
      }
    }
    server.aggregate(uploads, dp_rng);

    metrics.wer_fmp = fmp_counts.wer();
    metrics.wer_baseline = baseline_counts.wer();
    metrics.words = fmp_counts.reference_words;
    metrics.substitutions = fmp_counts.substitutions;
    metrics.insertions = fmp_counts.insertions;
    metrics.deletions = fmp_counts.deletions;
    result.rounds.push_back(metrics);
    result.fmp_total += fmp_counts;
    result.baseline_total += baseline_counts;
  }
  return result;
}

std::string format_double_shortest(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw std::runtime_error("failed to format double");
  }
  return std::string(buffer, ptr);
}

std::string metrics_csv(const SimulationResult& result) {
  std::string out = "round,wer_fmp,wer_baseline,sub,ins,del,words\n";
  for (const RoundMetrics& m : result.rounds) {
    out += std::to_string(m.round);
    out += ',';
    out += format_double_shortest(m.wer_fmp);
    out += ',';
    out += format_double_shortest(m.wer_baseline);
    out += ',';
    out += std::to_string(m.substitutions);
    out += ',';
    out += std::to_string(m.insertions);
    out += ',';
    out += std::to_string(m.deletions);
    out += ',';
    out += std::to_string(m.words);
    out += '\n';
  }
  return out;
}

void write_metrics_csv(const std::string& path,
                       const SimulationResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write metrics file: " + path);
  }
  out << metrics_csv(result);
  if (!out) {
    throw std::runtime_error("failed writing metrics file: " + path);
  }
}

}  // namespace fmp
