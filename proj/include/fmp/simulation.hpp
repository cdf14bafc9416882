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
#include <iosfwd>
#include <string>
#include <vector>

#include "fmp/adapt.hpp"
#include "fmp/nbest.hpp"
#include "fmp/rescore.hpp"
#include "fmp/server.hpp"
#include "fmp/wer.hpp"

namespace fmp {

struct SimulationConfig {
  int rounds = 5;  // T; utterances are partitioned into T+1 groups
  AdaptationParams params;
  double sigma = 5.0;
  RescoreConfig rescore;
  DpConfig dp;
  double sample_fraction = 1.0;
  std::uint64_t seed = 1;
  double smoothing_k = 0.01;
  int threads = 1;
  bool upload_deltas = false;
  bool emit_traces = false;

  void validate() const;
};

struct RoundMetrics {
  int round = 0;
  double wer_fmp = 0.0;
  double wer_baseline = 0.0;
  int utterances = 0;
  int words = 0;
  // Error breakdown of the FMP arm; wer_fmp == (sub+ins+del)/words.
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
};

struct SimulationResult {
  std::vector<RoundMetrics> rounds;
  WerCounts fmp_total;
  WerCounts baseline_total;

  double wer_fmp() const { return fmp_total.wer(); }
  double wer_baseline() const { return baseline_total.wer(); }
};

// Contiguous [begin, end) index ranges: T+1 groups with sizes differing by at
// most one, earlier groups taking the remainder.
std::vector<std::pair<std::size_t, std::size_t>> partition_round_ranges(
    std::size_t n, int rounds);

std::vector<std::vector<const UtteranceRecord*>> partition_rounds(
    const std::vector<UtteranceRecord>& utterances, int rounds);

// Full federated round loop over the fleet, with a paired baseline arm
// rescoring bit-identical inputs with the unadapted base LM. Deterministic
// given the config (including under DP and regardless of thread count).
// When trace_out is non-null, per-utterance rescoring traces are written to
// it as JSON Lines.
SimulationResult run_simulation(const SimulationConfig& config,
                                const Fleet& fleet, const BackoffNgramLm& base,
                                const UnigramDistribution& u,
                                std::ostream* trace_out = nullptr);

// "round,wer_fmp,wer_baseline,sub,ins,del,words" rows plus header.
std::string metrics_csv(const SimulationResult& result);
void write_metrics_csv(const std::string& path, const SimulationResult& result);

std::string format_double_shortest(double value);

}  // namespace fmp
