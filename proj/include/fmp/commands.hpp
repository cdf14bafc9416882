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
#include <optional>
#include <string>

namespace fmp {

// Command implementations shared by the CLI and the test suites. All commands
// are idempotent given identical inputs and seed; they throw on error.

struct TrainLmOptions {
  std::string corpus_path;
  int order = 3;
  int min_count = 1;
  double smoothing_k = 0.01;
  std::string out_path;
};
void cmd_train_lm(const TrainLmOptions& options, std::ostream& log);

struct GenFleetOptions {
  std::string spec_path;
  std::string out_fleet;
  std::string out_corpus;
  std::optional<std::uint64_t> seed;
};
void cmd_gen_fleet(const GenFleetOptions& options, std::ostream& log);

struct RunSimOptions {
  std::string config_path;
  std::string fleet_path;
  std::string lm_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dp_epsilon;  // <= 0 disables DP
  std::optional<int> rounds;
  std::optional<int> threads;
};
void cmd_run_sim(const RunSimOptions& options, std::ostream& log);

struct SweepOptions {
  std::string config_path;
  std::string sweep_path;
  std::string fleet_path;
  std::string lm_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};
void cmd_sweep(const SweepOptions& options, std::ostream& log);

struct RerunOptions {
  std::string manifest_path;
  std::string out_dir;
};
void cmd_rerun(const RerunOptions& options, std::ostream& log);

struct ReportOptions {
  std::string run_dir;
  std::string out_dir;
};
void cmd_report(const ReportOptions& options, std::ostream& log);

}  // namespace fmp
