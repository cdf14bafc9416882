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
#include <iostream>

#include "CLI11.hpp"

#include "fmp/commands.hpp"
#include "fmp/manifest.hpp"

namespace {

// 0 success, 1 usage error, 2 data/validation error.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"federated marginal personalization simulator"};
  app.set_version_flag("--version", std::string(fmp::kToolVersion));
  app.require_subcommand(1);

  fmp::TrainLmOptions train;
  CLI::App* train_cmd = app.add_subcommand(
      "train-lm", "train the background n-gram LM and unigram artifact");
  train_cmd->add_option("--corpus", train.corpus_path, "corpus text file")
      ->required();
  train_cmd->add_option("--order", train.order, "n-gram order (1..5)");
  train_cmd->add_option("--min-count", train.min_count,
                        "vocabulary count threshold");
  train_cmd->add_option("--smoothing-k", train.smoothing_k,
                        "additive smoothing for the background unigram");
  train_cmd->add_option("--out", train.out_path, "output artifact path")
      ->required();

  fmp::GenFleetOptions gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-fleet", "generate a synthetic fleet and background corpus");
  gen_cmd->add_option("--spec", gen.spec_path, "fleet spec JSON file")
      ->required();
  gen_cmd->add_option("--out-fleet", gen.out_fleet, "output fleet JSONL path")
      ->required();
  gen_cmd
      ->add_option("--out-corpus", gen.out_corpus,
                   "output background corpus path")
      ->required();
  std::uint64_t gen_seed = 0;
  CLI::Option* gen_seed_opt =
      gen_cmd->add_option("--seed", gen_seed, "override the spec seed");

  fmp::RunSimOptions run;
  CLI::App* run_cmd =
      app.add_subcommand("run-sim", "run one federated simulation");
  run_cmd->add_option("--config", run.config_path, "simulation config JSON")
      ->required();
  run_cmd->add_option("--fleet", run.fleet_path, "fleet JSONL file")
      ->required();
  run_cmd->add_option("--lm", run.lm_path, "LM artifact path")->required();
  run_cmd->add_option("--out", run.out_dir, "output directory")->required();
  std::uint64_t run_seed = 0;
  CLI::Option* run_seed_opt =
      run_cmd->add_option("--seed", run_seed, "override the config seed");
  double run_epsilon = 0.0;
  CLI::Option* run_eps_opt = run_cmd->add_option(
      "--dp-epsilon", run_epsilon,
      "override DP epsilon; values <= 0 disable DP");
  int run_rounds = 0;
  CLI::Option* run_rounds_opt =
      run_cmd->add_option("--rounds", run_rounds, "override the round count");
  int run_threads = 0;
  CLI::Option* run_threads_opt = run_cmd->add_option(
      "--threads", run_threads, "worker threads for the client loop");

  fmp::SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a hyper-parameter sweep");
  sweep_cmd->add_option("--config", sweep.config_path, "base config JSON")
      ->required();
  sweep_cmd->add_option("--sweep", sweep.sweep_path, "sweep spec JSON")
      ->required();
  sweep_cmd->add_option("--fleet", sweep.fleet_path, "fleet JSONL file")
      ->required();
  sweep_cmd->add_option("--lm", sweep.lm_path, "LM artifact path")->required();
  sweep_cmd->add_option("--out", sweep.out_dir, "output directory")
      ->required();
  std::uint64_t sweep_seed = 0;
  CLI::Option* sweep_seed_opt =
      sweep_cmd->add_option("--seed", sweep_seed, "override the config seed");
  int sweep_threads = 0;
  CLI::Option* sweep_threads_opt = sweep_cmd->add_option(
      "--threads", sweep_threads, "worker threads for the client loop");

  fmp::RerunOptions rerun;
  CLI::App* rerun_cmd =
      app.add_subcommand("rerun", "reproduce a run from its manifest");
  rerun_cmd
      ->add_option("--manifest", rerun.manifest_path, "manifest.json path")
      ->required();
  rerun_cmd->add_option("--out", rerun.out_dir, "output directory")
      ->required();

  fmp::ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand(
      "report", "render Markdown/SVG reports for a finished run");
  report_cmd->add_option("--run", report.run_dir, "run output directory")
      ->required();
  report_cmd->add_option("--out", report.out_dir, "report output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*train_cmd) {
      fmp::cmd_train_lm(train, std::cout);
    } else if (*gen_cmd) {
      if (*gen_seed_opt) gen.seed = gen_seed;
      fmp::cmd_gen_fleet(gen, std::cout);
    } else if (*run_cmd) {
      if (*run_seed_opt) run.seed = run_seed;
      if (*run_eps_opt) run.dp_epsilon = run_epsilon;
      if (*run_rounds_opt) run.rounds = run_rounds;
      if (*run_threads_opt) run.threads = run_threads;
      fmp::cmd_run_sim(run, std::cout);
    } else if (*sweep_cmd) {
      if (*sweep_seed_opt) sweep.seed = sweep_seed;
      if (*sweep_threads_opt) sweep.threads = sweep_threads;
      fmp::cmd_sweep(sweep, std::cout);
    } else if (*rerun_cmd) {
      fmp::cmd_rerun(rerun, std::cout);
    } else if (*report_cmd) {
      fmp::cmd_report(report, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
