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
#include "fmp/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "fmp/config.hpp"
#include "fmp/hashing.hpp"
#include "fmp/manifest.hpp"
#include "fmp/ngram_lm.hpp"
#include "fmp/report.hpp"
#include "fmp/simulation.hpp"
#include "fmp/synthetic.hpp"

namespace fmp {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + path + ": " +
                             ec.message());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing file: " + path);
  }
}

nlohmann::json round_metrics_json(const SimulationResult& result) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const RoundMetrics& m : result.rounds) {
    rounds.push_back({{"round", m.round},
                      {"wer_fmp", m.wer_fmp},
                      {"wer_baseline", m.wer_baseline},
                      {"utterances", m.utterances},
                      {"words", m.words},
                      {"substitutions", m.substitutions},
                      {"insertions", m.insertions},
                      {"deletions", m.deletions}});
  }
  return rounds;
}

nlohmann::json summary_json(const SimulationConfig& config,
                            const SimulationResult& result) {
  nlohmann::json j;
  j["tool_version"] = std::string(kToolVersion);
  j["config"] = simulation_config_to_json(config);
  j["rounds"] = round_metrics_json(result);
  const double wer_fmp = result.wer_fmp();
  const double wer_baseline = result.wer_baseline();
  j["aggregate"] = {
      {"wer_fmp", wer_fmp},
      {"wer_baseline", wer_baseline},
      {"relative_reduction",
       wer_baseline > 0.0 ? (wer_baseline - wer_fmp) / wer_baseline : 0.0},
      {"words", result.fmp_total.reference_words},
      {"substitutions", result.fmp_total.substitutions},
      {"insertions", result.fmp_total.insertions},
      {"deletions", result.fmp_total.deletions}};
  return j;
}

SimulationConfig apply_sim_overrides(SimulationConfig config,
                                     const std::optional<std::uint64_t>& seed,
                                     const std::optional<double>& dp_epsilon,
                                     const std::optional<int>& rounds,
                                     const std::optional<int>& threads) {
  if (seed.has_value()) config.seed = *seed;
  if (dp_epsilon.has_value()) {
    if (*dp_epsilon > 0.0) {
      config.dp.enabled = true;
      config.dp.epsilon = *dp_epsilon;
    } else {
      config.dp.enabled = false;
    }
  }
  if (rounds.has_value()) config.rounds = *rounds;
  if (threads.has_value()) config.threads = *threads;
  config.validate();
  return config;
}

struct LoadedRunInputs {
  Fleet fleet;
  LmArtifact artifact;
};

LoadedRunInputs load_run_inputs(const std::string& fleet_path,
                                const std::string& lm_path) {
  LoadedRunInputs inputs;
  inputs.fleet = group_by_client(read_fleet_jsonl(fleet_path));
  inputs.artifact = LmArtifact::load(lm_path);
  return inputs;
}

void execute_run_sim(const SimulationConfig& config,
                     const std::string& fleet_path, const std::string& lm_path,
                     const std::string& out_dir, std::ostream& log) {
  const LoadedRunInputs inputs = load_run_inputs(fleet_path, lm_path);
  ensure_dir(out_dir);

  std::ofstream trace;
  std::ostream* trace_out = nullptr;
  if (config.emit_traces) {
    trace.open(out_dir + "/rescore_trace.jsonl", std::ios::binary);
    if (!trace) {
      throw std::runtime_error("cannot write trace file in " + out_dir);
    }
    trace_out = &trace;
  }

  const SimulationResult result =
      run_simulation(config, inputs.fleet, inputs.artifact.lm,
                     inputs.artifact.background_unigram, trace_out);

  write_metrics_csv(out_dir + "/metrics.csv", result);
  write_text_file(out_dir + "/summary.json",
                  summary_json(config, result).dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "run-sim";
  manifest.seed = config.seed;
  manifest.config = simulation_config_to_json(config);
  manifest.inputs["fleet"] = fingerprint_file(fleet_path);
  manifest.inputs["lm"] = fingerprint_file(lm_path);
  manifest.outputs = {"metrics.csv", "summary.json"};
  if (config.emit_traces) {
    manifest.outputs.push_back("rescore_trace.jsonl");
  }
  manifest.save(out_dir + "/manifest.json");

  for (const RoundMetrics& m : result.rounds) {
    log << "round " << m.round << ": wer_fmp="
        << format_double_shortest(m.wer_fmp)
        << " wer_baseline=" << format_double_shortest(m.wer_baseline) << "\n";
  }
  log << "aggregate: wer_fmp=" << format_double_shortest(result.wer_fmp())
      << " wer_baseline=" << format_double_shortest(result.wer_baseline())
      << "\n";
}

std::string sweep_csv(const std::vector<SweepPoint>& points,
                      const std::vector<SimulationResult>& results) {
  std::string out =
      "alpha,beta,sigma,lambda,epsilon,rounds,wer_fmp,wer_baseline,"
      "rel_reduction\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SimulationConfig& c = points[i].config;
    out += format_double_shortest(c.params.alpha);
    out += ',';
    out += format_double_shortest(c.params.beta);
    out += ',';
    out += format_double_shortest(c.sigma);
    out += ',';
    out += format_double_shortest(c.params.lambda);
    out += ',';
    out += c.dp.enabled ? format_double_shortest(c.dp.epsilon) : "";
    out += ',';
    out += std::to_string(c.rounds);
    out += ',';
    const double wer_fmp = results[i].wer_fmp();
    const double wer_baseline = results[i].wer_baseline();
    out += format_double_shortest(wer_fmp);
    out += ',';
    out += format_double_shortest(wer_baseline);
    out += ',';
    out += format_double_shortest(
        wer_baseline > 0.0 ? (wer_baseline - wer_fmp) / wer_baseline : 0.0);
    out += '\n';
  }
  return out;
}

void execute_sweep(const SimulationConfig& base_config,
                   const nlohmann::json& sweep_spec,
                   const std::string& fleet_path, const std::string& lm_path,
                   const std::string& out_dir, std::ostream& log) {
  const std::vector<SweepPoint> points = expand_sweep(base_config, sweep_spec);
  const LoadedRunInputs inputs = load_run_inputs(fleet_path, lm_path);
  ensure_dir(out_dir);

  std::vector<SimulationResult> results;
  results.reserve(points.size());
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepPoint& point : points) {
    const SimulationResult result =
        run_simulation(point.config, inputs.fleet, inputs.artifact.lm,
                       inputs.artifact.background_unigram);
    log << "sweep point " << point.settings.dump()
        << ": wer_fmp=" << format_double_shortest(result.wer_fmp())
        << " wer_baseline=" << format_double_shortest(result.wer_baseline())
        << "\n";
    nlohmann::json row;
    row["settings"] = point.settings;
    row["config"] = simulation_config_to_json(point.config);
    row["wer_fmp"] = result.wer_fmp();
    row["wer_baseline"] = result.wer_baseline();
    row["rounds"] = round_metrics_json(result);
    rows.push_back(std::move(row));
    results.push_back(result);
  }

  write_text_file(out_dir + "/sweep.csv", sweep_csv(points, results));
  nlohmann::json sweep_json;
  sweep_json["tool_version"] = std::string(kToolVersion);
  sweep_json["base_config"] = simulation_config_to_json(base_config);
  sweep_json["sweep"] = sweep_spec;
  sweep_json["points"] = std::move(rows);
  write_text_file(out_dir + "/sweep.json", sweep_json.dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.seed = base_config.seed;
  manifest.config = simulation_config_to_json(base_config);
  manifest.sweep = sweep_spec;
  manifest.inputs["fleet"] = fingerprint_file(fleet_path);
  manifest.inputs["lm"] = fingerprint_file(lm_path);
  manifest.outputs = {"sweep.csv", "sweep.json"};
  manifest.save(out_dir + "/manifest.json");
}

}  // namespace

void cmd_train_lm(const TrainLmOptions& options, std::ostream& log) {
  const Corpus corpus = load_corpus(options.corpus_path);
  if (corpus.empty()) {
    throw std::runtime_error("empty corpus: " + options.corpus_path);
  }
  const Vocabulary vocab =
      Vocabulary::build(corpus, static_cast<std::size_t>(options.min_count));

  LmArtifact artifact;
  artifact.lm = BackoffNgramLm::train(corpus, vocab, options.order);
  artifact.background_unigram =
      estimate_background_unigram(corpus, vocab, options.smoothing_k);
  artifact.smoothing_k = options.smoothing_k;
  artifact.save(options.out_path);

  // Held-out diagnostic: every 20th utterance is excluded from a scratch
  // model and scored by it.
  std::vector<std::size_t> held;
  for (std::size_t i = 19; i < corpus.utterances.size(); i += 20) {
    held.push_back(i);
  }
  if (held.empty() && corpus.utterances.size() >= 2) {
    held.push_back(corpus.utterances.size() - 1);
  }
  double perplexity = 0.0;
  if (held.empty()) {
    perplexity = artifact.lm.perplexity(corpus);
  } else {
    Corpus train_split;
    Corpus held_split;
    std::size_t next_held = 0;
    for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
      if (next_held < held.size() && held[next_held] == i) {
        held_split.utterances.push_back(corpus.utterances[i]);
        held_split.token_count += corpus.utterances[i].size();
        ++next_held;
      } else {
        train_split.utterances.push_back(corpus.utterances[i]);
        train_split.token_count += corpus.utterances[i].size();
      }
    }
    const BackoffNgramLm eval_lm =
        BackoffNgramLm::train(train_split, vocab, options.order);
    perplexity = eval_lm.perplexity(held_split);
  }

  log << "vocabulary size: " << vocab.size() << "\n";
  log << "held-out perplexity: " << format_double_shortest(perplexity) << "\n";
  log << "wrote " << options.out_path << "\n";
}

void cmd_gen_fleet(const GenFleetOptions& options, std::ostream& log) {
  FleetSpec spec = load_fleet_spec(options.spec_path);
  if (options.seed.has_value()) {
    spec.seed = *options.seed;
  }
  const GeneratedFleet fleet = generate_fleet(spec);

  std::string corpus_text;
  for (const std::string& line : fleet.background_lines) {
    corpus_text += line;
    corpus_text += '\n';
  }
  write_text_file(options.out_corpus, corpus_text);
  write_fleet_jsonl(options.out_fleet, fleet.records);

  log << "clients: " << spec.clients << "\n";
  log << "utterances: " << fleet.records.size() << "\n";
  log << "background lines: " << fleet.background_lines.size() << "\n";
  log << "wrote " << options.out_fleet << " and " << options.out_corpus
      << "\n";
}

void cmd_run_sim(const RunSimOptions& options, std::ostream& log) {
  const SimulationConfig config = apply_sim_overrides(
      load_simulation_config(options.config_path), options.seed,
      options.dp_epsilon, options.rounds, options.threads);
  execute_run_sim(config, options.fleet_path, options.lm_path, options.out_dir,
                  log);
}

void cmd_sweep(const SweepOptions& options, std::ostream& log) {
  const SimulationConfig config = apply_sim_overrides(
      load_simulation_config(options.config_path), options.seed, std::nullopt,
      std::nullopt, options.threads);
  const nlohmann::json sweep_spec = load_json_file(options.sweep_path);
  execute_sweep(config, sweep_spec, options.fleet_path, options.lm_path,
                options.out_dir, log);
}

void cmd_rerun(const RerunOptions& options, std::ostream& log) {
  const RunManifest manifest = RunManifest::load(options.manifest_path);
  manifest.verify_inputs();
  const SimulationConfig config =
      simulation_config_from_json(manifest.config);
  const std::string fleet_path = manifest.inputs.at("fleet").path;
  const std::string lm_path = manifest.inputs.at("lm").path;
  if (manifest.command == "run-sim") {
    execute_run_sim(config, fleet_path, lm_path, options.out_dir, log);
  } else if (manifest.command == "sweep") {
    execute_sweep(config, manifest.sweep, fleet_path, lm_path, options.out_dir,
                  log);
  } else {
    throw std::runtime_error("manifest command not rerunnable: " +
                             manifest.command);
  }
}

void cmd_report(const ReportOptions& options, std::ostream& log) {
  write_report(options.run_dir, options.out_dir);
  log << "wrote report to " << options.out_dir << "\n";
}

}  // namespace fmp
