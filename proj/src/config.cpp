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
#include "fmp/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace fmp {

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         const std::set<std::string>& known,
                         const std::string& where) {
  if (!j.is_object()) {
    throw std::invalid_argument(where + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_if_present(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

}  // namespace

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

SimulationConfig simulation_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"rounds", "lambda", "alpha", "beta", "sigma",
                       "lm_weight", "dp", "sample_fraction", "seed",
                       "smoothing_k", "threads", "upload_deltas",
                       "emit_traces"},
                      "simulation config");
  SimulationConfig config;
  read_if_present(j, "rounds", config.rounds);
  read_if_present(j, "lambda", config.params.lambda);
  read_if_present(j, "alpha", config.params.alpha);
  read_if_present(j, "beta", config.params.beta);
  read_if_present(j, "sigma", config.sigma);
  read_if_present(j, "lm_weight", config.rescore.lm_weight);
  read_if_present(j, "sample_fraction", config.sample_fraction);
  read_if_present(j, "seed", config.seed);
  read_if_present(j, "smoothing_k", config.smoothing_k);
  read_if_present(j, "threads", config.threads);
  read_if_present(j, "upload_deltas", config.upload_deltas);
  read_if_present(j, "emit_traces", config.emit_traces);
  if (j.contains("dp")) {
    const nlohmann::json& dp = j.at("dp");
    reject_unknown_keys(dp, {"enabled", "epsilon", "seed"}, "dp config");
    read_if_present(dp, "enabled", config.dp.enabled);
    read_if_present(dp, "epsilon", config.dp.epsilon);
    read_if_present(dp, "seed", config.dp.seed);
  }
  config.validate();
  return config;
}

nlohmann::json simulation_config_to_json(const SimulationConfig& config) {
  nlohmann::json j;
  j["rounds"] = config.rounds;
  j["lambda"] = config.params.lambda;
  j["alpha"] = config.params.alpha;
  j["beta"] = config.params.beta;
  j["sigma"] = config.sigma;
  j["lm_weight"] = config.rescore.lm_weight;
  j["sample_fraction"] = config.sample_fraction;
  j["seed"] = config.seed;
  j["smoothing_k"] = config.smoothing_k;
  j["threads"] = config.threads;
  j["upload_deltas"] = config.upload_deltas;
  j["emit_traces"] = config.emit_traces;
  j["dp"] = {{"enabled", config.dp.enabled},
             {"epsilon", config.dp.epsilon},
             {"seed", config.dp.seed}};
  return j;
}

SimulationConfig load_simulation_config(const std::string& path) {
  return simulation_config_from_json(load_json_file(path));
}

FleetSpec fleet_spec_from_json(const nlohmann::json& j) {
  reject_unknown_keys(
      j,
      {"clients", "utterances_per_client", "common_words",
       "topic_words_per_client", "trending_words", "topic_prob",
       "trending_prob", "min_tokens", "max_tokens", "zipf_exponent",
       "background_lines", "special_occurrences", "noise", "seed"},
      "fleet spec");
  FleetSpec spec;
  read_if_present(j, "clients", spec.clients);
  read_if_present(j, "utterances_per_client", spec.utterances_per_client);
  read_if_present(j, "common_words", spec.common_words);
  read_if_present(j, "topic_words_per_client", spec.topic_words_per_client);
  read_if_present(j, "trending_words", spec.trending_words);
  read_if_present(j, "topic_prob", spec.topic_prob);
  read_if_present(j, "trending_prob", spec.trending_prob);
  read_if_present(j, "min_tokens", spec.min_tokens);
  read_if_present(j, "max_tokens", spec.max_tokens);
  read_if_present(j, "zipf_exponent", spec.zipf_exponent);
  read_if_present(j, "background_lines", spec.background_lines);
  read_if_present(j, "special_occurrences", spec.special_occurrences);
  read_if_present(j, "seed", spec.seed);
  if (j.contains("noise")) {
    const nlohmann::json& noise = j.at("noise");
    reject_unknown_keys(noise,
                        {"sub_rate", "ins_rate", "del_rate", "nbest",
                         "confusion_bias", "score_per_token",
                         "score_edit_penalty", "score_noise_sd"},
                        "noise model");
    read_if_present(noise, "sub_rate", spec.noise.sub_rate);
    read_if_present(noise, "ins_rate", spec.noise.ins_rate);
    read_if_present(noise, "del_rate", spec.noise.del_rate);
    read_if_present(noise, "nbest", spec.noise.nbest_size);
    read_if_present(noise, "confusion_bias", spec.noise.confusion_bias);
    read_if_present(noise, "score_per_token", spec.noise.score_per_token);
    read_if_present(noise, "score_edit_penalty",
                    spec.noise.score_edit_penalty);
    read_if_present(noise, "score_noise_sd", spec.noise.score_noise_sd);
  }
  spec.validate();
  return spec;
}

nlohmann::json fleet_spec_to_json(const FleetSpec& spec) {
  nlohmann::json j;
  j["clients"] = spec.clients;
  j["utterances_per_client"] = spec.utterances_per_client;
  j["common_words"] = spec.common_words;
  j["topic_words_per_client"] = spec.topic_words_per_client;
  j["trending_words"] = spec.trending_words;
  j["topic_prob"] = spec.topic_prob;
  j["trending_prob"] = spec.trending_prob;
  j["min_tokens"] = spec.min_tokens;
  j["max_tokens"] = spec.max_tokens;
  j["zipf_exponent"] = spec.zipf_exponent;
  j["background_lines"] = spec.background_lines;
  j["special_occurrences"] = spec.special_occurrences;
  j["seed"] = spec.seed;
  j["noise"] = {{"sub_rate", spec.noise.sub_rate},
                {"ins_rate", spec.noise.ins_rate},
                {"del_rate", spec.noise.del_rate},
                {"nbest", spec.noise.nbest_size},
                {"confusion_bias", spec.noise.confusion_bias},
                {"score_per_token", spec.noise.score_per_token},
                {"score_edit_penalty", spec.noise.score_edit_penalty},
                {"score_noise_sd", spec.noise.score_noise_sd}};
  return j;
}

FleetSpec load_fleet_spec(const std::string& path) {
  return fleet_spec_from_json(load_json_file(path));
}

namespace {

const std::vector<std::string> kSweepAxes = {"alpha",  "beta",    "sigma",
                                             "lambda", "epsilon", "rounds"};

void apply_axis(SimulationConfig& config, nlohmann::json& settings,
                const std::string& axis, const nlohmann::json& value) {
  settings[axis] = value;
  if (axis == "alpha") {
    config.params.alpha = value.get<double>();
  } else if (axis == "beta") {
    config.params.beta = value.get<double>();
  } else if (axis == "sigma") {
    config.sigma = value.get<double>();
  } else if (axis == "lambda") {
    config.params.lambda = value.get<double>();
  } else if (axis == "rounds") {
    config.rounds = value.get<int>();
  } else if (axis == "epsilon") {
    if (value.is_null()) {
      config.dp.enabled = false;
    } else {
      config.dp.enabled = true;
      config.dp.epsilon = value.get<double>();
    }
  }
}

}  // namespace

std::vector<SweepPoint> expand_sweep(const SimulationConfig& base,
                                     const nlohmann::json& sweep) {
  std::set<std::string> known(kSweepAxes.begin(), kSweepAxes.end());
  known.insert("mode");
  reject_unknown_keys(sweep, known, "sweep spec");

  std::string mode = "grid";
  read_if_present(sweep, "mode", mode);
  if (mode != "grid" && mode != "paired") {
    throw std::invalid_argument("sweep mode must be 'grid' or 'paired'");
  }

  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  for (const std::string& axis : kSweepAxes) {
    if (!sweep.contains(axis)) continue;
    const nlohmann::json& values = sweep.at(axis);
    if (!values.is_array() || values.empty()) {
      throw std::invalid_argument("sweep axis '" + axis +
                                  "' must be a non-empty array");
    }
    axes.emplace_back(axis,
                      std::vector<nlohmann::json>(values.begin(), values.end()));
  }
  if (axes.empty()) {
    throw std::invalid_argument("sweep spec lists no axes");
  }

  std::vector<SweepPoint> points;
  if (mode == "paired") {
    const std::size_t length = axes.front().second.size();
    for (const auto& [axis, values] : axes) {
      if (values.size() != length) {
        throw std::invalid_argument(
            "paired sweep axes must have equal lengths");
      }
    }
    for (std::size_t i = 0; i < length; ++i) {
      SweepPoint point{nlohmann::json::object(), base};
      for (const auto& [axis, values] : axes) {
        apply_axis(point.config, point.settings, axis, values[i]);
      }
      points.push_back(std::move(point));
    }
  } else {
    points.push_back(SweepPoint{nlohmann::json::object(), base});
    for (const auto& [axis, values] : axes) {
      std::vector<SweepPoint> expanded;
      expanded.reserve(points.size() * values.size());
      for (const SweepPoint& point : points) {
        for (const nlohmann::json& value : values) {
          SweepPoint next = point;
          apply_axis(next.config, next.settings, axis, value);
          expanded.push_back(std::move(next));
        }
      }
      points = std::move(expanded);
    }
  }

  // Validate the whole grid before any point runs.
  for (const SweepPoint& point : points) {
    try {
      point.config.validate();
    } catch (const std::exception& e) {
      throw std::invalid_argument("invalid sweep point " +
                                  point.settings.dump() + ": " + e.what());
    }
  }
  return points;
}

}  // namespace fmp
