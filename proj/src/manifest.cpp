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
#include "fmp/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "fmp/hashing.hpp"

namespace fmp {

void RunManifest::save(const std::string& path) const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["sweep"] = sweep;
  nlohmann::json inputs_json = nlohmann::json::object();
  for (const auto& [role, file] : inputs) {
    inputs_json[role] = {{"path", file.path}, {"fnv64", file.fnv64}};
  }
  j["inputs"] = std::move(inputs_json);
  j["outputs"] = outputs;

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest: " + path);
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("failed writing manifest: " + path);
  }
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open manifest: " + path);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  RunManifest manifest;
  manifest.tool_version = j.at("tool_version").get<std::string>();
  manifest.command = j.at("command").get<std::string>();
  manifest.seed = j.at("seed").get<std::uint64_t>();
  manifest.config = j.at("config");
  manifest.sweep = j.value("sweep", nlohmann::json());
  for (const auto& [role, file] : j.at("inputs").items()) {
    manifest.inputs[role] = {file.at("path").get<std::string>(),
                             file.at("fnv64").get<std::string>()};
  }
  manifest.outputs = j.at("outputs").get<std::vector<std::string>>();
  return manifest;
}

void RunManifest::verify_inputs() const {
  for (const auto& [role, file] : inputs) {
    const std::string current = to_hex(file_fnv1a64(file.path));
    if (current != file.fnv64) {
      throw std::runtime_error("input '" + role + "' (" + file.path +
                               ") changed since the manifest was written");
    }
  }
}

RunManifest::InputFile fingerprint_file(const std::string& path) {
  return {path, to_hex(file_fnv1a64(path))};
}

}  // namespace fmp
