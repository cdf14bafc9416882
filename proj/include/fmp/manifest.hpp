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
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace fmp {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Reproducibility record written next to every run's outputs: the resolved
// config snapshot, fingerprints of all inputs and the run seed are enough to
// reproduce the outputs bit-identically.
struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;
  nlohmann::json sweep;  // null unless command == "sweep"

  struct InputFile {
    std::string path;
    std::string fnv64;  // hex fingerprint of the file contents
  };
  std::map<std::string, InputFile> inputs;  // role -> file
  std::vector<std::string> outputs;         // paths relative to the manifest

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);

  // Recomputes each input fingerprint and throws on drift.
  void verify_inputs() const;
};

RunManifest::InputFile fingerprint_file(const std::string& path);

}  // namespace fmp
