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
#include <random>
#include <string_view>

namespace fmp {

// One SplitMix64 step; used for seed mixing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. All variates are derived from raw mt19937_64
// output; the std::* distributions are implementation-defined and would break
// bit-reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent child stream identified by a tag. Derivation depends only on
  // this stream's seed and the tag, never on draw position.
  Rng derive(std::string_view tag) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();                          // [0, 1)
  std::uint64_t uniform_int(std::uint64_t n);  // [0, n), n > 0
  double normal(double mean = 0.0, double stddev = 1.0);
  double laplace(double scale);  // mean 0, variance 2*scale^2

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace fmp
