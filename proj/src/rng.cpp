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
#include "fmp/rng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "fmp/hashing.hpp"

namespace fmp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::derive(std::string_view tag) const {
  char bytes[sizeof(std::uint64_t)];
  std::memcpy(bytes, &seed_, sizeof(bytes));
  std::uint64_t mixed = fnv1a64(tag, fnv1a64({bytes, sizeof(bytes)}));
  splitmix64(mixed);
  return Rng(splitmix64(mixed));
}

double Rng::uniform01() {
  // 53 random mantissa bits; [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_int: n must be positive");
  }
  // Rejection sampling against the largest multiple of n that fits in 2^64.
  const std::uint64_t residue = (UINT64_MAX % n + 1) % n;
  const std::uint64_t limit = UINT64_MAX - residue;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

double Rng::normal(double mean, double stddev) {
  // Box-Muller; the sine mate of the pair is discarded.
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::laplace(double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("laplace: scale must be positive");
  }
  // Inverse CDF; redraw on the zero-measure boundary point.
  for (;;) {
    const double u = uniform01() - 0.5;
    const double t = 1.0 - 2.0 * std::fabs(u);
    if (t > 0.0) {
      return (u >= 0.0 ? -scale : scale) * std::log(t);
    }
  }
}

}  // namespace fmp
