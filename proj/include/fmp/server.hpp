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
#include <optional>
#include <string>
#include <vector>

#include "fmp/rng.hpp"
#include "fmp/unigram.hpp"

namespace fmp {

struct DpConfig {
  bool enabled = false;
  double epsilon = 1.0;    // Laplace scale is 1/epsilon
  std::uint64_t seed = 0;  // noise stream seed

  void validate() const;  // epsilon > 0 when enabled
};

struct ClientUpload {
  std::string client_id;
  UnigramDistribution q;  // q_i
  double c = 0.0;         // pseudo-count weight c_i
};

// Weighted federated average q(w) = sum_i c_i q_i(w) / sum_i c_i. Uploads
// with c = 0 carry no weight and are skipped; if nothing remains the
// aggregate is undefined and an error is raised.
UnigramDistribution federated_average(const std::vector<ClientUpload>& uploads);

// Laplace-randomized federated average: adds per-word i.i.d. Laplace(1/eps)
// noise to the pooled weighted counts before normalizing. Negative noisy
// counts are clamped to a small positive floor and the vector renormalized
// (post-processing; does not affect the DP guarantee). If the noisy
// denominator is non-positive the noise is redrawn, up to 100 times.
UnigramDistribution dp_federated_average(const std::vector<ClientUpload>& uploads,
                                         const DpConfig& dp, Rng& rng);

// Deterministic-noise variant backing dp_federated_average; with an all-zero
// noise vector this reduces to federated_average exactly.
UnigramDistribution dp_federated_average_with_noise(
    const std::vector<ClientUpload>& uploads, const std::vector<double>& noise);

// Uniform sample without replacement of ceil(fraction * n) clients; the
// returned ids preserve their original relative order.
std::vector<std::string> sample_clients(const std::vector<std::string>& ids,
                                        double fraction, Rng& rng);

// Distribution deltas: apply_delta(q_old, compute_delta(q_new, q_old))
// recovers q_new within 1e-12 entrywise.
std::vector<double> compute_delta(const UnigramDistribution& q_new,
                                  const UnigramDistribution& q_old);
UnigramDistribution apply_delta(const UnigramDistribution& q_old,
                                const std::vector<double>& delta);

// Versioned upload record for the in-process bus and file replay. Exactly
// one of q / delta is present.
struct UploadRecord {
  int version = 1;
  std::string client_id;
  int round = 0;
  double c = 0.0;
  std::optional<std::vector<double>> q;
  std::optional<std::vector<double>> delta;
  std::string vocab_hash;  // hex fingerprint of the shared vocabulary
};

std::string upload_record_to_json(const UploadRecord& record);
UploadRecord upload_record_from_json(const std::string& text);

UploadRecord encode_upload(const ClientUpload& upload, int round,
                           std::uint64_t vocab_hash,
                           const UnigramDistribution* q_global_prev);

// Validates the vocab hash and resolves deltas against the previous global
// distribution. A mismatched hash is rejected.
ClientUpload decode_upload(const UploadRecord& record,
                           std::uint64_t expected_vocab_hash,
                           const UnigramDistribution* q_global_prev);

// Central aggregator state. Aggregation is a synchronization barrier: all
// uploads for a round are collected before the global update.
struct ServerState {
  int round = 0;
  UnigramDistribution q_global;
  DpConfig dp;

  // Computes the round's global unigram (DP or plain) and advances the
  // round counter.
  void aggregate(const std::vector<ClientUpload>& uploads, Rng& dp_rng);
};

}  // namespace fmp
