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
#include "fmp/server.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "fmp/hashing.hpp"

namespace fmp {

namespace {

constexpr double kClampFloorScale = 1e-12;
constexpr int kMaxNoiseRetries = 100;

// Pools weighted counts sum_i c_i q_i(w); returns the pooled vector and the
// total weight sum_i c_i. Zero-weight uploads are skipped.
std::pair<std::vector<double>, double> pool_uploads(
    const std::vector<ClientUpload>& uploads) {
  std::size_t size = 0;
  for (const ClientUpload& upload : uploads) {
    if (upload.c < 0.0) {
      throw std::invalid_argument("negative upload weight from " +
                                  upload.client_id);
    }
    if (upload.c == 0.0) {
      continue;
    }
    if (size == 0) {
      size = upload.q.size();
    } else if (upload.q.size() != size) {
      throw std::invalid_argument("vocabulary mismatch");
    }
  }
  if (size == 0) {
    throw std::invalid_argument("no client mass");
  }
  std::vector<double> pooled(size, 0.0);
  double total = 0.0;
  for (const ClientUpload& upload : uploads) {
    if (upload.c == 0.0) {
      continue;
    }
    for (std::size_t w = 0; w < size; ++w) {
      pooled[w] += upload.c * upload.q.prob(w);
    }
    total += upload.c;
  }
  return {std::move(pooled), total};
}

// Clamp-and-normalize shared by the plain and randomized paths, so that a
// zero noise vector reduces bit-exactly to the plain average.
UnigramDistribution normalize_pooled(std::vector<double> pooled,
                                     double denominator) {
  const double floor = kClampFloorScale * denominator;
  for (double& v : pooled) {
    v = std::max(v, floor);
  }
  const double sum = std::accumulate(pooled.begin(), pooled.end(), 0.0);
  for (double& v : pooled) {
    v /= sum;
  }
  return UnigramDistribution(std::move(pooled));
}

}  // namespace

void DpConfig::validate() const {
  if (enabled && !(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

UnigramDistribution federated_average(
    const std::vector<ClientUpload>& uploads) {
  // With a single contributing upload the weight cancels exactly.
  const ClientUpload* only = nullptr;
  for (const ClientUpload& upload : uploads) {
    if (upload.c > 0.0) {
      if (only != nullptr) {
        only = nullptr;
        break;
      }
      only = &upload;
    }
  }
  if (only != nullptr) {
    return only->q;
  }
  auto [pooled, total] = pool_uploads(uploads);
  return normalize_pooled(std::move(pooled), total);
}

UnigramDistribution dp_federated_average_with_noise(
    const std::vector<ClientUpload>& uploads,
    const std::vector<double>& noise) {
  auto [pooled, total] = pool_uploads(uploads);
  if (noise.size() != pooled.size()) {
    throw std::invalid_argument("noise vector size mismatch");
  }
  // A zero noise vector reduces the randomized rule to plain averaging.
  if (std::all_of(noise.begin(), noise.end(),
                  [](double r) { return r == 0.0; })) {
    return federated_average(uploads);
  }
  double denominator = total;
  for (std::size_t w = 0; w < pooled.size(); ++w) {
    pooled[w] += noise[w];
    denominator += noise[w];
  }
  if (!(denominator > 0.0)) {
    throw std::invalid_argument("DP aggregation degenerate");
  }
  return normalize_pooled(std::move(pooled), denominator);
}

UnigramDistribution dp_federated_average(
    const std::vector<ClientUpload>& uploads, const DpConfig& dp, Rng& rng) {
  dp.validate();
  if (!dp.enabled) {
    throw std::invalid_argument("dp_federated_average requires dp.enabled");
  }
  auto [pooled, total] = pool_uploads(uploads);
  const double scale = 1.0 / dp.epsilon;

  for (int attempt = 0; attempt < kMaxNoiseRetries; ++attempt) {
    std::vector<double> noisy = pooled;
    double denominator = total;
    for (double& v : noisy) {
      const double r = rng.laplace(scale);
      v += r;
      denominator += r;
    }
    if (denominator > 0.0) {
      return normalize_pooled(std::move(noisy), denominator);
    }
  }
  throw std::runtime_error("DP aggregation degenerate");
}

std::vector<std::string> sample_clients(const std::vector<std::string>& ids,
                                        double fraction, Rng& rng) {
  if (ids.empty()) {
    throw std::invalid_argument("no clients to sample");
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in (0, 1]");
  }
  const std::size_t n = ids.size();
  const std::size_t m = std::min<std::size_t>(
      n, static_cast<std::size_t>(
             std::ceil(fraction * static_cast<double>(n))));

  // Partial Fisher-Yates, then restore original relative order.
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t pick =
        j + static_cast<std::size_t>(rng.uniform_int(n - j));
    std::swap(indices[j], indices[pick]);
  }
  indices.resize(m);
  std::sort(indices.begin(), indices.end());

  std::vector<std::string> sampled;
  sampled.reserve(m);
  for (std::size_t idx : indices) {
    sampled.push_back(ids[idx]);
  }
  return sampled;
}

std::vector<double> compute_delta(const UnigramDistribution& q_new,
                                  const UnigramDistribution& q_old) {
  if (q_new.size() != q_old.size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  std::vector<double> delta(q_new.size());
  for (std::size_t w = 0; w < delta.size(); ++w) {
    delta[w] = q_new.prob(w) - q_old.prob(w);
  }
  return delta;
}

UnigramDistribution apply_delta(const UnigramDistribution& q_old,
                                const std::vector<double>& delta) {
  if (q_old.size() != delta.size()) {
    throw std::invalid_argument("vocabulary mismatch");
  }
  std::vector<double> probs(q_old.size());
  for (std::size_t w = 0; w < probs.size(); ++w) {
    probs[w] = q_old.prob(w) + delta[w];
  }
  return UnigramDistribution(std::move(probs));
}

std::string upload_record_to_json(const UploadRecord& record) {
  nlohmann::json j;
  j["version"] = record.version;
  j["client_id"] = record.client_id;
  j["round"] = record.round;
  j["c"] = record.c;
  j["vocab_hash"] = record.vocab_hash;
  if (record.q.has_value()) {
    j["q"] = *record.q;
  }
  if (record.delta.has_value()) {
    j["delta"] = *record.delta;
  }
  return j.dump();
}

UploadRecord upload_record_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  UploadRecord record;
  record.version = j.at("version").get<int>();
  if (record.version != 1) {
    throw std::runtime_error("unsupported upload record version");
  }
  record.client_id = j.at("client_id").get<std::string>();
  record.round = j.at("round").get<int>();
  record.c = j.at("c").get<double>();
  record.vocab_hash = j.at("vocab_hash").get<std::string>();
  if (j.contains("q")) {
    record.q = j.at("q").get<std::vector<double>>();
  }
  if (j.contains("delta")) {
    record.delta = j.at("delta").get<std::vector<double>>();
  }
  if (record.q.has_value() == record.delta.has_value()) {
    throw std::runtime_error(
        "upload record must carry exactly one of q / delta");
  }
  return record;
}

UploadRecord encode_upload(const ClientUpload& upload, int round,
                           std::uint64_t vocab_hash,
                           const UnigramDistribution* q_global_prev) {
  UploadRecord record;
  record.client_id = upload.client_id;
  record.round = round;
  record.c = upload.c;
  record.vocab_hash = to_hex(vocab_hash);
  if (q_global_prev != nullptr) {
    record.delta = compute_delta(upload.q, *q_global_prev);
  } else {
    record.q = upload.q.probs();
  }
  return record;
}

ClientUpload decode_upload(const UploadRecord& record,
                           std::uint64_t expected_vocab_hash,
                           const UnigramDistribution* q_global_prev) {
  if (record.vocab_hash != to_hex(expected_vocab_hash)) {
    throw std::runtime_error("vocab hash mismatch in upload from " +
                             record.client_id);
  }
  ClientUpload upload;
  upload.client_id = record.client_id;
  upload.c = record.c;
  if (record.q.has_value()) {
    upload.q = UnigramDistribution(*record.q);
  } else if (record.delta.has_value()) {
    if (q_global_prev == nullptr) {
      throw std::runtime_error(
          "delta upload without a previous global distribution");
    }
    upload.q = apply_delta(*q_global_prev, *record.delta);
  } else {
    throw std::runtime_error("upload record carries neither q nor delta");
  }
  return upload;
}

void ServerState::aggregate(const std::vector<ClientUpload>& uploads,
                            Rng& dp_rng) {
  q_global = dp.enabled ? dp_federated_average(uploads, dp, dp_rng)
                        : federated_average(uploads);
  ++round;
}

}  // namespace fmp
