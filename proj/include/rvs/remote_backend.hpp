#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "json.hpp"
#include "rvs/backend.hpp"

namespace rvs::backend {

struct RemoteOptions {
  std::string base_url;  // e.g. "http://127.0.0.1:8091"
  std::size_t max_in_flight = 8;
  int retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds timeout{30000};
};

/// HTTP+JSON client for the inference sidecar.
///
///   POST /v1/nli       {"premise","hypothesis"} -> {"entailment","neutral","contradiction"}
///   POST /v1/embed     {"text"}                 -> {"vector":[...],"dimension":n}
///   POST /v1/mask_fill {"text"}                 -> {"entries":[{"token","probability"}]}
///   GET  /v1/health                             -> service description
///
/// Connection failures and 5xx responses are retried `retries` times with
/// doubling backoff; 400 and 413 surface as RequestRejected immediately.
/// At most `max_in_flight` requests are outstanding at once.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteOptions options);
  ~RemoteBackend() override;

  NliScore nli(std::string_view premise, std::string_view hypothesis) const override;
  EmbeddingVector embed(std::string_view text) const override;
  MaskFillDistribution mask_fill(std::string_view prompt_with_mask) const override;
  std::string name() const override { return "remote"; }

  nlohmann::json health() const;
  const RemoteOptions& options() const { return options_; }

 private:
  nlohmann::json call(const std::string& method, const std::string& path,
                      const nlohmann::json* body) const;

  RemoteOptions options_;
  std::string host_;    // scheme://host[:port]
  std::string prefix_;  // path prefix without trailing slash
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
  mutable std::atomic<std::size_t> dimension_{0};
};

}  // namespace rvs::backend
