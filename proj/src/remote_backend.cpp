#include "rvs/remote_backend.hpp"

#include <cmath>
#include <thread>

#include "httplib.h"
#include "rvs/error.hpp"
#include "rvs/simd/kernels.hpp"

namespace rvs::backend {

using nlohmann::json;

namespace {

class InFlightGuard {
 public:
  explicit InFlightGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~InFlightGuard() { s_.release(); }
  InFlightGuard(const InFlightGuard&) = delete;
  InFlightGuard& operator=(const InFlightGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

double number_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw BackendError(std::string("malformed response: missing number '") + key + "'");
  }
  return it->get<double>();
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
  if (options_.base_url.empty()) throw ValidationError("remote backend requires a base URL");
  if (options_.max_in_flight == 0) throw ValidationError("max_in_flight must be positive");
  const auto scheme = options_.base_url.find("://");
  if (scheme == std::string::npos) {
    throw ValidationError("backend URL '" + options_.base_url + "' lacks a scheme");
  }
  const auto slash = options_.base_url.find('/', scheme + 3);
  host_ = options_.base_url.substr(0, slash);
  if (slash != std::string::npos) {
    prefix_ = options_.base_url.substr(slash);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  in_flight_ = std::make_unique<std::counting_semaphore<>>(
      static_cast<std::ptrdiff_t>(options_.max_in_flight));
}

RemoteBackend::~RemoteBackend() = default;

json RemoteBackend::call(const std::string& method, const std::string& path,
                         const json* body) const {
  InFlightGuard guard(*in_flight_);
  const std::string payload = body ? body->dump() : std::string();
  std::string last_error;
  auto backoff = options_.initial_backoff;

  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(host_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    client.set_connection_timeout(secs.count(), 0);
    client.set_read_timeout(secs.count(), 0);
    client.set_write_timeout(secs.count(), 0);

    const std::string target = prefix_ + path;
    httplib::Result res = method == "GET"
                              ? client.Get(target)
                              : client.Post(target, payload, "application/json");
    if (!res) {
      last_error = "backend unreachable at " + options_.base_url + ": " +
                   httplib::to_string(res.error());
      continue;
    }
    const int status = res->status;
    if (status == 200) {
      try {
        return json::parse(res->body);
      } catch (const json::parse_error&) {
        throw BackendError("malformed JSON response from " + target);
      }
    }
    if (status == 400 || status == 413) {
      throw RequestRejected("backend rejected " + target + ": " + res->body, status);
    }
    if (status >= 500) {
      last_error = "backend error " + std::to_string(status) + " from " + target;
      continue;
    }
    throw BackendError("unexpected status " + std::to_string(status) + " from " + target);
  }
  throw BackendError(last_error + " (after " + std::to_string(options_.retries + 1) +
                     " attempts)");
}

NliScore RemoteBackend::nli(std::string_view premise, std::string_view hypothesis) const {
  check_input("premise", premise);
  check_input("hypothesis", hypothesis);
  const json body = {{"premise", premise}, {"hypothesis", hypothesis}};
  const json r = call("POST", "/v1/nli", &body);
  NliScore s{number_field(r, "entailment"), number_field(r, "neutral"),
             number_field(r, "contradiction")};
  check_nli(s);
  return s;
}

EmbeddingVector RemoteBackend::embed(std::string_view text) const {
  check_input("text", text);
  const json body = {{"text", text}};
  const json r = call("POST", "/v1/embed", &body);
  auto vec = r.find("vector");
  if (vec == r.end() || !vec->is_array()) {
    throw BackendError("malformed response: missing array 'vector'");
  }
  EmbeddingVector out;
  out.values.reserve(vec->size());
  for (const auto& x : *vec) {
    if (!x.is_number()) throw BackendError("malformed response: non-numeric vector entry");
    out.values.push_back(x.get<double>());
  }
  if (auto dim = r.find("dimension"); dim != r.end()) {
    if (!dim->is_number_integer() || dim->get<std::size_t>() != out.values.size()) {
      throw BackendError("malformed response: 'dimension' disagrees with vector length");
    }
  }
  std::size_t expected = 0;
  if (!dimension_.compare_exchange_strong(expected, out.values.size()) &&
      expected != out.values.size()) {
    throw BackendError("embedding dimension changed from " + std::to_string(expected) + " to " +
                       std::to_string(out.values.size()));
  }
  for (double x : out.values) {
    if (!std::isfinite(x)) throw BackendError("embedding has a non-finite entry");
  }
  if (std::abs(simd::l2_norm(out.values) - 1.0) > 1e-6) normalize(out.values);
  check_embedding(out);
  return out;
}

MaskFillDistribution RemoteBackend::mask_fill(std::string_view prompt_with_mask) const {
  check_single_mask(prompt_with_mask);
  check_input("text", prompt_with_mask);
  const json body = {{"text", prompt_with_mask}};
  const json r = call("POST", "/v1/mask_fill", &body);
  auto entries = r.find("entries");
  if (entries == r.end() || !entries->is_array()) {
    throw BackendError("malformed response: missing array 'entries'");
  }
  MaskFillDistribution dist;
  for (const auto& e : *entries) {
    if (!e.is_object() || !e.contains("token") || !e["token"].is_string()) {
      throw BackendError("malformed response: entry without a token");
    }
    const double p = number_field(e, "probability");
    if (!dist.emplace(e["token"].get<std::string>(), p).second) {
      throw BackendError("malformed response: duplicate token '" +
                         e["token"].get<std::string>() + "'");
    }
  }
  check_mask_fill(dist);
  return dist;
}

json RemoteBackend::health() const { return call("GET", "/v1/health", nullptr); }

}  // namespace rvs::backend
