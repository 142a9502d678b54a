#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "narrametric/lm_scoring.hpp"

namespace narrametric {

struct HttpProviderOptions {
  std::string endpoint;                  // e.g. http://127.0.0.1:8765
  std::optional<std::string> api_key;    // sent as a bearer token
  double timeout_seconds = 120.0;
  int max_retries = 2;                   // extra attempts for retryable failures
  double backoff_seconds = 0.5;          // doubled after each attempt
};

// Client for the log-probability sidecar: POST {endpoint}/v1/score_tokens.
class HttpProvider final : public LogprobProvider {
 public:
  explicit HttpProvider(HttpProviderOptions options);

  ScoredText score(std::string_view text) const override;
  // Endpoint plus the model name reported by GET {endpoint}/health, when
  // available. Resolved once.
  std::string identity() const override;

  const HttpProviderOptions& options() const { return options_; }

 private:
  HttpProviderOptions options_;
  mutable std::once_flag identity_once_;
  mutable std::string identity_;
};

namespace wire {

std::string encode_score_request(std::string_view text);

// Decodes a response. Non-200 statuses become ProviderError(kProviderSide)
// carrying the "error" message; 429 and 5xx are marked retryable. Bodies that
// do not match the schema become ProviderError(kMalformed).
ScoredText decode_score_response(int status, std::string_view body,
                                 std::optional<double> retry_after_seconds = std::nullopt);

// Seconds from a Retry-After header value given in seconds; nullopt otherwise.
std::optional<double> parse_retry_after(std::string_view header);

}  // namespace wire

}  // namespace narrametric
