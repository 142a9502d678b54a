#include "narrametric/http_provider.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "narrametric/error.hpp"

namespace narrametric {

namespace {

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("endpoint must start with http:// or https://: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw InputError("unsupported endpoint scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint endpoint;
  endpoint.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) endpoint.base_path = url.substr(path_start);
  while (!endpoint.base_path.empty() && endpoint.base_path.back() == '/') endpoint.base_path.pop_back();
  return endpoint;
}

ProviderError provider_error(const std::string& message, ProviderErrorKind kind, int status,
                             bool retryable, std::optional<double> retry_after = std::nullopt) {
  ProviderError::Details details;
  details.kind = kind;
  details.http_status = status;
  details.retryable = retryable;
  details.retry_after_seconds = retry_after;
  return ProviderError(message, details);
}

ProviderError with_attempts(const ProviderError& e, int attempts) {
  ProviderError::Details details = e.details();
  details.attempts = attempts;
  return ProviderError(e.what(), details);
}

std::unique_ptr<httplib::Client> make_client(const Endpoint& endpoint, const HttpProviderOptions& options) {
  auto client = std::make_unique<httplib::Client>(endpoint.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(options.timeout_seconds));
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  if (options.api_key) client->set_bearer_token_auth(*options.api_key);
  return client;
}

}  // namespace

namespace wire {

std::string encode_score_request(std::string_view text) {
  return nlohmann::json{{"text", std::string(text)}}.dump();
}

ScoredText decode_score_response(int status, std::string_view body, std::optional<double> retry_after) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (status != 200) {
    std::string message = "HTTP " + std::to_string(status);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("error") && doc["error"].is_string()) {
      message += ": " + doc["error"].get<std::string>();
    }
    const bool retryable = status == 429 || status >= 500;
    throw provider_error(message, ProviderErrorKind::kProviderSide, status, retryable, retry_after);
  }
  auto bad = [status](const std::string& what) {
    return provider_error("malformed score response: " + what, ProviderErrorKind::kMalformed, status, false);
  };
  if (doc.is_discarded()) throw bad("body is not JSON");
  if (!doc.is_object()) throw bad("expected an object");
  if (!doc.contains("model") || !doc["model"].is_string()) throw bad("missing string \"model\"");
  if (!doc.contains("tokens") || !doc["tokens"].is_array()) throw bad("missing array \"tokens\"");
  if (!doc.contains("logprobs") || !doc["logprobs"].is_array()) throw bad("missing array \"logprobs\"");

  ScoredText scored;
  scored.model = doc["model"].get<std::string>();
  for (const auto& token : doc["tokens"]) {
    if (!token.is_string()) throw bad("tokens must be strings");
    scored.tokens.push_back(token.get<std::string>());
  }
  for (const auto& lp : doc["logprobs"]) {
    if (lp.is_null()) {
      scored.logprobs.emplace_back();
      continue;
    }
    if (!lp.is_number()) throw bad("logprobs must be numbers or null");
    const double v = lp.get<double>();
    if (!std::isfinite(v) || v > 0) throw bad("log-probability outside (-inf, 0]");
    scored.logprobs.emplace_back(v);
  }
  if (scored.tokens.size() != scored.logprobs.size()) throw bad("tokens and logprobs differ in length");
  return scored;
}

std::optional<double> parse_retry_after(std::string_view header) {
  if (header.empty()) return std::nullopt;
  double seconds = 0;
  for (char c : header) {
    if (c < '0' || c > '9') return std::nullopt;
    seconds = seconds * 10 + (c - '0');
  }
  return seconds;
}

}  // namespace wire

HttpProvider::HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
  split_endpoint(options_.endpoint);
}

ScoredText HttpProvider::score(std::string_view text) const {
  const Endpoint endpoint = split_endpoint(options_.endpoint);
  const std::string path = endpoint.base_path + "/v1/score_tokens";
  const std::string body = wire::encode_score_request(text);
  double backoff = options_.backoff_seconds;
  const int max_attempts = 1 + std::max(0, options_.max_retries);

  for (int attempt = 1;; ++attempt) {
    std::optional<ProviderError> failure;
    auto client = make_client(endpoint, options_);
    const auto result = client->Post(path, body, "application/json");
    if (!result) {
      failure = provider_error("cannot reach " + options_.endpoint + ": " + httplib::to_string(result.error()),
                               ProviderErrorKind::kTransport, 0, true);
    } else {
      try {
        return wire::decode_score_response(
            result->status, result->body, wire::parse_retry_after(result->get_header_value("Retry-After")));
      } catch (const ProviderError& e) {
        failure = e;
      }
    }
    if (!failure->details().retryable || attempt >= max_attempts) throw with_attempts(*failure, attempt);
    const double wait = failure->details().retry_after_seconds.value_or(backoff);
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    backoff *= 2;
  }
}

std::string HttpProvider::identity() const {
  // The model name is part of the identity so a model swap behind the same
  // endpoint does not reuse cached scores. Looked up once via /health.
  std::call_once(identity_once_, [this] {
    identity_ = "http:" + options_.endpoint;
    try {
      const Endpoint endpoint = split_endpoint(options_.endpoint);
      auto client = make_client(endpoint, options_);
      const auto result = client->Get(endpoint.base_path + "/health");
      if (result && result->status == 200) {
        const auto doc = nlohmann::json::parse(result->body, nullptr, false);
        if (!doc.is_discarded() && doc.is_object() && doc.contains("model") && doc["model"].is_string()) {
          identity_ += "#" + doc["model"].get<std::string>();
        }
      }
    } catch (const std::exception&) {
      // Identity falls back to the endpoint alone.
    }
  });
  return identity_;
}

}  // namespace narrametric
