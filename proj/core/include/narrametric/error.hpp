#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace narrametric {

// Base for every error the library raises deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: empty text, malformed corpus line, unknown metric, ...
class InputError : public Error {
 public:
  using Error::Error;
};

enum class ProviderErrorKind {
  kTransport,      // connection refused, timeout, TLS failure
  kMalformed,      // response body is not the documented shape
  kProviderSide,   // provider answered with an error payload
};

const char* to_string(ProviderErrorKind kind);

// Failure while obtaining token log-probabilities.
class ProviderError : public Error {
 public:
  struct Details {
    ProviderErrorKind kind = ProviderErrorKind::kTransport;
    int http_status = 0;              // 0 when no HTTP response was received
    bool retryable = false;
    std::optional<double> retry_after_seconds;
    int attempts = 1;
    std::optional<int> prefix_index;  // set when raised while scoring a trajectory prefix
  };

  ProviderError(const std::string& message, Details details)
      : Error(message), details_(std::move(details)) {}
  ProviderError(const std::string& message, ProviderErrorKind kind)
      : ProviderError(message, with_kind(kind)) {}

  const Details& details() const { return details_; }
  ProviderErrorKind kind() const { return details_.kind; }

  // Same error annotated with the 1-based prefix that failed.
  ProviderError at_prefix(int prefix_index) const;

 private:
  static Details with_kind(ProviderErrorKind kind) {
    Details details;
    details.kind = kind;
    return details;
  }

  Details details_;
};

}  // namespace narrametric
