#include "narrametric/error.hpp"

namespace narrametric {

const char* to_string(ProviderErrorKind kind) {
  switch (kind) {
    case ProviderErrorKind::kTransport:
      return "transport";
    case ProviderErrorKind::kMalformed:
      return "malformed response";
    case ProviderErrorKind::kProviderSide:
      return "provider error";
  }
  return "unknown";
}

ProviderError ProviderError::at_prefix(int prefix_index) const {
  Details details = details_;
  details.prefix_index = prefix_index;
  return ProviderError("prefix " + std::to_string(prefix_index) + ": " + what(), details);
}

}  // namespace narrametric
