#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "narrametric/lexical_metrics.hpp"
#include "narrametric/lm_scoring.hpp"
#include "narrametric/narrativity.hpp"

namespace narrametric {

// Runtime settings. Precedence when assembled by the CLI:
// command-line flags > environment > config file > these defaults.
struct Settings {
  std::string provider = "http";  // http | scripted | mock
  std::optional<std::string> endpoint;
  std::optional<std::string> api_key;
  std::optional<std::filesystem::path> script;  // scripted provider responses
  int max_inflight = 4;
  double timeout_seconds = 120.0;
  int max_retries = 2;
  EvaluationConfig evaluation;
  ResourcePaths resources;
  std::filesystem::path cache_dir = ".narrametric-cache";
  bool cache_enabled = true;
  double max_failure_rate = 0.10;
  double alpha = 0.05;
};

// JSON object; unknown keys are rejected. Relative paths are resolved against
// base_dir.
Settings parse_settings(std::string_view json, const std::filesystem::path& base_dir = {});
Settings load_settings(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char* name)>;
std::optional<std::string> process_env(const char* name);

// NARRAMETRIC_ENDPOINT and NARRAMETRIC_API_KEY.
void apply_environment(Settings& settings, const EnvLookup& lookup = process_env);

// The configured provider, wrapped in the score cache. Throws InputError for
// missing endpoint/script or an unknown provider name.
std::shared_ptr<const LogprobProvider> make_provider(const Settings& settings);

}  // namespace narrametric
