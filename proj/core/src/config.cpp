#include "narrametric/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "narrametric/error.hpp"
#include "narrametric/http_provider.hpp"
#include "narrametric/score_cache.hpp"

namespace narrametric {

namespace {

using Json = nlohmann::json;

template <typename T>
T get(const Json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError("config key \"" + key + "\" has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

Settings parse_settings(std::string_view json, const std::filesystem::path& base_dir) {
  const Json doc = Json::parse(json, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw InputError("config must be a JSON object");
  Settings s;
  for (const auto& [key, value] : doc.items()) {
    if (key == "provider") {
      s.provider = get<std::string>(doc, key);
    } else if (key == "endpoint") {
      s.endpoint = get<std::string>(doc, key);
    } else if (key == "script") {
      s.script = resolve(base_dir, get<std::string>(doc, key));
    } else if (key == "max_inflight") {
      s.max_inflight = get<int>(doc, key);
    } else if (key == "timeout_seconds") {
      s.timeout_seconds = get<double>(doc, key);
    } else if (key == "max_retries") {
      s.max_retries = get<int>(doc, key);
    } else if (key == "shuffles") {
      s.evaluation.shuffles = get<int>(doc, key);
    } else if (key == "seed") {
      s.evaluation.seed = get<std::uint64_t>(doc, key);
    } else if (key == "single_shuffle") {
      s.evaluation.single_shuffle = get<bool>(doc, key);
    } else if (key == "cache_dir") {
      s.cache_dir = resolve(base_dir, get<std::string>(doc, key));
    } else if (key == "cache_enabled") {
      s.cache_enabled = get<bool>(doc, key);
    } else if (key == "max_failure_rate") {
      s.max_failure_rate = get<double>(doc, key);
    } else if (key == "alpha") {
      s.alpha = get<double>(doc, key);
    } else if (key == "lexicons") {
      if (!value.is_object()) throw InputError("config key \"lexicons\" must be an object");
      for (const auto& [name, path] : value.items()) {
        if (!path.is_string()) throw InputError("lexicon path for \"" + name + "\" must be a string");
        const auto p = resolve(base_dir, path.get<std::string>());
        if (name == "abbreviations") {
          s.resources.abbreviations = p;
        } else if (name == "auxiliaries") {
          s.resources.auxiliaries = p;
        } else if (name == "cause_effect") {
          s.resources.cause_effect = p;
        } else if (name == "connectives") {
          s.resources.connectives = p;
        } else if (name == "verb_lemmas") {
          s.resources.verb_lemmas = p;
        } else if (name == "verb_forms") {
          s.resources.verb_forms = p;
        } else {
          throw InputError("unknown lexicon \"" + name + "\"");
        }
      }
    } else {
      throw InputError("unknown config key \"" + key + "\"");
    }
  }
  if (s.max_inflight < 1) throw InputError("max_inflight must be at least 1");
  if (s.evaluation.shuffles < 1) throw InputError("shuffles must be at least 1");
  if (s.max_failure_rate < 0 || s.max_failure_rate > 1) throw InputError("max_failure_rate must lie in [0, 1]");
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_settings(buffer.str(), path.parent_path());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> process_env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

void apply_environment(Settings& settings, const EnvLookup& lookup) {
  if (auto endpoint = lookup("NARRAMETRIC_ENDPOINT")) settings.endpoint = *endpoint;
  if (auto key = lookup("NARRAMETRIC_API_KEY")) settings.api_key = *key;
}

std::shared_ptr<const LogprobProvider> make_provider(const Settings& settings) {
  CacheOptions cache;
  cache.enabled = settings.cache_enabled;
  std::shared_ptr<const LogprobProvider> inner;
  if (settings.provider == "http") {
    if (!settings.endpoint) throw InputError("no endpoint: pass --endpoint or set NARRAMETRIC_ENDPOINT");
    HttpProviderOptions options;
    options.endpoint = *settings.endpoint;
    options.api_key = settings.api_key;
    options.timeout_seconds = settings.timeout_seconds;
    options.max_retries = settings.max_retries;
    inner = std::make_shared<HttpProvider>(options);
    // Only real model scores are worth keeping across runs.
    if (!settings.cache_dir.empty()) cache.directory = settings.cache_dir;
  } else if (settings.provider == "scripted") {
    if (!settings.script) throw InputError("the scripted provider needs --script");
    inner = ScriptedProvider::from_json_file(*settings.script);
  } else if (settings.provider == "mock") {
    inner = std::make_shared<BigramCacheProvider>();
  } else {
    throw InputError("unknown provider \"" + settings.provider + "\" (expected http, scripted or mock)");
  }
  return std::make_shared<CachedProvider>(inner, cache);
}

}  // namespace narrametric
