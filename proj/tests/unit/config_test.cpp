#include "narrametric/config.hpp"

#include <map>

#include "doctest.h"
#include "narrametric/error.hpp"
#include "narrametric/score_cache.hpp"
#include "test_support.hpp"

using namespace narrametric;

namespace {

EnvLookup env(std::map<std::string, std::string> values) {
  return [values = std::move(values)](const char* name) -> std::optional<std::string> {
    const auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST_CASE("defaults") {
  const Settings s;
  CHECK(s.provider == "http");
  CHECK(s.max_inflight == 4);
  CHECK(s.evaluation.shuffles == 10);
  CHECK(s.evaluation.seed == 42);
  CHECK_FALSE(s.evaluation.single_shuffle);
  CHECK(s.alpha == 0.05);
}

TEST_CASE("config file keys") {
  const auto s = parse_settings(R"({
    "provider": "mock", "endpoint": "http://localhost:9000", "max_inflight": 2,
    "shuffles": 3, "seed": 7, "single_shuffle": true, "cache_dir": "cache",
    "lexicons": {"connectives": "lists/conn.txt", "verb_forms": "/abs/forms.txt"}
  })", "/base");
  CHECK(s.provider == "mock");
  CHECK(s.endpoint == "http://localhost:9000");
  CHECK(s.max_inflight == 2);
  CHECK(s.evaluation.shuffles == 3);
  CHECK(s.evaluation.seed == 7);
  CHECK(s.evaluation.single_shuffle);
  CHECK(s.cache_dir == std::filesystem::path("/base/cache"));
  CHECK(s.resources.connectives == std::filesystem::path("/base/lists/conn.txt"));
  CHECK(s.resources.verb_forms == std::filesystem::path("/abs/forms.txt"));
  CHECK_FALSE(s.resources.cause_effect.has_value());
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_settings(R"({"endpont": "x"})"), "unknown config key \"endpont\"", InputError);
  CHECK_THROWS_WITH_AS(parse_settings(R"({"seed": "42"})"), "config key \"seed\" has the wrong type", InputError);
  CHECK_THROWS_AS(parse_settings("[]"), InputError);
  CHECK_THROWS_AS(parse_settings("{"), InputError);
  CHECK_THROWS_AS(parse_settings(R"({"lexicons": {"nouns": "x"}})"), InputError);
  CHECK_THROWS_AS(parse_settings(R"({"max_inflight": 0})"), InputError);
  CHECK_THROWS_AS(parse_settings(R"({"shuffles": 0})"), InputError);
  CHECK_THROWS_AS(load_settings("/nonexistent/config.json"), InputError);
}

TEST_CASE("load_settings resolves paths against the file's directory") {
  testing::TempDir dir;
  std::ofstream(dir / "narrametric.json") << R"({"script": "responses.json"})";
  const auto s = load_settings(dir / "narrametric.json");
  CHECK(s.script == dir / "responses.json");
}

TEST_CASE("environment overrides the config file") {
  auto s = parse_settings(R"({"endpoint": "http://from-config"})");
  apply_environment(s, env({{"NARRAMETRIC_ENDPOINT", "http://from-env"}, {"NARRAMETRIC_API_KEY", "k"}}));
  CHECK(s.endpoint == "http://from-env");
  CHECK(s.api_key == "k");
  auto untouched = parse_settings(R"({"endpoint": "http://from-config"})");
  apply_environment(untouched, env({}));
  CHECK(untouched.endpoint == "http://from-config");
  CHECK_FALSE(untouched.api_key.has_value());
}

TEST_CASE("make_provider") {
  Settings s;
  s.provider = "mock";
  const auto mock = make_provider(s);
  CHECK(mock->identity() == "mock:bigram-cache");
  CHECK(dynamic_cast<const CachedProvider*>(mock.get()) != nullptr);

  s.provider = "http";
  CHECK_THROWS_AS(make_provider(s), InputError);
  s.endpoint = "http://127.0.0.1:1";
  CHECK_NOTHROW(make_provider(s));

  s.provider = "scripted";
  CHECK_THROWS_AS(make_provider(s), InputError);
  s.script = testing::fixture("worked_example_script.json");
  CHECK(make_provider(s)->identity() == "scripted:worked-example+mock:bigram-cache");

  s.provider = "llama";
  CHECK_THROWS_AS(make_provider(s), InputError);
}
