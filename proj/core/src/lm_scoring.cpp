#include "narrametric/lm_scoring.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "json.hpp"

#include "narrametric/error.hpp"
#include "narrametric/text_units.hpp"

namespace narrametric {

namespace {

ProviderError malformed(const std::string& message) {
  return ProviderError(message, ProviderErrorKind::kMalformed);
}

std::vector<std::string> whitespace_split(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::size_t ScoredText::present_count() const {
  std::size_t n = 0;
  for (const auto& lp : logprobs) n += lp.has_value() ? 1 : 0;
  return n;
}

ScoredText score_checked(const LogprobProvider& provider, std::string_view text) {
  ScoredText scored = provider.score(text);
  if (scored.tokens.size() != scored.logprobs.size()) {
    throw malformed("provider returned " + std::to_string(scored.tokens.size()) + " tokens but " +
                    std::to_string(scored.logprobs.size()) + " log-probabilities");
  }
  for (const auto& lp : scored.logprobs) {
    if (lp && (!std::isfinite(*lp) || *lp > 0.0)) {
      throw malformed("provider returned a log-probability outside (-inf, 0]");
    }
  }
  return scored;
}

double perplexity(const ScoredText& scored) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& lp : scored.logprobs) {
    if (!lp) continue;
    sum += *lp;
    ++n;
  }
  if (n == 0) throw InputError("unscorable text");
  return std::exp(-sum / static_cast<double>(n));
}

double text_perplexity(const LogprobProvider& provider, std::string_view text) {
  return perplexity(score_checked(provider, text));
}

std::vector<double> cumulative_trajectory(const LogprobProvider& provider,
                                          std::span<const std::string> sentences) {
  if (sentences.empty()) throw InputError("trajectory needs at least one sentence");
  std::vector<double> values;
  values.reserve(sentences.size());
  for (std::size_t x = 1; x <= sentences.size(); ++x) {
    const std::string prefix = text::join_sentences(sentences.first(x));
    try {
      values.push_back(text_perplexity(provider, prefix));
    } catch (const ProviderError& e) {
      throw e.at_prefix(static_cast<int>(x));
    }
  }
  return values;
}

ScriptedProvider::ScriptedProvider(std::string model) : model_(std::move(model)) {}

void ScriptedProvider::add(std::string text, ScoredText scored) {
  if (scored.model.empty()) scored.model = model_;
  responses_[std::move(text)] = std::move(scored);
}

void ScriptedProvider::add_perplexity(std::string text, double target) {
  if (!(target >= 1.0) || !std::isfinite(target)) {
    throw InputError("scripted perplexity must be a finite value >= 1");
  }
  ScoredText scored;
  scored.model = model_;
  scored.tokens = whitespace_split(text);
  if (scored.tokens.empty()) throw InputError("scripted text has no tokens");
  const double lp = -std::log(target);
  scored.logprobs.assign(scored.tokens.size(), lp);
  if (scored.tokens.size() > 1) scored.logprobs.front().reset();
  responses_[std::move(text)] = std::move(scored);
}

void ScriptedProvider::set_fallback(std::shared_ptr<const LogprobProvider> fallback) {
  fallback_ = std::move(fallback);
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read script " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("script " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("responses") || !doc["responses"].is_array()) {
    throw InputError("script " + path.string() + ": expected an object with a \"responses\" array");
  }
  auto provider = std::make_shared<ScriptedProvider>(doc.value("model", std::string("scripted")));
  if (doc.contains("fallback")) {
    if (doc["fallback"] != "mock") throw InputError("script " + path.string() + ": the only fallback is \"mock\"");
    provider->set_fallback(std::make_shared<BigramCacheProvider>());
  }
  std::size_t index = 0;
  for (const auto& entry : doc["responses"]) {
    const std::string where = "script " + path.string() + " response " + std::to_string(index++);
    if (!entry.is_object() || !entry.contains("text") || !entry["text"].is_string()) {
      throw InputError(where + ": missing \"text\"");
    }
    std::string text = entry["text"].get<std::string>();
    if (entry.contains("perplexity")) {
      if (!entry["perplexity"].is_number()) throw InputError(where + ": \"perplexity\" must be a number");
      provider->add_perplexity(std::move(text), entry["perplexity"].get<double>());
      continue;
    }
    if (!entry.contains("tokens") || !entry.contains("logprobs") || !entry["tokens"].is_array() ||
        !entry["logprobs"].is_array()) {
      throw InputError(where + ": needs \"perplexity\" or \"tokens\" and \"logprobs\"");
    }
    ScoredText scored;
    for (const auto& token : entry["tokens"]) {
      if (!token.is_string()) throw InputError(where + ": tokens must be strings");
      scored.tokens.push_back(token.get<std::string>());
    }
    for (const auto& lp : entry["logprobs"]) {
      if (lp.is_null()) {
        scored.logprobs.emplace_back();
      } else if (lp.is_number()) {
        scored.logprobs.emplace_back(lp.get<double>());
      } else {
        throw InputError(where + ": logprobs must be numbers or null");
      }
    }
    provider->add(std::move(text), std::move(scored));
  }
  return provider;
}

ScoredText ScriptedProvider::score(std::string_view text) const {
  ++calls_;
  const auto it = responses_.find(std::string(text));
  if (it != responses_.end()) return it->second;
  if (fallback_) return fallback_->score(text);
  std::string preview(text.substr(0, 60));
  if (text.size() > 60) preview += "...";
  throw ProviderError("no scripted response for text \"" + preview + "\"",
                      ProviderErrorKind::kProviderSide);
}

std::string ScriptedProvider::identity() const {
  std::string id = "scripted:" + model_;
  if (fallback_) id += "+" + fallback_->identity();
  return id;
}

ScoredText BigramCacheProvider::score(std::string_view text) const {
  ++calls_;
  static const double kUnseen = std::log(0.001);
  static const double kSeen = std::log(0.5);
  ScoredText scored;
  scored.model = identity();
  scored.tokens = text::tokenize_words(text);
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (std::size_t i = 0; i < scored.tokens.size(); ++i) {
    if (i == 0) {
      scored.logprobs.emplace_back(kUnseen);
      continue;
    }
    const auto bigram = std::make_pair(std::string_view(scored.tokens[i - 1]), std::string_view(scored.tokens[i]));
    scored.logprobs.emplace_back(seen.count(bigram) > 0 ? kSeen : kUnseen);
    seen.insert(bigram);
  }
  return scored;
}

}  // namespace narrametric
