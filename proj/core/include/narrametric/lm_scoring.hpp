#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace narrametric {

// Per-token natural-log probabilities returned by a scorer. A token without a
// conditioning context (typically the first) has no log-probability.
struct ScoredText {
  std::string model;
  std::vector<std::string> tokens;
  std::vector<std::optional<double>> logprobs;

  std::size_t present_count() const;
};

// Source of token log-probabilities. Implementations must be deterministic and
// safe to call from several threads at once.
class LogprobProvider {
 public:
  virtual ~LogprobProvider() = default;
  virtual ScoredText score(std::string_view text) const = 0;
  // Stable identity of the model and its settings; used as part of cache keys.
  virtual std::string identity() const = 0;
};

// Scores `text` and checks the response invariants (equal lengths, log-probs
// finite and <= 0), raising ProviderError(kMalformed) otherwise.
ScoredText score_checked(const LogprobProvider& provider, std::string_view text);

// exp of the negative mean present log-probability.
// Throws InputError("unscorable text") when no log-probability is present.
double perplexity(const ScoredText& scored);

double text_perplexity(const LogprobProvider& provider, std::string_view text);

// values[x-1] is the perplexity of sentences 1..x joined by single spaces.
// A provider failure is rethrown annotated with the failing prefix.
std::vector<double> cumulative_trajectory(const LogprobProvider& provider,
                                          std::span<const std::string> sentences);

// Replays canned responses keyed by exact text. Entries may give full token
// lists or just a target perplexity; in the latter case the text is split on
// whitespace, the first token has no log-probability and every other token
// gets -ln(perplexity). Unscripted text goes to the fallback provider when one
// is set and raises ProviderError(kProviderSide) otherwise.
class ScriptedProvider final : public LogprobProvider {
 public:
  explicit ScriptedProvider(std::string model = "scripted");

  void add(std::string text, ScoredText scored);
  void add_perplexity(std::string text, double perplexity);
  void set_fallback(std::shared_ptr<const LogprobProvider> fallback);

  // {"model": "...", "fallback": "mock" (optional),
  //  "responses": [{"text": "...", "perplexity": 12.5} |
  //                {"text": "...", "tokens": [...], "logprobs": [null, -1.2, ...]}]}
  static std::shared_ptr<ScriptedProvider> from_json_file(const std::filesystem::path& path);

  ScoredText score(std::string_view text) const override;
  std::string identity() const override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::string model_;
  std::unordered_map<std::string, ScoredText> responses_;
  std::shared_ptr<const LogprobProvider> fallback_;
  mutable std::atomic<std::size_t> calls_{0};
};

// Deterministic stand-in for a language model. Tokens are tokenize_words(text);
// the first token and every bigram not seen earlier in the text get
// ln(0.001), a repeated bigram gets ln(0.5). Order-sensitive by construction,
// which makes it useful for property tests of the discourse metrics.
class BigramCacheProvider final : public LogprobProvider {
 public:
  ScoredText score(std::string_view text) const override;
  std::string identity() const override { return "mock:bigram-cache"; }

  std::size_t calls() const { return calls_.load(); }

 private:
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace narrametric
