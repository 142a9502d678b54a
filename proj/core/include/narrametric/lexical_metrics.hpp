#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "narrametric/lexicon.hpp"
#include "narrametric/text_units.hpp"
#include "narrametric/value.hpp"
#include "narrametric/verb_tagger.hpp"

namespace narrametric {

// Optional replacements for the shipped word lists.
struct ResourcePaths {
  std::optional<std::filesystem::path> abbreviations;
  std::optional<std::filesystem::path> auxiliaries;
  std::optional<std::filesystem::path> cause_effect;
  std::optional<std::filesystem::path> connectives;
  std::optional<std::filesystem::path> verb_lemmas;
  std::optional<std::filesystem::path> verb_forms;
};

// Everything the text-only metrics need besides the text itself.
struct LanguageResources {
  text::SentenceSplitter splitter;
  Lexicon connectives;
  Lexicon cause_effect;
  std::shared_ptr<const VerbTagger> tagger;

  static LanguageResources defaults();
  // Missing paths fall back to the shipped lists.
  static LanguageResources load(const ResourcePaths& paths);
};

// Fraction of distinct n-grams among all n-grams. Undefined when the text has
// fewer than n tokens. Throws InputError for n < 1.
MetricValue distinct_n(std::span<const std::string> tokens, int n);

// The ratios below throw InputError("empty text") for an empty word list.
double type_token_ratio(std::span<const std::string> words);
double lexicon_ratio(std::span<const std::string> words, const Lexicon& lexicon);
double verb_ratio(std::span<const std::string> words, const VerbTagger& tagger);

inline double connective_ratio(std::span<const std::string> words, const Lexicon& connectives) {
  return lexicon_ratio(words, connectives);
}
inline double cause_effect_ratio(std::span<const std::string> words, const Lexicon& markers) {
  return lexicon_ratio(words, markers);
}

struct SurfaceStats {
  MetricValue dist2 = Undefined{"not computed"};
  double ttr = 0;
  double vr = 0;
  double cr = 0;   // connective ratio; reported as connective density (CD)
  double cer = 0;
  std::size_t word_count = 0;
  std::size_t connective_count = 0;
  std::size_t cause_effect_count = 0;
  std::size_t verb_count = 0;
};

// Throws InputError when the text has no lexical words.
SurfaceStats surface_stats(const text::ExplanationText& text, const LanguageResources& resources);

}  // namespace narrametric
