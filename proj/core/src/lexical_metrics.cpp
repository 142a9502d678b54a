#include "narrametric/lexical_metrics.hpp"

#include <set>
#include <unordered_set>

#include "narrametric/error.hpp"
#include "narrametric/resources.hpp"

namespace narrametric {

namespace {

void require_words(std::span<const std::string> words) {
  if (words.empty()) throw InputError("empty text");
}

std::vector<std::string> list_or_default(const std::optional<std::filesystem::path>& path,
                                         std::vector<std::string> (*fallback)()) {
  return path ? resources::load_phrase_list(*path) : fallback();
}

}  // namespace

LanguageResources LanguageResources::defaults() { return load(ResourcePaths{}); }

LanguageResources LanguageResources::load(const ResourcePaths& paths) {
  const auto abbreviations = list_or_default(paths.abbreviations, resources::default_abbreviations);
  const auto connectives = list_or_default(paths.connectives, resources::default_connectives);
  const auto markers = list_or_default(paths.cause_effect, resources::default_cause_effect_markers);
  LanguageResources out{text::SentenceSplitter(abbreviations), Lexicon(connectives), Lexicon(markers),
                        nullptr};
  if (!paths.verb_lemmas && !paths.verb_forms && !paths.auxiliaries) {
    out.tagger = RuleVerbTagger::with_defaults();
  } else {
    out.tagger = std::make_shared<const RuleVerbTagger>(
        list_or_default(paths.verb_lemmas, resources::default_verb_lemmas),
        list_or_default(paths.verb_forms, resources::default_verb_forms),
        list_or_default(paths.auxiliaries, resources::default_auxiliaries));
  }
  return out;
}

MetricValue distinct_n(std::span<const std::string> tokens, int n) {
  if (n < 1) throw InputError("distinct-n needs n >= 1");
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return Undefined{"too short to measure diversity"};
  std::set<std::vector<std::string>> distinct;
  const std::size_t positions = tokens.size() - order + 1;
  for (std::size_t i = 0; i < positions; ++i) {
    distinct.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                     tokens.begin() + static_cast<std::ptrdiff_t>(i + order));
  }
  return static_cast<double>(distinct.size()) / static_cast<double>(positions);
}

double type_token_ratio(std::span<const std::string> words) {
  require_words(words);
  const std::unordered_set<std::string> types(words.begin(), words.end());
  return static_cast<double>(types.size()) / static_cast<double>(words.size());
}

double lexicon_ratio(std::span<const std::string> words, const Lexicon& lexicon) {
  require_words(words);
  return static_cast<double>(match_lexicon(words, lexicon).count) / static_cast<double>(words.size());
}

double verb_ratio(std::span<const std::string> words, const VerbTagger& tagger) {
  require_words(words);
  std::size_t verbs = 0;
  for (bool is_verb : tagger.tag(words)) verbs += is_verb ? 1 : 0;
  return static_cast<double>(verbs) / static_cast<double>(words.size());
}

SurfaceStats surface_stats(const text::ExplanationText& text, const LanguageResources& resources) {
  const std::vector<std::string> words = text::lexical_words(text.words);
  require_words(words);
  SurfaceStats stats;
  stats.dist2 = distinct_n(text::surface_tokens(text.raw), 2);
  stats.ttr = type_token_ratio(words);
  stats.word_count = words.size();
  stats.connective_count = match_lexicon(words, resources.connectives).count;
  stats.cause_effect_count = match_lexicon(words, resources.cause_effect).count;
  for (bool is_verb : resources.tagger->tag(words)) stats.verb_count += is_verb ? 1 : 0;
  const auto total = static_cast<double>(words.size());
  stats.cr = static_cast<double>(stats.connective_count) / total;
  stats.cer = static_cast<double>(stats.cause_effect_count) / total;
  stats.vr = static_cast<double>(stats.verb_count) / total;
  return stats;
}

}  // namespace narrametric
