#include "narrametric/verb_tagger.hpp"

#include <array>

#include "narrametric/resources.hpp"

namespace narrametric {

namespace {

constexpr std::array<std::string_view, 20> kDeterminers = {
    "a", "an", "the", "this", "these", "those", "its", "his", "her", "their",
    "our", "my", "your", "each", "every", "any", "some", "no", "another", "such"};

constexpr std::array<std::string_view, 10> kModals = {
    "will", "would", "shall", "should", "can", "could", "may", "might", "must", "ought"};

constexpr std::array<std::string_view, 8> kBareVerbTriggers = {
    "to", "do", "does", "did", "i", "you", "we", "they"};

// Words ending in "s" that are not plural nouns, beyond the -ss/-us/-is endings.
constexpr std::array<std::string_view, 17> kNotPlural = {
    "its", "hers", "ours", "yours", "theirs", "as", "was", "has", "does", "perhaps",
    "always", "sometimes", "whereas", "unless", "across", "towards", "afterwards"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& list, std::string_view word) {
  for (std::string_view entry : list) {
    if (entry == word) return true;
  }
  return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

RuleVerbTagger::RuleVerbTagger(std::span<const std::string> lemmas,
                               std::span<const std::string> irregular_forms,
                               std::span<const std::string> auxiliaries)
    : lemmas_(lemmas.begin(), lemmas.end()),
      irregular_(irregular_forms.begin(), irregular_forms.end()),
      auxiliaries_(auxiliaries.begin(), auxiliaries.end()) {}

std::shared_ptr<const RuleVerbTagger> RuleVerbTagger::with_defaults() {
  static const auto tagger = std::make_shared<const RuleVerbTagger>(
      resources::default_verb_lemmas(), resources::default_verb_forms(),
      resources::default_auxiliaries());
  return tagger;
}

bool RuleVerbTagger::is_lemma(std::string_view word) const {
  return lemmas_.count(std::string(word)) > 0;
}

bool RuleVerbTagger::is_inflected_form(std::string_view word) const {
  if (irregular_.count(std::string(word)) > 0) return true;
  auto lemma = [&](std::string_view stem, std::string_view add = {}) {
    std::string candidate(stem);
    candidate += add;
    return candidate.size() >= 2 && lemmas_.count(candidate) > 0;
  };
  auto undoubled = [&](std::string_view stem) {
    // "stopp" -> "stop"
    const std::size_t n = stem.size();
    return n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
           lemma(stem.substr(0, n - 1));
  };

  if (ends_with(word, "ies") && lemma(word.substr(0, word.size() - 3), "y")) return true;
  if (ends_with(word, "es") && lemma(word.substr(0, word.size() - 2))) return true;
  if (ends_with(word, "s") && !ends_with(word, "ss") && lemma(word.substr(0, word.size() - 1))) {
    return true;
  }
  if (ends_with(word, "ied") && lemma(word.substr(0, word.size() - 3), "y")) return true;
  if (ends_with(word, "ed")) {
    const std::string_view stem = word.substr(0, word.size() - 2);
    if (lemma(stem) || lemma(stem, "e") || undoubled(stem)) return true;
  }
  if (ends_with(word, "ing")) {
    const std::string_view stem = word.substr(0, word.size() - 3);
    if (lemma(stem) || lemma(stem, "e") || undoubled(stem)) return true;
    if (ends_with(stem, "y") && lemma(stem.substr(0, stem.size() - 1), "ie")) return true;  // lying
  }
  return false;
}

std::vector<bool> RuleVerbTagger::tag(std::span<const std::string> words) const {
  std::vector<bool> tags(words.size(), false);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& word = words[i];
    const std::string_view prev = i > 0 ? std::string_view(words[i - 1]) : std::string_view();
    if (auxiliaries_.count(word) > 0) {
      tags[i] = true;
      continue;
    }
    if (contains(kDeterminers, prev)) continue;
    if (is_inflected_form(word)) {
      tags[i] = true;
      continue;
    }
    if (!is_lemma(word)) continue;
    const bool plural_subject = i > 0 && !tags[i - 1] && prev.size() >= 4 && prev.back() == 's' &&
                                !ends_with(prev, "ss") && !ends_with(prev, "us") &&
                                !ends_with(prev, "is") && !contains(kNotPlural, prev);
    tags[i] = contains(kBareVerbTriggers, prev) || contains(kModals, prev) || plural_subject;
  }
  return tags;
}

}  // namespace narrametric
