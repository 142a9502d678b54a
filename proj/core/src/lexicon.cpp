#include "narrametric/lexicon.hpp"

#include <algorithm>

#include "narrametric/resources.hpp"
#include "narrametric/text_units.hpp"

namespace narrametric {

Lexicon::Lexicon(std::span<const std::string> phrases) {
  for (const std::string& phrase : phrases) {
    std::vector<std::string> tokens = text::tokenize_words(phrase);
    if (tokens.empty()) continue;
    auto& bucket = by_first_[tokens.front()];
    if (std::find(bucket.begin(), bucket.end(), tokens) != bucket.end()) continue;
    bucket.push_back(std::move(tokens));
    ++size_;
  }
  for (auto& [first, bucket] : by_first_) {
    std::stable_sort(bucket.begin(), bucket.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }
}

Lexicon Lexicon::from_file(const std::filesystem::path& path) {
  return Lexicon(resources::load_phrase_list(path));
}

std::size_t Lexicon::longest_match(std::span<const std::string> words, std::size_t pos) const {
  if (pos >= words.size()) return 0;
  const auto it = by_first_.find(words[pos]);
  if (it == by_first_.end()) return 0;
  for (const auto& phrase : it->second) {
    if (pos + phrase.size() > words.size()) continue;
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(pos))) {
      return phrase.size();
    }
  }
  return 0;
}

LexiconMatchResult match_lexicon(std::span<const std::string> words, const Lexicon& lexicon) {
  LexiconMatchResult result;
  std::size_t pos = 0;
  while (pos < words.size()) {
    const std::size_t length = lexicon.longest_match(words, pos);
    if (length == 0) {
      ++pos;
      continue;
    }
    std::string phrase;
    for (std::size_t i = pos; i < pos + length; ++i) {
      if (i > pos) phrase += ' ';
      phrase += words[i];
    }
    result.matches.push_back({pos, std::move(phrase)});
    pos += length;
  }
  result.count = result.matches.size();
  return result;
}

}  // namespace narrametric
