#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace narrametric {

// A set of word-sequence phrases, matched over word tokens.
class Lexicon {
 public:
  Lexicon() = default;
  // Each phrase is tokenized with text::tokenize_words; empty phrases are ignored.
  explicit Lexicon(std::span<const std::string> phrases);

  static Lexicon from_file(const std::filesystem::path& path);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Token length of the longest phrase that starts at words[pos], 0 if none.
  std::size_t longest_match(std::span<const std::string> words, std::size_t pos) const;

 private:
  // Keyed by first token; each bucket sorted longest first.
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> by_first_;
  std::size_t size_ = 0;
};

struct LexiconMatch {
  std::size_t start = 0;  // word index
  std::string phrase;     // matched tokens joined with spaces
};

struct LexiconMatchResult {
  std::size_t count = 0;
  std::vector<LexiconMatch> matches;
};

// Greedy left-to-right scan taking the longest phrase at each position;
// matches never overlap and a multiword phrase counts once.
LexiconMatchResult match_lexicon(std::span<const std::string> words, const Lexicon& lexicon);

}  // namespace narrametric
